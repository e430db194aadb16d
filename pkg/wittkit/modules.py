"""Finite free graded W(R)^+-modules given by a normal decomposition.

A module is the weight of each basis vector of L; M = L (x) S and every
structure map is a matrix on that basis.
"""

from collections import Counter
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .common import DegreeViolation, UsageError
from .frame import FrameElement, frame_mul, frame_sigma, frame_tau
from .matrices import Matrix, shape
from .rings import CoefficientRing, RingMap
from .witt import WittVector, witt_one, witt_zero


class GradedModule:
    def __init__(self, ring: CoefficientRing, m: int, basis_weights: Sequence[int]):
        self.ring = ring
        self.m = m
        self.basis_weights = tuple(int(w) for w in basis_weights)
        for w in self.basis_weights:
            if abs(w) > FrameElement.DEGREE_WINDOW:
                raise UsageError(f"Weight {w} outside the degree window")

    @classmethod
    def from_ranks(cls, ring: CoefficientRing, m: int, ranks: Mapping[int, int]) -> "GradedModule":
        weights: List[int] = []
        for w in sorted(int(k) for k in ranks):
            r = int(ranks[w] if w in ranks else ranks[str(w)])
            if r < 0:
                raise UsageError(f"Negative rank for weight {w}")
            weights += [w] * r
        return cls(ring, m, weights)

    @classmethod
    def unit(cls, ring: CoefficientRing, m: int) -> "GradedModule":
        return cls(ring, m, (0,))

    @property
    def rank(self) -> int:
        return len(self.basis_weights)

    @property
    def weights(self) -> Tuple[int, ...]:
        return tuple(sorted(self.basis_weights))

    @property
    def ranks(self) -> Dict[int, int]:
        return dict(sorted(Counter(self.basis_weights).items()))

    @property
    def depth(self) -> Optional[int]:
        return min(self.basis_weights) if self.basis_weights else None

    @property
    def altitude(self) -> Optional[int]:
        return max(self.basis_weights) if self.basis_weights else None

    def block(self, weight: int) -> List[int]:
        """Basis indices of L_weight."""
        return [i for i, w in enumerate(self.basis_weights) if w == weight]

    def __eq__(self, other):
        return (
            isinstance(other, GradedModule)
            and self.ring == other.ring
            and self.m == other.m
            and self.basis_weights == other.basis_weights
        )

    def __hash__(self):
        return hash((self.ring, self.m, self.basis_weights))

    def __repr__(self):
        return f"GradedModule({self.ring.name}, m={self.m}, weights={list(self.basis_weights)})"

    def to_json(self):
        return {"weights": {str(w): r for w, r in self.ranks.items()}}


def mod_type(M: GradedModule) -> Tuple[int, ...]:
    # rings are local by construction, so the type is well defined
    return M.weights


def mod_depth(M: GradedModule) -> Optional[int]:
    return M.depth


def mod_altitude(M: GradedModule) -> Optional[int]:
    return M.altitude


def nu_reduce(M: GradedModule) -> Dict[int, int]:
    """Ranks over R of the graded pieces of M (x)_S R."""
    return M.ranks


def mod_tensor(M: GradedModule, N: GradedModule) -> GradedModule:
    M.ring.check_same(N.ring)
    return GradedModule(
        M.ring,
        min(M.m, N.m),
        [a + b for a in M.basis_weights for b in N.basis_weights],
    )


def mod_dual(M: GradedModule) -> GradedModule:
    return GradedModule(M.ring, M.m, [-w for w in M.basis_weights])


def mod_base_change(M: GradedModule, ring_map: RingMap) -> GradedModule:
    M.ring.check_same(ring_map.source)
    return GradedModule(ring_map.target, M.m, M.basis_weights)


class GradedMorphism:
    """Degree-zero morphism M -> M' as a matrix of homogeneous frame elements.

    Entry (r, c) lies in S_(w_c - w'_r).
    """

    def __init__(self, source: GradedModule, target: GradedModule, entries: Sequence[Sequence[FrameElement]]):
        self.source = source
        self.target = target
        self.entries = tuple(tuple(row) for row in entries)

    @classmethod
    def identity(cls, M: GradedModule) -> "GradedMorphism":
        one, zero = witt_one(M.ring, M.m), witt_zero(M.ring, M.m)
        w = M.basis_weights
        return cls(
            M,
            M,
            [
                [FrameElement(w[c] - w[r], one if r == c else zero) for c in range(M.rank)]
                for r in range(M.rank)
            ],
        )

    @classmethod
    def from_payloads(cls, source: GradedModule, target: GradedModule, payloads: Sequence[Sequence[WittVector]]) -> "GradedMorphism":
        """Attach the forced degrees to a matrix of payloads."""
        return cls(
            source,
            target,
            [
                [
                    FrameElement(source.basis_weights[c] - target.basis_weights[r], x)
                    for c, x in enumerate(row)
                ]
                for r, row in enumerate(payloads)
            ],
        )

    def expected_degree(self, r: int, c: int) -> int:
        return self.source.basis_weights[c] - self.target.basis_weights[r]

    def __repr__(self):
        return f"GradedMorphism({self.entries!r})"


def morph_check(h: GradedMorphism) -> bool:
    if shape(h.entries) != (h.target.rank, h.source.rank) and h.source.rank:
        raise DegreeViolation(
            f"Matrix shape {shape(h.entries)} does not match {h.target.rank}x{h.source.rank}"
        )
    for r, row in enumerate(h.entries):
        for c, x in enumerate(row):
            expected = h.expected_degree(r, c)
            if x.deg != expected:
                raise DegreeViolation(
                    f"Entry ({r},{c}) has degree {x.deg}, expected {expected}",
                    entry=(r, c),
                )
    return True


def morph_compose(h: GradedMorphism, g: GradedMorphism) -> GradedMorphism:
    """h o g"""
    if g.target != h.source:
        raise UsageError("Morphisms are not composable")
    entries = []
    for r in range(h.target.rank):
        row = []
        for c in range(g.source.rank):
            acc = None
            for k in range(h.source.rank):
                term = frame_mul(h.entries[r][k], g.entries[k][c])
                acc = term if acc is None else acc + term
            row.append(acc)
        entries.append(row)
    return GradedMorphism(g.source, h.target, entries)


def morph_sigma(h: GradedMorphism) -> Matrix:
    return tuple(tuple(frame_sigma(x) for x in row) for row in h.entries)


def morph_tau(h: GradedMorphism) -> Matrix:
    return tuple(tuple(frame_tau(x) for x in row) for row in h.entries)


class ThetaMap:
    """theta_n: M_n -> M^tau on the basis of L.

    M_n is the sum of L_i (x) S_(n-i); a slot of degree k lands in W(R) for
    k <= 0, in I_R for k = 1 and in p^(k-1) I_R beyond.
    """

    def __init__(self, M: GradedModule, n: int):
        self.module = M
        self.n = n
        self.slot_degrees = tuple(n - w for w in M.basis_weights)

    @property
    def is_isomorphism(self) -> bool:
        return all(k <= 0 for k in self.slot_degrees)

    @property
    def image(self) -> Tuple[str, ...]:
        labels = []
        for k in self.slot_degrees:
            if k <= 0:
                labels.append("W")
            elif k == 1:
                labels.append("I_R")
            else:
                labels.append(f"p^{k - 1} I_R")
        return tuple(labels)

    def apply(self, coords: Sequence[FrameElement]) -> List[WittVector]:
        for x, k in zip(coords, self.slot_degrees):
            if x.deg != k:
                raise DegreeViolation(f"Coordinate {x!r} is not of degree {k}")
        return [frame_tau(x) for x in coords]


def theta(M: GradedModule, n: int) -> ThetaMap:
    return ThetaMap(M, n)
