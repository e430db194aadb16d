"""The display group L+_mu GL_n, its action on GL_n(W(R)) and banal displays.

An element is an n x n matrix of homogeneous frame elements whose entry
(j, k) has degree i_k - i_j, i.e. a degree-zero automorphism of the graded
module with basis weights I.
"""

import itertools
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .common import (
    CheckResult,
    DegreeViolation,
    NotBijective,
    NotInvertible,
    PrecisionError,
    Scan,
    SizeCap,
    UnsupportedRing,
    UsageError,
)
from .displays import Display, display_morphism_check, display_validate
from .frame import FrameElement, frame_mul
from .matrices import (
    Matrix,
    inverse,
    is_invertible,
    kron,
    mat_agrees,
    mat_mul,
    mat_to_json,
    shape,
    transpose,
)
from .modules import GradedModule, GradedMorphism, morph_check, morph_compose, morph_sigma, morph_tau
from .padic import PAdicMatrix
from .rings import CoefficientRing
from .witt import WittVector, witt_enumerate, witt_random


class CocharacterVector:
    """The diagonal cocharacter mu_I: lambda -> diag(lambda^i_1, ..., lambda^i_n)."""

    def __init__(self, weights: Sequence[int]):
        self.weights = tuple(int(i) for i in weights)
        if list(self.weights) != sorted(self.weights):
            raise UsageError(f"Cocharacter weights {list(self.weights)} must be sorted")

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def is_minuscule(self) -> bool:
        return not self.weights or max(self.weights) - min(self.weights) <= 1

    def module(self, ring: CoefficientRing, m: int) -> GradedModule:
        return GradedModule(ring, m, self.weights)

    def mu_p(self, ring: CoefficientRing, prec: int) -> PAdicMatrix:
        """mu(p) = diag(p^i_1, ..., p^i_n); it equals its Frobenius twist."""
        return PAdicMatrix.diagonal(ring, self.weights, prec)

    def degree(self, j: int, k: int) -> int:
        return self.weights[k] - self.weights[j]

    def __eq__(self, other):
        return isinstance(other, CocharacterVector) and self.weights == other.weights

    def __hash__(self):
        return hash(self.weights)

    def __repr__(self):
        return f"mu{list(self.weights)}"


class DisplayGroupElement(GradedMorphism):
    """Element of L+_mu GL_n; construction does not validate, see dg_membership."""

    def __init__(self, mu: CocharacterVector, entries: Sequence[Sequence[FrameElement]]):
        entries = tuple(tuple(row) for row in entries)
        if not entries or shape(entries) != (mu.n, mu.n):
            raise UsageError(f"Expected a {mu.n}x{mu.n} matrix of frame elements")
        x = entries[0][0].payload
        m = min(e.payload.length for row in entries for e in row)
        module = mu.module(x.ring, m)
        super().__init__(module, module, entries)
        self.mu = mu

    @classmethod
    def from_payloads(cls, mu: CocharacterVector, payloads: Sequence[Sequence[WittVector]]) -> "DisplayGroupElement":
        return cls(
            mu,
            [
                [FrameElement(mu.degree(j, k), x) for k, x in enumerate(row)]
                for j, row in enumerate(payloads)
            ],
        )

    @property
    def payloads(self) -> Matrix:
        return tuple(tuple(e.payload for e in row) for row in self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, DisplayGroupElement)
            and self.mu == other.mu
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.mu, self.entries))

    def __repr__(self):
        return f"DisplayGroupElement({self.mu!r}, {self.payloads!r})"

    def to_json(self):
        return {"mu": list(self.mu.weights), "payloads": mat_to_json(self.payloads)}


def dg_membership(h: DisplayGroupElement, mu: Optional[CocharacterVector] = None) -> CheckResult:
    """Degree pattern plus invertibility of tau(h); the witness is the offending entry."""
    mu = mu or h.mu
    name = f"membership in L+_{mu!r} GL_{mu.n}"
    if shape(h.entries) != (mu.n, mu.n):
        return CheckResult(name, False, "shape")
    for j, row in enumerate(h.entries):
        for k, x in enumerate(row):
            if x.deg != mu.degree(j, k):
                return CheckResult(name, False, (j, k))
    if not is_invertible(dg_tau(h)):
        return CheckResult(name, False, "tau(h) is not invertible")
    return CheckResult(name, True)


def dg_sigma(h: DisplayGroupElement) -> Matrix:
    return morph_sigma(h)


def dg_tau(h: DisplayGroupElement) -> Matrix:
    return morph_tau(h)


def dg_identity(mu: CocharacterVector, ring: CoefficientRing, m: int) -> DisplayGroupElement:
    return DisplayGroupElement(mu, GradedMorphism.identity(mu.module(ring, m)).entries)


def dg_mul(h: DisplayGroupElement, g: DisplayGroupElement) -> DisplayGroupElement:
    if h.mu != g.mu:
        raise UsageError("Display group elements of different cocharacters")
    return DisplayGroupElement(h.mu, morph_compose(h, g).entries)


def dg_inverse(h: DisplayGroupElement) -> DisplayGroupElement:
    """Payloads read off tau(h)^-1 in degrees <= 0 and sigma(h)^-1 in degrees >= 1."""
    tau_inv = inverse(dg_tau(h))
    sigma_inv = inverse(dg_sigma(h))
    mu = h.mu
    return DisplayGroupElement.from_payloads(
        mu,
        [
            [
                tau_inv[j][k] if mu.degree(j, k) <= 0 else sigma_inv[j][k]
                for k in range(mu.n)
            ]
            for j in range(mu.n)
        ],
    )


def dg_action(U: Matrix, h: DisplayGroupElement) -> Matrix:
    """U . h = tau(h)^-1 . U . sigma(h)"""
    return mat_mul(inverse(dg_tau(h)), mat_mul(U, dg_sigma(h)))


def conjugation_identity_check(h: DisplayGroupElement) -> bool:
    """sigma(h) = mu(p) . f(tau(h)) . mu(p)^-1 over a perfect field."""
    tau = PAdicMatrix.from_witt(dg_tau(h))
    m = tau.precision
    mu_p = h.mu.mu_p(tau.ring, m)
    mu_p_inv = PAdicMatrix.diagonal(tau.ring, [-i for i in h.mu.weights], m)
    return (mu_p * tau.frobenius() * mu_p_inv).agrees_with(PAdicMatrix.from_witt(dg_sigma(h)))


def banal_display(U: Matrix, mu: CocharacterVector) -> Display:
    """D_U: the standard datum with weights I and Phi = U."""
    if shape(U) != (mu.n, mu.n):
        raise UsageError(f"U has shape {shape(U)}, expected {mu.n}x{mu.n}")
    x = U[0][0]
    try:
        return display_validate(mu.module(x.ring, x.length), U)
    except NotBijective as err:
        raise NotInvertible(f"U is not invertible: {err}") from err


def dg_morphism(h: DisplayGroupElement) -> GradedMorphism:
    """Psi(h): D_(U.h) -> D_U, the same matrix seen as a morphism of displays."""
    return GradedMorphism(h.source, h.target, h.entries)


def in_hom_set(h: DisplayGroupElement, U: Matrix, U_prime: Matrix) -> bool:
    """Psi(h) is a morphism D_U -> D_U', checked on the displays themselves."""
    return display_morphism_check(dg_morphism(h), banal_display(U, h.mu), banal_display(U_prime, h.mu))


def dg_random(mu: CocharacterVector, ring: CoefficientRing, m: int, rng: np.random.Generator) -> DisplayGroupElement:
    while True:
        h = DisplayGroupElement.from_payloads(
            mu, [[witt_random(ring, m, rng) for _ in range(mu.n)] for _ in range(mu.n)]
        )
        if dg_membership(h):
            return h


def gl_random(ring: CoefficientRing, m: int, n: int, rng: np.random.Generator) -> Matrix:
    while True:
        U = tuple(tuple(witt_random(ring, m, rng) for _ in range(n)) for _ in range(n))
        if is_invertible(U):
            return U


def _check_cap(ring: CoefficientRing, m: int, n: int, cap: Optional[int]) -> int:
    cap = ring.DEFAULT_SIZE_CAP if cap is None else cap
    size = ring.size**m
    if size ** (n * n) > cap:
        raise SizeCap(f"{size ** (n * n)} matrices over W_{m}({ring.name}) exceed the cap {cap}")
    return cap


class DisplayGroupScan(Scan):
    """Exhaustive scan of the payload matrices, chunked on the first entry."""

    SCAN_SUBJECT = "display_group"
    RESULT_CSV_FIELDS = ["key", "payloads", "tau", "sigma"]

    def __init__(self, mu: CocharacterVector, ring: CoefficientRing, m: int, cap: Optional[int] = None, **kwargs):
        self.mu = mu
        self.ring = ring
        self.m = m
        cap = _check_cap(ring, m, mu.n, cap)
        self.values = list(witt_enumerate(ring, m, cap))
        super().__init__(list(enumerate(self.values)), **kwargs)

    def inspect_chunk(self, chunk) -> List[dict]:
        index, first = chunk
        n = self.mu.n
        rest = n * n - 1
        stride = len(self.values) ** rest
        rows = []
        for offset, tail in enumerate(itertools.product(self.values, repeat=rest)):
            flat = (first,) + tail
            h = DisplayGroupElement.from_payloads(
                self.mu, [flat[r * n : (r + 1) * n] for r in range(n)]
            )
            if not dg_membership(h):
                continue
            rows.append(
                {
                    "key": index * stride + offset,
                    "element": h,
                    "payloads": str(h.payloads),
                    "tau": str(dg_tau(h)),
                    "sigma": str(dg_sigma(h)),
                }
            )
        return rows


def dg_enumerate(
    mu: CocharacterVector,
    ring: CoefficientRing,
    m: int,
    cap: Optional[int] = None,
    threads: int = 1,
    output_dir: Optional[str] = None,
    quiet: bool = True,
) -> List[DisplayGroupElement]:
    """All members over W_m(R), in canonical order."""
    scan = DisplayGroupScan(mu, ring, m, cap, threads=threads, output_dir=output_dir, quiet=quiet)
    return [row["element"] for row in scan.run()]


def gl_enumerate(ring: CoefficientRing, m: int, n: int, cap: Optional[int] = None) -> List[Matrix]:
    cap = _check_cap(ring, m, n, cap)
    values = list(witt_enumerate(ring, m, cap))
    result = []
    for flat in itertools.product(values, repeat=n * n):
        U = tuple(tuple(flat[r * n : (r + 1) * n]) for r in range(n))
        if is_invertible(U):
            result.append(U)
    return result


def hom_set(
    U: Matrix,
    U_prime: Matrix,
    mu: CocharacterVector,
    cap: Optional[int] = None,
    elements: Optional[Sequence[DisplayGroupElement]] = None,
    limit: Optional[int] = None,
) -> List[DisplayGroupElement]:
    """Hom(U, U') in the banal category, by exhaustive scan.

    An element h belongs to it when Psi(h) is a morphism of displays
    D_U -> D_U'. With `limit`, the scan stops after that many elements.
    """
    x = U[0][0]
    if elements is None:
        elements = dg_enumerate(mu, x.ring, x.length, cap)
    D, E = banal_display(U, mu), banal_display(U_prime, mu)
    found = []
    for h in elements:
        if display_morphism_check(dg_morphism(h), D, E):
            found.append(h)
            if limit is not None and len(found) >= limit:
                break
    return found


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int):
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x


def _classes(labels: Sequence[int], space: Sequence[Matrix]) -> List[List[Matrix]]:
    # classes ordered by their first member in enumeration order
    groups: Dict[int, List[Matrix]] = {}
    for label, U in zip(labels, space):
        groups.setdefault(label, []).append(U)
    return list(groups.values())


def _require_char_p(ring: CoefficientRing):
    # sigma keeps the length only in characteristic p
    if not ring.is_char_p:
        raise UnsupportedRing(f"Orbit enumeration needs characteristic p, not {ring.name}")


def dg_orbits(
    space: Sequence[Matrix], elements: Sequence[DisplayGroupElement]
) -> List[List[Matrix]]:
    """Orbits of the action on ``space`` by union-find."""
    if space:
        _require_char_p(space[0][0][0].ring)
    index = {U: i for i, U in enumerate(space)}
    uf = UnionFind(len(space))
    for U, i in index.items():
        for h in elements:
            image = dg_action(U, h)
            if image not in index:
                raise AssertionError(f"{image} left the enumerated space")
            uf.union(i, index[image])
    return _classes([uf.find(i) for i in range(len(space))], space)


def reachability_classes(
    space: Sequence[Matrix], elements: Sequence[DisplayGroupElement]
) -> List[List[Matrix]]:
    """Isomorphism classes of banal displays from the non-empty hom-sets.

    U and U' are linked when hom_set(U, U') is not empty. Being isomorphic
    is an equivalence relation, so each U is only compared with one
    representative per class found so far.
    """
    if not space:
        return []
    _require_char_p(space[0][0][0].ring)
    mu = elements[0].mu if elements else None
    graph = sp.dok_matrix((len(space), len(space)), dtype=np.int8)
    representatives: List[int] = []
    for i, U in enumerate(space):
        for r in representatives:
            if mu is not None and hom_set(U, space[r], mu, elements=elements, limit=1):
                graph[i, r] = 1
                break
        else:
            representatives.append(i)
    _, labels = connected_components(graph.tocsr(), directed=True, connection="weak")
    return _classes(list(labels), space)


GRADING_CONSTRUCTIONS = ("standard", "tensor-square", "dual")


def _degree_witness(h: GradedMorphism) -> Optional[Tuple[int, int]]:
    try:
        morph_check(h)
    except DegreeViolation as err:
        return err.entry
    return None


def grading_preservation_check(h: DisplayGroupElement, construction: str = "standard") -> CheckResult:
    """The matrix induced by h on L, L (x) L or L^v respects the induced grading."""
    name = f"grading preserved on {construction}"
    if construction not in GRADING_CONSTRUCTIONS:
        raise UsageError(f"Unknown construction {construction}, expected one of {GRADING_CONSTRUCTIONS}")
    witness = _degree_witness(h)
    if witness is not None or construction == "standard":
        return CheckResult(name, witness is None, witness)
    weights = h.source.basis_weights
    ring, m = h.source.ring, h.source.m
    if construction == "tensor-square":
        module = GradedModule(ring, m, [a + b for a in weights for b in weights])
        induced = GradedMorphism(module, module, kron(h.entries, h.entries, mul=frame_mul))
        expected_tau = kron(dg_tau(h), dg_tau(h))
    else:
        module = GradedModule(ring, m, [-w for w in weights])
        induced = GradedMorphism(module, module, transpose(dg_inverse(h).entries))
        expected_tau = transpose(inverse(dg_tau(h)))
    witness = _degree_witness(induced)
    if witness is not None:
        return CheckResult(name, False, witness)
    try:
        agrees = mat_agrees(morph_tau(induced), expected_tau)
    except PrecisionError as err:
        return CheckResult(name, False, str(err))
    return CheckResult(name, agrees, None if agrees else "tau of the induced matrix")

