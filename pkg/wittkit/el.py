"""Unramified EL data and the determinant condition as a rank comparison.

After Morita reduction O_B = O_L with [L : Q_p] = a, presented inside
W_m(F_q) by the Teichmuller lift zeta of a generator of F_(p^a)^x. The
component M(j) of a W(F_q)-module with O_L-action is where zeta acts by
f^j(zeta).
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .common import NotEquivariant, SplitFailure, UnsupportedRing, UsageError
from .display_group import CocharacterVector, DisplayGroupElement, dg_membership
from .displays import Display, display_morphism_check, display_validate
from .matrices import (
    Matrix,
    diagonal,
    identity,
    is_invertible,
    kron,
    mat_agrees,
    mat_frobenius,
    mat_mul,
    mat_sub,
    mat_scale,
    shape,
)
from .modules import GradedModule, GradedMorphism, morph_sigma, morph_tau
from .rings import CoefficientRing, RingElement
from .witt import WittVector, teichmuller, witt_one, witt_random, witt_zero


def o_l_generator(ring: CoefficientRing, a: int) -> RingElement:
    """zeta = g^((q - 1) / (p^a - 1)) generating F_(p^a)^x inside F_q."""
    if not ring.is_field:
        raise UnsupportedRing(f"EL data live over a finite field, not {ring.name}")
    if ring.degree % a:
        raise UnsupportedRing(f"F_(p^{a}) does not embed in {ring.name}")
    g = ring.multiplicative_generator
    return g ** ((ring.size - 1) // (ring.p**a - 1))


def conjugate_lifts(ring: CoefficientRing, a: int, m: int) -> List[WittVector]:
    """[zeta^(p^j)] = f^j([zeta]) for j = 0, ..., a - 1."""
    zeta = o_l_generator(ring, a)
    return [teichmuller(zeta ** (ring.p**j), m) for j in range(a)]


class ELDatum:
    """Lattice with O_B-action and 0/1 weights.

    ``action`` is the matrix of zeta on the basis; it must respect the
    grading. ``s`` is the matrix size of the simple factor M_s(O_L).
    """

    def __init__(
        self,
        ring: CoefficientRing,
        m: int,
        a: int,
        weights: Sequence[int],
        action: Matrix,
        s: int = 1,
    ):
        self.ring = ring
        self.m = m
        self.a = a
        self.s = s
        self.weights = tuple(int(w) for w in weights)
        self.action = tuple(tuple(row) for row in action)
        if any(w not in (0, 1) for w in self.weights):
            raise UsageError(f"Weights {list(self.weights)} are not all 0 or 1")
        o_l_generator(ring, a)
        if shape(self.action) != (self.rank, self.rank):
            raise UsageError(f"Action must be {self.rank}x{self.rank}")
        _check_graded(self.action, self.weights)

    @classmethod
    def split(
        cls,
        ring: CoefficientRing,
        m: int,
        a: int,
        lambda0: Sequence[int],
        lambda1: Sequence[int],
    ) -> "ELDatum":
        """The datum with prescribed ranks of Lambda^0(j) and Lambda^1(j).

        Basis vectors are sorted by weight, then by component.
        """
        if len(lambda0) != a or len(lambda1) != a:
            raise UsageError(f"Give one rank per component, {a} in total")
        if len({r0 + r1 for r0, r1 in zip(lambda0, lambda1)}) > 1:
            raise UsageError("Components of an O_L-lattice have equal ranks")
        conjugates = conjugate_lifts(ring, a, m)
        weights, entries = [], []
        for w, ranks in ((0, lambda0), (1, lambda1)):
            for j, r in enumerate(ranks):
                weights += [w] * r
                entries += [conjugates[j]] * r
        if not entries:
            raise UsageError("An EL datum needs a non-zero lattice")
        return cls(ring, m, a, weights, diagonal(entries))

    @property
    def rank(self) -> int:
        return len(self.weights)

    @property
    def module(self) -> GradedModule:
        return GradedModule(self.ring, self.m, self.weights)

    @property
    def lambda0_ranks(self) -> List[int]:
        return component_split(_block(self.action, _indices(self.weights, 0)), self.a).ranks

    @property
    def lambda1_ranks(self) -> List[int]:
        return component_split(_block(self.action, _indices(self.weights, 1)), self.a).ranks

    def __repr__(self):
        return f"ELDatum(a={self.a}, s={self.s}, weights={list(self.weights)})"

    def to_json(self):
        return {
            "factors": [{"a": self.a, "s": self.s}],
            "lambda_rank": self.rank,
            "mu": list(self.weights),
            "lambda0": self.lambda0_ranks,
            "lambda1": self.lambda1_ranks,
        }


def _indices(weights: Sequence[int], w: int) -> List[int]:
    return [i for i, x in enumerate(weights) if x == w]


def _block(A: Matrix, indices: Sequence[int]) -> Matrix:
    return tuple(tuple(A[r][c] for c in indices) for r in indices)


def _check_graded(A: Matrix, weights: Sequence[int]):
    for r, row in enumerate(A):
        for c, x in enumerate(row):
            if weights[r] != weights[c] and not x.is_zero():
                raise NotEquivariant(f"The O_B-action mixes weights at entry ({r},{c})")


def morita_reduce(datum: ELDatum) -> ELDatum:
    """Replace M_s(O_L) acting on Lambda' (x) O_L^s by O_L acting on Lambda'."""
    s = datum.s
    if s == 1:
        return datum
    if datum.rank % s:
        raise UsageError(f"Rank {datum.rank} is not divisible by s = {s}")
    kept = list(range(0, datum.rank, s))
    reduced = _block(datum.action, kept)
    weights = [datum.weights[i] for i in kept]
    if any(datum.weights[i] != weights[i // s] for i in range(datum.rank)):
        raise UsageError("Weights are not constant on the O_L^s blocks")
    if not mat_agrees(kron(reduced, identity(datum.ring, datum.m, s)), datum.action):
        raise UsageError("Action is not of the form A' (x) 1_s")
    return ELDatum(datum.ring, datum.m, datum.a, weights, reduced)


def el_group_membership(h: Matrix, datum: ELDatum) -> bool:
    """h in GL_(O_B)(Lambda (x) W): invertible and commuting with the action."""
    if shape(h) != (datum.rank, datum.rank) or not is_invertible(h):
        return False
    return mat_agrees(mat_mul(h, datum.action), mat_mul(datum.action, h))


def el_compatible(h: GradedMorphism, datum: ELDatum) -> bool:
    """tau(h) commutes with zeta and sigma(h) with f(zeta)."""
    A, fA = datum.action, mat_frobenius(datum.action)
    tau, sigma = morph_tau(h), morph_sigma(h)
    return mat_agrees(mat_mul(tau, A), mat_mul(A, tau)) and mat_agrees(
        mat_mul(sigma, fA), mat_mul(fA, sigma)
    )


@dataclass
class ComponentSplit:
    projectors: Tuple[Matrix, ...]
    bases: Tuple[Tuple[int, ...], ...]

    @property
    def ranks(self) -> List[int]:
        return [len(b) for b in self.bases]

    def to_json(self):
        return {"ranks": self.ranks, "bases": [list(b) for b in self.bases]}


def _residue_pivots(M: Matrix) -> Tuple[int, ...]:
    """Pivot columns of M modulo p; their number is the rank over the residue field."""
    if not M:
        return ()
    rows = [[x.coeffs[0] for x in row] for row in M]
    pivots = []
    r = 0
    for c in range(len(rows[0])):
        pivot = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [inv * x for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return tuple(pivots)


def component_split(action: Matrix, a: int) -> ComponentSplit:
    """Simultaneous eigenspaces of zeta with eigenvalues f^j([zeta]).

    E_j = prod_(i != j) (A - l_i) / (l_j - l_i); the differences are units
    because the conjugates of zeta are distinct modulo p.
    """
    if not action:
        return ComponentSplit(tuple(() for _ in range(a)), tuple(() for _ in range(a)))
    x = action[0][0]
    ring, m, n = x.ring, x.length, len(action)
    lams = conjugate_lifts(ring, a, m)
    one = identity(ring, m, n)
    projectors = []
    for j in range(a):
        E = one
        for i in range(a):
            if i == j:
                continue
            shifted = mat_sub(action, mat_scale(lams[i], one))
            E = mat_mul(E, mat_scale((lams[j] - lams[i]).inverse(), shifted))
        projectors.append(E)
    total = projectors[0]
    for E in projectors[1:]:
        total = tuple(tuple(p + q for p, q in zip(ra, rb)) for ra, rb in zip(total, E))
    if not mat_agrees(total, one):
        raise SplitFailure("Projectors do not sum to the identity")
    for j, E in enumerate(projectors):
        if not mat_agrees(mat_mul(E, E), E):
            raise SplitFailure(f"Projector {j} is not idempotent: the action is not semisimple")
    return ComponentSplit(tuple(projectors), tuple(_residue_pivots(E) for E in projectors))


def components(datum: ELDatum) -> List[List[int]]:
    """Basis indices of each component, for the diagonal action of a split datum."""
    lams = conjugate_lifts(datum.ring, datum.a, datum.m)
    result: List[List[int]] = [[] for _ in range(datum.a)]
    for i in range(datum.rank):
        j = next((j for j, lam in enumerate(lams) if datum.action[i][i].agrees_with(lam)), None)
        if j is None or any(
            not datum.action[i][c].is_zero() for c in range(datum.rank) if c != i
        ):
            raise SplitFailure("The action is not diagonal in a conjugate eigenbasis")
        result[j].append(i)
    return result


def component_shift(datum: ELDatum) -> Matrix:
    """Pi with Pi(e_k of M(j)) = e_k of M(j + 1)."""
    comps = components(datum)
    if len({len(c) for c in comps}) > 1:
        raise SplitFailure("Components have different ranks")
    n = datum.rank
    target: Dict[int, int] = {}
    for j, comp in enumerate(comps):
        for k, i in enumerate(comp):
            target[i] = comps[(j + 1) % datum.a][k]
    one, zero = witt_one(datum.ring, datum.m), witt_zero(datum.ring, datum.m)
    return tuple(
        tuple(one if target[c] == r else zero for c in range(n)) for r in range(n)
    )


def el_banal_display(U: Matrix, datum: ELDatum) -> Display:
    """The display with Phi = U . Pi for U in GL_(O_B)(Lambda (x) W)."""
    if not el_group_membership(U, datum):
        raise NotEquivariant("U does not commute with the O_B-action")
    return display_validate(datum.module, mat_mul(U, component_shift(datum)))


def lie_ranks(D: Display, datum: ELDatum) -> List[int]:
    """Ranks of the components of Lie = L_0 modulo I_R."""
    block = _block(datum.action, D.module.block(0))
    return component_split(block, datum.a).ranks


def determinant_condition(D: Display, datum: ELDatum) -> bool:
    """rk Lambda^0(j) = rk Lie(j) for every j, after checking that O_B acts on D."""
    if D.rank != datum.rank:
        raise UsageError("Display and datum have different ranks")
    weights = D.module.basis_weights
    if any(w not in (0, 1) for w in weights):
        raise UsageError(f"Weights {list(weights)} are not those of a 1-display")
    _check_graded(datum.action, weights)
    action = GradedMorphism.from_payloads(D.module, D.module, datum.action)
    if not display_morphism_check(action, D, D):
        raise NotEquivariant("The O_B-action does not commute with Phi")
    return lie_ranks(D, datum) == datum.lambda0_ranks


def swap_weights(D: Display, indices: Optional[Sequence[int]] = None) -> Display:
    """The same Phi on a module with the weights 0 and 1 exchanged."""
    indices = range(D.rank) if indices is None else indices
    weights = list(D.module.basis_weights)
    for i in indices:
        weights[i] = 1 - weights[i]
    return display_validate(GradedModule(D.ring, D.m, weights), D.phi)


def _component_mask(datum: ELDatum) -> List[List[bool]]:
    comp = {i: j for j, indices in enumerate(components(datum)) for i in indices}
    return [[comp[r] == comp[c] for c in range(datum.rank)] for r in range(datum.rank)]


def el_random_unit(datum: ELDatum, rng: np.random.Generator) -> Matrix:
    """Random element of GL_(O_B)(Lambda (x) W_m) for a split datum."""
    mask = _component_mask(datum)
    zero = witt_zero(datum.ring, datum.m)
    while True:
        U = tuple(
            tuple(witt_random(datum.ring, datum.m, rng) if mask[r][c] else zero for c in range(datum.rank))
            for r in range(datum.rank)
        )
        if is_invertible(U):
            return U


def el_random_group_element(datum: ELDatum, rng: np.random.Generator) -> DisplayGroupElement:
    """Random display group element whose tau and sigma commute with the action."""
    mu = CocharacterVector(datum.weights)
    mask = _component_mask(datum)
    zero = witt_zero(datum.ring, datum.m)
    while True:
        h = DisplayGroupElement.from_payloads(
            mu,
            [
                [witt_random(datum.ring, datum.m, rng) if mask[r][c] else zero for c in range(datum.rank)]
                for r in range(datum.rank)
            ],
        )
        if dg_membership(h):
            return h
