"""Displays over the Witt frame, always stored as standard data (L, Phi).

Phi is the matrix of the linearization of the sigma_0-linear map on the
basis of L: Phi(sum x_c l_c) = Phi . f(x) on coordinate columns.
"""

from typing import List, Sequence

from .common import NotBijective, UsageError
from .frame import FrameElement, frame_sigma
from .matrices import (
    Matrix,
    identity,
    inverse,
    kron,
    mat_agrees,
    mat_base_change,
    mat_mul,
    mat_to_json,
    shape,
    transpose,
    witt_det,
)
from .modules import (
    GradedModule,
    GradedMorphism,
    mod_base_change,
    mod_dual,
    mod_tensor,
    morph_check,
    morph_sigma,
    morph_tau,
)
from .rings import RingMap
from .witt import WittVector, witt_zero


class Display:
    def __init__(self, module: GradedModule, phi: Matrix):
        self.module = module
        self.phi = tuple(tuple(row) for row in phi)

    @property
    def ring(self):
        return self.module.ring

    @property
    def m(self) -> int:
        return self.module.m

    @property
    def rank(self) -> int:
        return self.module.rank

    @property
    def type(self):
        return self.module.weights

    @property
    def depth(self):
        return self.module.depth

    @property
    def altitude(self):
        return self.module.altitude

    def __eq__(self, other):
        return (
            isinstance(other, Display)
            and self.module == other.module
            and self.phi == other.phi
        )

    def __hash__(self):
        return hash((self.module, self.phi))

    def __repr__(self):
        return f"Display(weights={list(self.module.basis_weights)}, phi={self.phi!r})"

    def to_json(self):
        return {**self.module.to_json(), "phi": mat_to_json(self.phi)}


def display_validate(module: GradedModule, phi: Sequence[Sequence[WittVector]]) -> Display:
    n = module.rank
    if shape(phi) != (n, n) and n:
        raise UsageError(f"Phi has shape {shape(phi)}, expected {n}x{n}")
    if n and not witt_det(phi).is_unit():
        raise NotBijective(f"det(Phi) = {witt_det(phi)!r} is not a unit")
    return Display(module, phi)


def unit_display(ring, m: int) -> Display:
    return display_validate(GradedModule.unit(ring, m), identity(ring, m, 1))


def display_F_eval(D: Display, coords: Sequence[FrameElement]) -> List[WittVector]:
    """F(sum l_c (x) s_c) = Phi . sigma(s) on the basis of L."""
    if len(coords) != D.rank:
        raise UsageError(f"Expected {D.rank} coordinates")
    degrees = {x.deg + w for x, w in zip(coords, D.module.basis_weights)}
    if len(degrees) > 1:
        raise UsageError("Element is not homogeneous")
    column = tuple((frame_sigma(x),) for x in coords)
    return [row[0] for row in mat_mul(D.phi, column)]


def display_tensor(D: Display, E: Display) -> Display:
    return Display(mod_tensor(D.module, E.module), kron(D.phi, E.phi))


def display_dual(D: Display) -> Display:
    return Display(mod_dual(D.module), transpose(inverse(D.phi)))


def display_base_change(D: Display, ring_map: RingMap) -> Display:
    return Display(mod_base_change(D.module, ring_map), mat_base_change(D.phi, ring_map))


def display_morphism_check(psi: GradedMorphism, D: Display, E: Display) -> bool:
    """Phi_E . psi^sigma = psi^tau . Phi_D to certified precision."""
    if psi.source != D.module or psi.target != E.module:
        raise UsageError("Morphism does not match the displays")
    morph_check(psi)
    if not D.rank or not E.rank:
        return True
    lhs = mat_mul(E.phi, morph_sigma(psi))
    rhs = mat_mul(morph_tau(psi), D.phi)
    return mat_agrees(lhs, rhs)


def bilinear_form_check(beta: GradedMorphism, D: Display, E: Display, target: Display) -> bool:
    """beta as a morphism D (x) E -> target; F''(beta(x, y)) = beta^tau(F x, F' y)."""
    return display_morphism_check(beta, display_tensor(D, E), target)


def canonical_form(D: Display, E: Display) -> GradedMorphism:
    """The form beta_0 into D (x) E."""
    return GradedMorphism.identity(mod_tensor(D.module, E.module))


def zero_form(D: Display, E: Display, target: Display) -> GradedMorphism:
    source = mod_tensor(D.module, E.module)
    zero = witt_zero(D.ring, min(D.m, E.m))
    return GradedMorphism.from_payloads(
        source, target.module, [[zero] * source.rank for _ in range(target.rank)]
    )


def display_is_effective(D: Display) -> bool:
    return D.depth is None or D.depth >= 0


def display_is_n(D: Display, n: int) -> bool:
    return display_is_effective(D) and D.altitude == n


def display_hodge_ranks(D: Display) -> dict:
    """Ranks over R of the pieces of L modulo I_R."""
    return D.module.ranks

