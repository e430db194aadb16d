"""Zink displays and their equivalence with 1-displays.

P_0 is free on the basis of L with the split L_0 + L_1, P_1 = I_R L_0 + L_1.
F_0 is stored by its values on the basis; F_1 by the columns c_j with
F_1(v(xi) e_j) = xi c_j for j in L_0 and F_1(e_j) = c_j for j in L_1.
"""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .common import CheckResult, InvalidZink, PrecisionError, UsageError, get_logger
from .displays import Display, display_validate
from .matrices import (
    Matrix,
    inverse,
    mat_agrees,
    mat_mul,
    mat_to_json,
    shape,
    witt_det,
)
from .modules import GradedModule
from .witt import WittVector, frobenius, witt_from_int, witt_one, witt_random


class ZinkDisplay:
    def __init__(self, split: Sequence[int], F0: Matrix, F1: Matrix, ring=None, m: Optional[int] = None):
        self.split = tuple(int(s) for s in split)
        if any(s not in (0, 1) for s in self.split):
            raise UsageError("The split of P_0 only has parts 0 and 1")
        self.F0 = tuple(tuple(row) for row in F0)
        self.F1 = tuple(tuple(row) for row in F1)
        n = len(self.split)
        if n and (shape(self.F0) != (n, n) or shape(self.F1) != (n, n)):
            raise UsageError(f"F_0 and F_1 must be {n}x{n}")
        self.ring = ring if ring is not None or not n else self.F0[0][0].ring
        self.m = m if m is not None or not n else self.F0[0][0].length

    @property
    def rank(self) -> int:
        return len(self.split)

    @property
    def lie_rank(self) -> int:
        """Rank of P_0 / P_1."""
        return self.split.count(0)

    @property
    def phi(self) -> Matrix:
        n = self.rank
        return tuple(
            tuple(self.F0[r][c] if self.split[c] == 0 else self.F1[r][c] for c in range(n))
            for r in range(n)
        )

    def __repr__(self):
        return f"ZinkDisplay(split={list(self.split)}, F0={self.F0!r}, F1={self.F1!r})"

    def to_json(self):
        return {"split": list(self.split), "F0": mat_to_json(self.F0), "F1": mat_to_json(self.F1)}


def _p(ring, m) -> WittVector:
    return witt_from_int(ring.p, ring, m)


def zink_from_display(D: Display) -> ZinkDisplay:
    weights = D.module.basis_weights
    if any(w not in (0, 1) for w in weights):
        raise UsageError(f"Weights {list(weights)} are not those of a 1-display")
    if not D.rank:
        return ZinkDisplay((), (), (), D.ring, D.m)
    p = _p(D.ring, D.m)
    # F(l (x) t) = p Phi(l) on L_1; F(l (x) 1) = Phi(l) on L_0
    F0 = tuple(
        tuple(x if weights[c] == 0 else p * x for c, x in enumerate(row)) for row in D.phi
    )
    return ZinkDisplay(weights, F0, D.phi, D.ring, D.m)


def zink_validate(Z: ZinkDisplay) -> ZinkDisplay:
    if not Z.rank:
        return Z
    if not witt_det(Z.phi).is_unit():
        raise InvalidZink("F_1 is not an epimorphism: det(Phi) is not a unit")
    p = _p(Z.ring, Z.m)
    for c, part in enumerate(Z.split):
        for r in range(Z.rank):
            expected = Z.F1[r][c] if part == 0 else p * Z.F1[r][c]
            if not Z.F0[r][c].agrees_with(expected):
                raise InvalidZink(f"F_1(v(xi) x) != xi F_0(x) on basis vector {c}")
    return Z


def zink_to_display(Z: ZinkDisplay) -> Display:
    zink_validate(Z)
    return display_validate(GradedModule(Z.ring, Z.m, Z.split), Z.phi)


def zink_relation_check(Z: ZinkDisplay, samples: int = 20, rng: Optional[np.random.Generator] = None) -> CheckResult:
    """Sample F_1(v(xi) x) = xi F_0(x)."""
    rng = rng or np.random.default_rng(0)
    if not Z.rank:
        return CheckResult("F_1(v(xi) x) = xi F_0(x)", True)
    p = _p(Z.ring, Z.m)
    for _ in range(samples):
        xi = witt_random(Z.ring, Z.m, rng)
        x = [frobenius(witt_random(Z.ring, Z.m, rng)) for _ in range(Z.rank)]
        lhs_coords = [(xi * x[j] if part == 0 else p * xi * x[j],) for j, part in enumerate(Z.split)]
        rhs_coords = [(xi * x[j],) for j in range(Z.rank)]
        lhs = mat_mul(Z.F1, lhs_coords)
        rhs = mat_mul(Z.F0, rhs_coords)
        if not mat_agrees(lhs, rhs):
            return CheckResult("F_1(v(xi) x) = xi F_0(x)", False, repr(xi), samples)
    return CheckResult("F_1(v(xi) x) = xi F_0(x)", True, None, samples)


class VSharp:
    def __init__(self, matrix: Matrix, reduction: Tuple[tuple, ...]):
        self.matrix = matrix
        self.reduction = reduction

    def __repr__(self):
        return f"VSharp({self.matrix!r})"


def v_sharp(Z: ZinkDisplay, samples: int = 10, rng: Optional[np.random.Generator] = None) -> VSharp:
    """V# = diag(p on L_0, 1 on L_1) . Phi^-1 on the split basis."""
    zink_validate(Z)
    if not Z.rank:
        return VSharp((), ())
    p, one = _p(Z.ring, Z.m), witt_one(Z.ring, Z.m)
    inv = inverse(Z.phi)
    matrix = tuple(
        tuple((p if Z.split[r] == 0 else one) * x for x in inv[r]) for r in range(Z.rank)
    )
    _check_v_sharp(Z, matrix, samples, rng or np.random.default_rng(0))
    reduction = tuple(tuple(Z.ring.reduce_mod_p(x.coeffs[0]) for x in row) for row in matrix)
    return VSharp(matrix, reduction)


def _check_v_sharp(Z: ZinkDisplay, V: Matrix, samples: int, rng: np.random.Generator):
    p = _p(Z.ring, Z.m)
    for _ in range(samples):
        xi = witt_random(Z.ring, Z.m, rng)
        x = [witt_random(Z.ring, Z.m, rng) for _ in range(Z.rank)]
        fx = [(frobenius(c),) for c in x]
        # V#(xi F_0(x)) = p xi (x) x
        image = mat_mul(V, [(xi * c[0],) for c in mat_mul(Z.F0, fx)])
        assert mat_agrees(image, [(p * xi * c[0],) for c in fx]), "V# relation on F_0 fails"
        # V#(xi F_1(y)) = xi (x) y with y = sum v(x_j) e_j over L_0 plus x_j e_j over L_1
        y_sigma = [(x[j] if part == 0 else frobenius(x[j]),) for j, part in enumerate(Z.split)]
        y_f = [(p * x[j] if part == 0 else frobenius(x[j]),) for j, part in enumerate(Z.split)]
        image = mat_mul(V, [(xi * c[0],) for c in mat_mul(Z.F1, y_sigma)])
        assert mat_agrees(image, [(xi * c[0],) for c in y_f]), "V# relation on F_1 fails"


def zink_is_nilpotent(Z: ZinkDisplay) -> Tuple[bool, Optional[int]]:
    """Least k with N^(p^(k-1)) ... N^(p) N = 0 for N = V# mod I_R + pW(R).

    Over a field the images strictly shrink until they stabilize, so rank
    steps suffice; non-reduced R/pR needs the nilpotency index on top.
    """
    if not Z.rank:
        return True, 0
    N = v_sharp(Z).reduction
    ring = Z.ring.mod_p
    zero = ring.zero()
    bound = Z.rank * (1 + ring.nil_exponent)
    product = N
    twisted = N
    for k in range(1, bound + 1):
        if all(x.is_zero() for row in product for x in row):
            return True, k
        twisted = tuple(tuple(x**ring.p for x in row) for row in twisted)
        product = mat_mul(twisted, product, zero)
    return False, None


ZINK_TABLE_FIELDS = ["key", "ring", "split", "phi", "nilpotent", "witness", "slopes", "has_slope_one"]


def nilpotence_slope_table(
    ring, m: int, rank: int, samples: int, rng: Optional[np.random.Generator] = None
) -> pd.DataFrame:
    """Nilpotence next to the Newton slopes of random 1-displays over a finite field."""
    from .isodisplays import isodisplay_of, newton_slopes

    logger = get_logger("wittkit_zink")
    rng = rng or np.random.default_rng(0)
    rows: List[dict] = []
    for key in range(samples):
        split = sorted(int(s) for s in rng.integers(0, 2, size=rank))
        D = random_display(GradedModule(ring, m, split), rng)
        nilpotent, witness = zink_is_nilpotent(zink_from_display(D))
        try:
            slopes = newton_slopes(isodisplay_of(D))
        except PrecisionError as err:
            logger.debug("Sample %s skipped: %s", key, err)
            continue
        rows.append(
            {
                "key": key,
                "ring": ring.name,
                "split": "".join(str(s) for s in split),
                "phi": str(mat_to_json(D.phi)),
                "nilpotent": nilpotent,
                "witness": witness,
                "slopes": " ".join(str(s) for s in slopes),
                "has_slope_one": Fraction(1) in slopes,
            }
        )
    return pd.DataFrame(rows, columns=ZINK_TABLE_FIELDS)


def random_display(module: GradedModule, rng: np.random.Generator) -> Display:
    """Uniform sample among the valid displays with the given module."""
    n = module.rank
    while True:
        phi = tuple(
            tuple(witt_random(module.ring, module.m, rng) for _ in range(n)) for _ in range(n)
        )
        if not n or witt_det(phi).is_unit():
            return Display(module, phi)
