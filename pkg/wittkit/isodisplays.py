"""Isodisplays over a finite field, Newton slopes and quasi-isogenies."""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .common import InsufficientPrecision, NotInvertible, UnsupportedRing
from .displays import Display, display_morphism_check
from .modules import GradedMorphism
from .padic import PAdicMatrix, PAdicNumber
from .witt import frobenius


class Isodisplay:
    """(N, phi) with phi(x) = A . f(x) on coordinates; A is a PAdicMatrix."""

    def __init__(self, phi: PAdicMatrix, weights: Optional[Sequence[int]] = None):
        self.phi = phi
        self.weights = tuple(weights) if weights is not None else None

    @property
    def rank(self) -> int:
        return self.phi.n

    @property
    def ring(self):
        return self.phi.ring

    def __repr__(self):
        return f"Isodisplay({self.phi!r})"

    def to_json(self):
        return {"phi": self.phi.to_json()}


def _require_field(D: Display):
    if not D.ring.is_field:
        raise UnsupportedRing(f"Isodisplays need a finite field base, not {D.ring.name}")


def isodisplay_of(D: Display) -> Isodisplay:
    """phi = Phi . diag(p^w) on the basis of L, i.e. p^d times Phi . diag(p^(w - d))."""
    _require_field(D)
    return Isodisplay(PAdicMatrix.from_witt(D.phi, D.module.basis_weights), D.module.basis_weights)


def isodisplay_tensor(X: Isodisplay, Y: Isodisplay) -> Isodisplay:
    weights = None
    if X.weights is not None and Y.weights is not None:
        weights = [a + b for a in X.weights for b in Y.weights]
    return Isodisplay(X.phi.kron(Y.phi), weights)


def isodisplay_dual(X: Isodisplay) -> Isodisplay:
    weights = None if X.weights is None else [-w for w in X.weights]
    return Isodisplay(X.phi.inverse().transpose(), weights)


def linearized_power(X: Isodisplay) -> PAdicMatrix:
    """A f(A) ... f^(a-1)(A), the linear map phi^a for k = F_(p^a)."""
    A = X.phi
    result = A
    twisted = A
    for _ in range(X.ring.degree - 1):
        twisted = twisted.frobenius()
        result = result * twisted
    return result


def _lower_hull(points: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
    hull: List[Tuple[int, int]] = []
    for point in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            x3, y3 = point
            # drop the middle point when it lies on or above the chord
            if (y2 - y1) * (x3 - x1) >= (y3 - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(point)
    return hull


def _hull_value(hull: List[Tuple[int, int]], x: int) -> Fraction:
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x1 <= x <= x2:
            return Fraction(y1) + Fraction(y2 - y1, x2 - x1) * (x - x1)
    raise AssertionError("Abscissa outside the polygon")


def newton_slopes(X: Isodisplay) -> List[Fraction]:
    """Slopes of phi, ascending, each repeated by its multiplicity.

    They are the Newton polygon slopes of det(T - phi^a) divided by a. A
    coefficient known only as 0 + O(p^k) is harmless when p^k lies on or
    above the polygon of the certified points; otherwise it could move the
    polygon and InsufficientPrecision is raised with its index.
    """
    n = X.rank
    if n == 0:
        return []
    coeffs = linearized_power(X).charpoly()
    if coeffs[n].is_zero():
        raise InsufficientPrecision("det(phi) vanishes at precision", index=n)
    certain = [(k, c.val) for k, c in enumerate(coeffs) if not c.is_zero()]
    hull = _lower_hull(certain)
    for k, c in enumerate(coeffs):
        if c.is_zero() and c.abs_prec < _hull_value(hull, k):
            raise InsufficientPrecision(
                f"Coefficient {k} is 0 + O(p^{c.abs_prec}) and may lie below the polygon",
                index=k,
            )
    a = X.ring.degree
    slopes: List[Fraction] = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1, (x2 - x1) * a)
        slopes += [slope] * (x2 - x1)
    return slopes


def _semilinear_intertwines(g: PAdicMatrix, X: Isodisplay, Y: Isodisplay) -> bool:
    return (Y.phi * g.frobenius()).agrees_with(g * X.phi)


def quasi_isogeny_check(g: PAdicMatrix, D: Display, E: Display) -> bool:
    """phi_E . f(g) = g . phi_D to certified precision, g invertible."""
    X, Y = isodisplay_of(D), isodisplay_of(E)
    if g.shape != (Y.rank, X.rank) or X.rank != Y.rank:
        return False
    try:
        g.inverse()
    except InsufficientPrecision as err:
        raise InsufficientPrecision(f"Invertibility of g is undecided: {err}") from err
    except NotInvertible:
        return False
    return _semilinear_intertwines(g, X, Y)


def morphism_from_quasi_isogeny(g: PAdicMatrix, D: Display, E: Display) -> Optional[GradedMorphism]:
    """The graded morphism psi with psi^tau = g, or None if g is not induced.

    An entry of degree d <= 0 is its own payload; for d >= 1 the entry must
    be p^d f^-1(u) and the payload is u = f(g / p^d).
    """
    m = min(D.m, E.m)
    payloads = []
    for r, row in enumerate(g.rows):
        out = []
        for c, x in enumerate(row):
            d = D.module.basis_weights[c] - E.module.basis_weights[r]
            lowest = max(0, d)
            if x.is_zero():
                if x.abs_prec < lowest:
                    raise InsufficientPrecision(f"Entry ({r},{c}) is undecided below p^{lowest}", index=(r, c))
            elif x.val < lowest:
                return None
            if d <= 0:
                out.append(x.to_witt(m))
            else:
                out.append(frobenius(x.shift(-d).to_witt(m)))
        payloads.append(out)
    return GradedMorphism.from_payloads(D.module, E.module, payloads)


def is_isogeny(g: PAdicMatrix, D: Display, E: Display) -> bool:
    if not quasi_isogeny_check(g, D, E):
        return False
    psi = morphism_from_quasi_isogeny(g, D, E)
    if psi is None:
        return False
    return display_morphism_check(psi, D, E)


def scalar_quasi_isogeny(D: Display, exponent: int) -> PAdicMatrix:
    """p^exponent . id"""
    return PAdicMatrix.diagonal(D.ring, [exponent] * D.rank, D.m)


def det_valuation(X: Isodisplay) -> int:
    det = X.phi.det()
    if det.is_zero():
        raise InsufficientPrecision("det(phi) vanishes at precision")
    return det.val


def as_padic(values: Sequence[Sequence[int]], ring, prec: int) -> PAdicMatrix:
    """Integer matrix as a PAdicMatrix over W(ring)."""
    return PAdicMatrix([[PAdicNumber.from_int(v, ring, prec) for v in row] for row in values])
