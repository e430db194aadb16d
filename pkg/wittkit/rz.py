"""Framing pairs and points of the Rapoport-Zink space of GL_n by fibre product.

A point is a pair (U, g) with U in GL_n(W(k)) and g in GL_n(W(k)[1/p]) such
that g^-1 . b . f(g) = U . mu(p). The display group acts by
(U, g) . h = (tau(h)^-1 U sigma(h), g tau(h)).
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .common import (
    InsufficientPrecision,
    NotAPoint,
    NotInDoubleCoset,
    NotInvertible,
    NotMinuscule,
    PrecisionError,
    Scan,
    SizeCap,
    UnsupportedRing,
    UsageError,
)
from .display_group import (
    CocharacterVector,
    DisplayGroupElement,
    UnionFind,
    banal_display,
    dg_action,
    dg_membership,
    dg_tau,
)
from .displays import Display
from .matrices import Matrix, is_invertible, mat_precision, mat_to_json
from .padic import PAdicMatrix, PAdicNumber
from .rings import CoefficientRing
from .witt import frobenius, teichmuller


@dataclass
class FramingDatum:
    mu: CocharacterVector
    b: PAdicMatrix
    u: Matrix
    m: int

    @property
    def ring(self) -> CoefficientRing:
        return self.b.ring

    @property
    def n(self) -> int:
        return self.mu.n

    def to_json(self):
        return {"mu": list(self.mu.weights), "b": self.b.to_json(), "u": mat_to_json(self.u)}


@dataclass
class RZPoint:
    U: Matrix
    g: PAdicMatrix
    precision: int
    orbit: Optional[int] = field(default=None, compare=False)

    def to_json(self):
        record = {"U": mat_to_json(self.U), "g": self.g.to_json()}
        if self.orbit is not None:
            record["orbit"] = self.orbit
        return record


def _mu_p_inverse(mu: CocharacterVector, ring: CoefficientRing, prec: int) -> PAdicMatrix:
    return PAdicMatrix.diagonal(ring, [-i for i in mu.weights], prec)


def _integral_unit_matrix(X: PAdicMatrix, m: int) -> Matrix:
    """X as an integral matrix over W_m(k); NotAPoint unless it lies in GL_n(W(k))."""
    if not X.is_integral():
        raise NotAPoint("Matrix is not integral")
    U = tuple(tuple(x.to_witt(m) for x in row) for row in X.rows)
    if mat_precision(U) < 1:
        raise InsufficientPrecision("No certified digit left to decide invertibility")
    if not is_invertible(U):
        raise NotAPoint("Matrix is integral but not invertible")
    return U


def validate_framing(mu: CocharacterVector, b: PAdicMatrix, m: int) -> FramingDatum:
    if not b.ring.is_field:
        raise UnsupportedRing(f"Framing pairs live over a perfect field, not {b.ring.name}")
    if b.shape != (mu.n, mu.n):
        raise UsageError(f"b has shape {b.shape}, expected {mu.n}x{mu.n}")
    if not mu.is_minuscule:
        raise NotMinuscule(f"{mu!r} is not minuscule")
    divisors = b.elementary_divisors()
    if divisors != sorted(mu.weights):
        raise NotInDoubleCoset(
            f"Elementary divisors {divisors} differ from {list(mu.weights)}", divisors=divisors
        )
    try:
        u = _integral_unit_matrix(b * _mu_p_inverse(mu, b.ring, m), m)
    except NotAPoint as err:
        raise NotInvertible(f"u = b mu(p)^-1 is not in GL_n(W(k)): {err}") from err
    return FramingDatum(mu, b, u, m)


def framing_object(F: FramingDatum) -> Display:
    return banal_display(F.u, F.mu)


def c_b(g: PAdicMatrix, F: FramingDatum) -> PAdicMatrix:
    """g^-1 . b . f(g)"""
    return g.inverse() * F.b * g.frobenius()


def m_mu(U: Matrix, F: FramingDatum) -> PAdicMatrix:
    """U . mu(p)"""
    return PAdicMatrix.from_witt(U, F.mu.weights)


def rz_membership(g: PAdicMatrix, F: FramingDatum) -> RZPoint:
    """U = g^-1 b f(g) mu(p)^-1, a point iff U is integral and invertible."""
    if g.shape != (F.n, F.n):
        raise UsageError(f"g has shape {g.shape}, expected {F.n}x{F.n}")
    U = _integral_unit_matrix(c_b(g, F) * _mu_p_inverse(F.mu, F.ring, F.m), F.m)
    return RZPoint(U, g, mat_precision(U))


def is_rz_point(g: PAdicMatrix, F: FramingDatum) -> bool:
    try:
        rz_membership(g, F)
    except NotAPoint:
        return False
    return True


def fibre_equation_holds(pt: RZPoint, F: FramingDatum) -> bool:
    return c_b(pt.g, F).agrees_with(m_mu(pt.U, F))


def rz_action(pt: RZPoint, h: DisplayGroupElement, F: FramingDatum) -> RZPoint:
    if h.mu != F.mu:
        raise UsageError("The display group element has another cocharacter")
    U = dg_action(pt.U, h)
    g = pt.g * PAdicMatrix.from_witt(dg_tau(h))
    result = RZPoint(U, g, mat_precision(U))
    assert fibre_equation_holds(result, F), "The action left the fibre product"
    return result


def tau_preimage(k: PAdicMatrix, mu: CocharacterVector, m: int) -> Optional[DisplayGroupElement]:
    """The h with tau(h) = k, or None when k is not in tau(L+_mu GL_n).

    Entries of degree d >= 1 must be divisible by p^d, the payload then
    being f(k / p^d).
    """
    if not k.is_integral():
        return None
    payloads = []
    for j, row in enumerate(k.rows):
        out = []
        for c, x in enumerate(row):
            d = mu.degree(j, c)
            if d <= 0:
                out.append(x.to_witt(m))
                continue
            if x.is_zero():
                if x.abs_prec < d:
                    raise InsufficientPrecision(f"Entry ({j},{c}) is undecided below p^{d}", index=(j, c))
            elif x.val < d:
                return None
            out.append(frobenius(x.shift(-d).to_witt(m)))
        payloads.append(out)
    h = DisplayGroupElement.from_payloads(mu, payloads)
    return h if dg_membership(h) else None


def same_orbit(first: RZPoint, second: RZPoint, F: FramingDatum) -> bool:
    """g_1^-1 g_2 lies in tau(L+_mu GL_n) and transports U_1 to U_2."""
    h = tau_preimage(first.g.inverse() * second.g, F.mu, F.m)
    if h is None:
        return False
    image = dg_action(first.U, h)
    return all(a.agrees_with(b) for ra, rb in zip(image, second.U) for a, b in zip(ra, rb))


def _teichmuller_sum(ring: CoefficientRing, digits: Sequence, low: int, prec: int) -> PAdicNumber:
    """sum_k [digit_k] p^(low + k)"""
    total = PAdicNumber.zero(ring, PAdicNumber.EXACT)
    for k, digit in enumerate(digits):
        if not digit.is_zero():
            total = total + PAdicNumber.from_witt(teichmuller(digit, prec), low + k)
    return total


def lattice_representatives(F: FramingDatum, window: int) -> List[PAdicMatrix]:
    """Hermite representatives of LG / tau(L+_mu G) with entry valuations in the window."""
    ring, n = F.ring, F.n
    prec = F.m + 2 * window
    if n == 1:
        return [PAdicMatrix.diagonal(ring, [e], prec) for e in range(-window, window + 1)]
    if n != 2:
        raise UsageError("Point enumeration is limited to n <= 2")
    residues = list(ring.enumerate())
    one = PAdicNumber.p_power(ring, 0, prec)
    zero = PAdicNumber.zero(ring, PAdicNumber.EXACT)
    # coset representatives of GL_2(W) / tau(L+_mu GL_2)
    cosets = [PAdicMatrix([[one, zero], [zero, one]])]
    if F.mu.weights[0] != F.mu.weights[1]:
        cosets = [
            PAdicMatrix([[one, _teichmuller_sum(ring, [lam], 0, prec)], [zero, one]])
            for lam in residues
        ] + [PAdicMatrix([[zero, one], [one, zero]])]
    total = sum(
        len(residues) ** max(0, a + window) for a in range(-window, window + 1)
    ) * (2 * window + 1) * len(cosets)
    if total > ring.DEFAULT_SIZE_CAP:
        raise SizeCap(f"{total} lattice representatives exceed the cap {ring.DEFAULT_SIZE_CAP}")
    result = []
    for a, b in itertools.product(range(-window, window + 1), repeat=2):
        for digits in itertools.product(residues, repeat=max(0, a + window)):
            x = _teichmuller_sum(ring, digits, -window, prec)
            hermite = PAdicMatrix(
                [
                    [PAdicNumber.p_power(ring, a, prec), x],
                    [zero, PAdicNumber.p_power(ring, b, prec)],
                ]
            )
            result += [hermite * k for k in cosets]
    return result


class RZScan(Scan):
    SCAN_SUBJECT = "rz"
    RESULT_CSV_FIELDS = ["key", "U", "g", "orbit"]

    def __init__(self, framing: FramingDatum, window: int, chunk_size: int = 8, **kwargs):
        self.framing = framing
        reps = lattice_representatives(framing, window)
        chunks = [
            (index, reps[start : start + chunk_size])
            for index, start in enumerate(range(0, len(reps), chunk_size))
        ]
        super().__init__(chunks, **kwargs)

    def inspect_chunk(self, chunk) -> List[dict]:
        index, reps = chunk
        rows = []
        for offset, g in enumerate(reps):
            try:
                pt = rz_membership(g, self.framing)
            except NotAPoint:
                continue
            except PrecisionError as err:
                self.logger.warning("Representative %s of chunk %s is undecided: %s", offset, index, err)
                continue
            rows.append({"key": (index, offset), "point": pt})
        return rows

    def data_postprocessing(self, rows: List[dict]) -> List[dict]:
        uf = UnionFind(len(rows))
        for i, j in itertools.combinations(range(len(rows)), 2):
            if uf.find(i) != uf.find(j) and same_orbit(rows[i]["point"], rows[j]["point"], self.framing):
                uf.union(i, j)
        labels: Dict[int, int] = {}
        for i, row in enumerate(rows):
            row["point"].orbit = labels.setdefault(uf.find(i), len(labels))
            row["orbit"] = row["point"].orbit
            row["U"] = str(mat_to_json(row["point"].U))
            row["g"] = str(row["point"].g.to_json())
        return rows


def rz_enumerate(
    F: FramingDatum,
    window: int = 1,
    threads: int = 1,
    output_dir: Optional[str] = None,
    quiet: bool = True,
) -> List[RZPoint]:
    """Points over the lattice representatives, labelled by orbit, in canonical order."""
    scan = RZScan(F, window, threads=threads, output_dir=output_dir, quiet=quiet)
    return [row["point"] for row in scan.run()]


def rz_orbits(points: Sequence[RZPoint]) -> List[List[RZPoint]]:
    orbits: Dict[int, List[RZPoint]] = {}
    for pt in points:
        orbits.setdefault(pt.orbit, []).append(pt)
    return list(orbits.values())
