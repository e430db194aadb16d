"""Truncated p-typical Witt vectors.

Ring operations go through the p-torsion-free lift of the coefficient ring:
lift, take ghost components, operate componentwise, un-ghost with exact
division by p^n at level n, reduce. Level n only needs the ghost component
modulo p^(N+n), since x = y mod p^j implies x^p = y^p mod p^(j+1).
"""

import itertools
from typing import Iterator, List, NamedTuple, Optional, Sequence, Union

import numpy as np

from .common import (
    MathDomainError,
    NonUnit,
    NotInIR,
    PrecisionExhausted,
    SizeCap,
    UnsupportedRing,
)
from .rings import CoefficientRing, Lift, RingElement, RingMap


class Valuation(NamedTuple):
    value: int
    exact: bool = True

    def __str__(self):
        return str(self.value) if self.exact else f">= {self.value}"


def _ghost_mod(ring: CoefficientRing, lifts: Sequence[Lift], n: int) -> List[Lift]:
    """Ghost components w_i modulo p^(N+i) for i < n."""
    p, N = ring.p, ring.N
    powers: List[Lift] = []
    ghosts = []
    for i in range(n):
        mod = p ** (N + i)
        powers = [ring._lpow(pw, p, mod) for pw in powers]
        powers.append(ring._lmod(lifts[i], mod))
        w = ring._lzero()
        for j, pw in enumerate(powers):
            w = ring._ladd(w, ring._lscale(pw, p**j))
        ghosts.append(ring._lmod(w, mod))
    return ghosts


def _unghost(ring: CoefficientRing, ghosts: Sequence[Lift]) -> List[Lift]:
    p, N = ring.p, ring.N
    coeffs: List[Lift] = []
    powers: List[Lift] = []
    for i, w in enumerate(ghosts):
        mod = p ** (N + i)
        powers = [ring._lpow(pw, p, mod) for pw in powers]
        s = w
        for j, pw in enumerate(powers):
            s = ring._lsub(s, ring._lscale(pw, p**j))
        s = ring._lmod(s, mod)
        pi = p**i
        assert all(c % pi == 0 for c in s), "InexactDivision while un-ghosting"
        a = tuple((c // pi) % ring.char for c in s)
        coeffs.append(a)
        powers.append(a)
    return coeffs


class WittVector:
    """Element of W_m(R).

    ``precision`` counts the leading coefficients that are certified; it
    equals the length unless an operation lost information.
    """

    __slots__ = ("ring", "coeffs", "precision")

    def __init__(
        self,
        ring: CoefficientRing,
        coeffs: Sequence[Union[RingElement, int, Sequence[int]]],
        precision: Optional[int] = None,
    ):
        self.ring = ring
        self.coeffs = tuple(ring.element(c) for c in coeffs)
        if not self.coeffs:
            raise PrecisionExhausted("A Witt vector needs at least one coefficient")
        length = len(self.coeffs)
        self.precision = length if precision is None else min(precision, length)

    @classmethod
    def _from_lifts(cls, ring, lifts: Sequence[Lift], precision: int) -> "WittVector":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.coeffs = tuple(RingElement(ring, c) for c in lifts)
        obj.precision = min(precision, len(obj.coeffs))
        return obj

    @property
    def length(self) -> int:
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def lifts(self) -> List[Lift]:
        return [c.c for c in self.coeffs]

    def _coerce(self, other) -> "WittVector":
        if isinstance(other, WittVector):
            self.ring.check_same(other.ring)
            return other
        if isinstance(other, (int, np.integer)):
            return witt_from_int(int(other), self.ring, self.length)
        return NotImplemented

    def _combine(self, other: "WittVector", op: str) -> "WittVector":
        ring = self.ring
        n = min(self.length, other.length)
        gx = _ghost_mod(ring, self.lifts(), n)
        gy = _ghost_mod(ring, other.lifts(), n)
        ghosts = []
        for i in range(n):
            mod = ring.p ** (ring.N + i)
            if op == "add":
                ghosts.append(ring._ladd(gx[i], gy[i], mod))
            elif op == "sub":
                ghosts.append(ring._lsub(gx[i], gy[i], mod))
            else:
                ghosts.append(ring._lmul(gx[i], gy[i], mod))
        return WittVector._from_lifts(
            ring, _unghost(ring, ghosts), min(self.precision, other.precision)
        )

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, "add")

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, "sub")

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._combine(self, "sub")

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, "mul")

    __rmul__ = __mul__

    def __neg__(self):
        return witt_zero(self.ring, self.length)._combine(self, "sub")

    def __pow__(self, e: int):
        if e < 0:
            return witt_inv(self) ** (-e)
        result = witt_one(self.ring, self.length)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = witt_from_int(int(other), self.ring, self.length)
        if not isinstance(other, WittVector):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring.key, tuple(c.c for c in self.coeffs)))

    def __repr__(self):
        return "[" + ",".join(repr(c) for c in self.coeffs) + "]"

    def to_json(self):
        return {"len": self.length, "coeffs": [c.to_json() for c in self.coeffs]}

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def is_unit(self) -> bool:
        return self.coeffs[0].is_unit()

    def inverse(self) -> "WittVector":
        return witt_inv(self)

    def truncate(self, n: int) -> "WittVector":
        """Image under the projection W_m -> W_n."""
        n = min(n, self.length)
        if n < 1:
            raise PrecisionExhausted("Truncation to length 0")
        return WittVector._from_lifts(
            self.ring, self.lifts()[:n], min(self.precision, n)
        )

    def certified(self) -> "WittVector":
        return self.truncate(self.precision)

    def agrees_with(self, other: "WittVector") -> bool:
        """Equality on the common certified prefix."""
        self.ring.check_same(other.ring)
        n = min(self.precision, other.precision)
        if n < 1:
            raise PrecisionExhausted("No certified coefficient left to compare")
        return self.coeffs[:n] == other.coeffs[:n]

    def map(self, ring_map: RingMap) -> "WittVector":
        return WittVector(
            ring_map.target, [ring_map(c) for c in self.coeffs], self.precision
        )

    def frobenius(self) -> "WittVector":
        return frobenius(self)

    def verschiebung(self) -> "WittVector":
        return verschiebung(self)

    def valuation(self) -> Valuation:
        return witt_val(self)

    def p_shift(self, k: int = 1) -> "WittVector":
        """p^k * x with the length extended by k (rings of characteristic p)."""
        ring = self.ring
        if not ring.is_char_p:
            raise UnsupportedRing(f"p-shift needs characteristic p, not {ring.name}")
        if k == 0:
            return self
        exp = ring.p**k
        lifts = [ring._lzero()] * k + [
            ring._lpow(c, exp, ring.char) for c in self.lifts()
        ]
        return WittVector._from_lifts(ring, lifts, self.precision + k)

    def p_unshift(self, k: int = 1) -> "WittVector":
        """x / p^k with the length reduced by k (perfect rings of characteristic p)."""
        ring = self.ring
        if not ring.is_perfect_char_p:
            raise UnsupportedRing(f"Division by p needs a perfect field, not {ring.name}")
        if k == 0:
            return self
        if self.precision <= k:
            raise PrecisionExhausted(f"Cannot divide by p^{k} at precision {self.precision}")
        if any(not c.is_zero() for c in self.coeffs[:k]):
            raise MathDomainError(f"{self} is not divisible by p^{k}")
        root = ring.p ** ((-k) % ring.degree)
        lifts = [ring._lpow(c, root, ring.char) for c in self.lifts()[k:]]
        return WittVector._from_lifts(ring, lifts, self.precision - k)


def witt_zero(ring: CoefficientRing, m: int) -> WittVector:
    return WittVector._from_lifts(ring, [ring._lzero()] * m, m)


def witt_one(ring: CoefficientRing, m: int) -> WittVector:
    return teichmuller(ring.one(), m)


def witt_from_int(n: int, ring: CoefficientRing, m: int) -> WittVector:
    """Image of n under Z -> W_m(R); its ghost vector is (n, n, ...)."""
    ghosts = [ring._lmod(ring._lfrom_int(n), ring.p ** (ring.N + i)) for i in range(m)]
    return WittVector._from_lifts(ring, _unghost(ring, ghosts), m)


def ghost(x: Union[WittVector, Sequence[Union[int, Sequence[int]]]], ring=None):
    """Exact ghost components of a vector of lift-ring elements."""
    if isinstance(x, WittVector):
        ring = x.ring
        lifts = x.lifts()
    else:
        assert ring is not None, "A ring is needed to read raw lifts"
        lifts = [ring._lfrom_int(c) if isinstance(c, int) else tuple(c) for c in x]
    p = ring.p
    result = []
    for i in range(len(lifts)):
        w = ring._lzero()
        for j in range(i + 1):
            w = ring._ladd(w, ring._lscale(ring._lpow(lifts[j], p ** (i - j)), p**j))
        result.append(w[0] if ring.dim == 1 else w)
    return result


def witt_add(x: WittVector, y: WittVector) -> WittVector:
    return x + y


def witt_mul(x: WittVector, y: WittVector) -> WittVector:
    return x * y


def witt_neg(x: WittVector) -> WittVector:
    return -x


def witt_sub(x: WittVector, y: WittVector) -> WittVector:
    return x - y


def witt_map(x: WittVector, ring_map: RingMap) -> WittVector:
    return x.map(ring_map)


def frobenius(x: WittVector) -> WittVector:
    ring = x.ring
    if ring.is_char_p:
        # W(F) for the p-power map F of R, a ring map on any F_p-algebra
        lifts = [ring._lpow(c, ring.p, ring.char) for c in x.lifts()]
        return WittVector._from_lifts(ring, lifts, x.precision)
    m = x.length
    if m < 2 or x.precision < 2:
        raise PrecisionExhausted(f"Frobenius needs two certified coefficients over {ring.name}")
    ghosts = _ghost_mod(ring, x.lifts(), m)
    shifted = [
        ring._lmod(ghosts[i + 1], ring.p ** (ring.N + i)) for i in range(m - 1)
    ]
    return WittVector._from_lifts(ring, _unghost(ring, shifted), x.precision - 1)


def frobenius_defect(x: WittVector) -> WittVector:
    """The unique y of the lift with f(x) = x^p + p*y, reduced."""
    ring = x.ring
    m = x.length
    if m < 2 or x.precision < 2:
        raise PrecisionExhausted("Frobenius defect needs two certified coefficients")
    p, N = ring.p, ring.N
    ghosts = _ghost_mod(ring, x.lifts(), m)
    defect = []
    for i in range(m - 1):
        mod = p ** (N + i + 1)
        diff = ring._lsub(ghosts[i + 1], ring._lpow(ghosts[i], p, mod), mod)
        assert all(c % p == 0 for c in diff), "Frobenius is not a lift of x^p"
        defect.append(ring._lmod(tuple(c // p for c in diff), p ** (N + i)))
    return WittVector._from_lifts(ring, _unghost(ring, defect), x.precision - 1)


def verschiebung(x: WittVector) -> WittVector:
    ring = x.ring
    lifts = [ring._lzero()] + x.lifts()[:-1]
    return WittVector._from_lifts(ring, lifts, x.precision + 1)


def teichmuller(a: RingElement, m: int) -> WittVector:
    ring = a.ring
    return WittVector._from_lifts(ring, [a.c] + [ring._lzero()] * (m - 1), m)


def in_IR(x: WittVector) -> bool:
    return x.coeffs[0].is_zero()


def v_preimage(x: WittVector) -> WittVector:
    """Inverse of the shift; the top coefficient is unknown and set to 0."""
    if not in_IR(x):
        raise NotInIR(f"{x} is not in the image of v")
    if x.length < 2 or x.precision < 2:
        raise PrecisionExhausted("v-preimage of a vector without certified tail")
    ring = x.ring
    lifts = x.lifts()[1:] + [ring._lzero()]
    return WittVector._from_lifts(ring, lifts, x.precision - 1)


def witt_val(x: WittVector) -> Valuation:
    if not x.ring.is_field:
        raise UnsupportedRing(f"Valuations need a perfect field, not {x.ring.name}")
    for i, c in enumerate(x.coeffs[: x.precision]):
        if not c.is_zero():
            return Valuation(i)
    return Valuation(x.precision, exact=False)


def witt_inv(x: WittVector) -> WittVector:
    if not x.is_unit():
        raise NonUnit(f"{x} is not a unit of W_{x.length}({x.ring.name})")
    ring = x.ring
    m = x.length
    one = witt_one(ring, m)
    two = witt_from_int(2, ring, m)
    y = teichmuller(x.coeffs[0].inverse(), m)
    # 1 - x*y lies in v(W), which is nilpotent in W_m(R)
    for _ in range(2 * (m + ring.N + ring.eps_order) + 4):
        prod = x * y
        if prod == one:
            return WittVector._from_lifts(ring, y.lifts(), x.precision)
        y = y * (two - prod)
    raise AssertionError("Newton inversion did not converge")


def witt_random(ring: CoefficientRing, m: int, rng: np.random.Generator) -> WittVector:
    return WittVector._from_lifts(ring, [ring.random(rng).c for _ in range(m)], m)


def witt_random_unit(ring: CoefficientRing, m: int, rng: np.random.Generator) -> WittVector:
    while True:
        x = witt_random(ring, m, rng)
        if x.is_unit():
            return x


def witt_enumerate(
    ring: CoefficientRing, m: int, cap: Optional[int] = None
) -> Iterator[WittVector]:
    cap = ring.DEFAULT_SIZE_CAP if cap is None else cap
    if ring.size**m > cap:
        raise SizeCap(f"W_{m}({ring.name}) has {ring.size ** m} elements (cap {cap})")
    elements = list(ring.enumerate(cap))
    for coeffs in itertools.product(elements, repeat=m):
        yield WittVector._from_lifts(ring, [c.c for c in reversed(coeffs)], m)
