"""Finite p-nilpotent coefficient rings.

A ring is ``(Z/p^N)[x]/(f)[eps]/(eps^k)`` with ``f`` monic and irreducible
modulo ``p``. Every element has a canonical representative in the
p-torsion-free lift ``Z[x]/(f)[eps]/(eps^k)``: a tuple of integers in
``[0, p^N)``, the coefficient of ``x^i eps^j`` sitting at index ``j*deg(f)+i``.
"""

import itertools
import re
from functools import cached_property
from typing import Any, Dict, Iterator, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from .common import NonLocalRing, NonUnit, RingMismatch, SizeCap, UsageError

Lift = Tuple[int, ...]


class CoefficientRing:
    DEFAULT_SIZE_CAP = 100000

    def __init__(
        self,
        p: int,
        N: int = 1,
        modulus: Optional[Sequence[int]] = None,
        eps_order: int = 1,
        name: Optional[str] = None,
    ):
        if not sympy.isprime(p):
            raise UsageError(f"{p} is not a prime")
        if N < 1 or eps_order < 1:
            raise UsageError("Exponents must be positive")
        modulus = (0, 1) if modulus is None else tuple(int(c) for c in modulus)
        if len(modulus) < 2 or modulus[-1] != 1:
            raise UsageError(f"Modulus {list(modulus)} is not monic of degree >= 1")

        self.p = p
        self.N = N
        self.modulus = modulus
        self.eps_order = eps_order
        self.degree = len(modulus) - 1
        self.char = p**N
        self.dim = self.degree * eps_order
        self.size = self.char**self.dim
        self.name = name or self._default_name()

        if not self.is_local:
            raise NonLocalRing(
                f"Modulus {list(modulus)} is reducible modulo {p}: the ring is not local"
            )

    def _default_name(self):
        if self.degree == 1:
            base = f"Z/{self.char}" if self.N > 1 else f"F_{self.p}"
        elif self.N == 1:
            base = f"F_{self.p ** self.degree}"
        else:
            base = f"GR({self.char},{self.degree})"
        if self.eps_order > 1:
            base += f"[e]/(e^{self.eps_order})"
        return base

    @property
    def key(self):
        return (self.p, self.N, self.modulus, self.eps_order)

    def __eq__(self, other):
        return isinstance(other, CoefficientRing) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"CoefficientRing({self.name})"

    def __str__(self):
        return self.name

    @property
    def kind(self) -> str:
        if self.eps_order == 1 and self.N == 1:
            return "GaloisField"
        if self.eps_order == 1 and self.degree == 1:
            return "ZmodPN"
        return "PolyQuotient"

    @cached_property
    def is_local(self) -> bool:
        if self.degree == 1:
            return True
        x = sympy.Symbol("x")
        poly = sympy.Poly(list(reversed(self.modulus)), x, modulus=self.p)
        return bool(poly.is_irreducible)

    @property
    def is_char_p(self) -> bool:
        return self.N == 1

    @property
    def is_perfect_char_p(self) -> bool:
        # reduced of characteristic p: a finite field
        return self.N == 1 and self.eps_order == 1

    @property
    def is_field(self) -> bool:
        return self.is_perfect_char_p

    @property
    def nil_exponent(self) -> int:
        """Nilpotency index of the nilradical of R/pR."""
        return self.eps_order

    @property
    def residue_cardinality(self) -> int:
        return self.p**self.degree

    # Lift ring arithmetic on integer tuples. ``mod`` reduces coefficients.

    def _lzero(self) -> Lift:
        return (0,) * self.dim

    def _lone(self) -> Lift:
        return (1,) + (0,) * (self.dim - 1)

    def _lfrom_int(self, n: int) -> Lift:
        return (n,) + (0,) * (self.dim - 1)

    def _ladd(self, a: Lift, b: Lift, mod: Optional[int] = None) -> Lift:
        if mod is None:
            return tuple(x + y for x, y in zip(a, b))
        return tuple((x + y) % mod for x, y in zip(a, b))

    def _lsub(self, a: Lift, b: Lift, mod: Optional[int] = None) -> Lift:
        if mod is None:
            return tuple(x - y for x, y in zip(a, b))
        return tuple((x - y) % mod for x, y in zip(a, b))

    def _lscale(self, a: Lift, s: int, mod: Optional[int] = None) -> Lift:
        if mod is None:
            return tuple(s * x for x in a)
        return tuple((s * x) % mod for x in a)

    def _lmod(self, a: Lift, mod: int) -> Lift:
        return tuple(x % mod for x in a)

    def _xmul(self, pa: Sequence[int], pb: Sequence[int]) -> list:
        d = self.degree
        if d == 1:
            return [pa[0] * pb[0]]
        conv = [0] * (2 * d - 1)
        for i, ai in enumerate(pa):
            if ai:
                for j, bj in enumerate(pb):
                    if bj:
                        conv[i + j] += ai * bj
        f = self.modulus
        for deg in range(2 * d - 2, d - 1, -1):
            c = conv[deg]
            if c:
                conv[deg] = 0
                for t in range(d):
                    conv[deg - d + t] -= c * f[t]
        return conv[:d]

    def _lmul(self, a: Lift, b: Lift, mod: Optional[int] = None) -> Lift:
        if self.dim == 1:
            r = a[0] * b[0]
            return (r % mod,) if mod is not None else (r,)
        d, k = self.degree, self.eps_order
        out = [0] * self.dim
        for ja in range(k):
            pa = a[ja * d : (ja + 1) * d]
            if not any(pa):
                continue
            for jb in range(k - ja):
                pb = b[jb * d : (jb + 1) * d]
                if not any(pb):
                    continue
                base = (ja + jb) * d
                for i, c in enumerate(self._xmul(pa, pb)):
                    out[base + i] += c
        if mod is not None:
            return tuple(c % mod for c in out)
        return tuple(out)

    def _lpow(self, a: Lift, e: int, mod: Optional[int] = None) -> Lift:
        if self.dim == 1:
            if mod is None:
                return (a[0] ** e,)
            return (pow(a[0], e, mod),)
        result = self._lone()
        base = a
        while e:
            if e & 1:
                result = self._lmul(result, base, mod)
            e >>= 1
            if e:
                base = self._lmul(base, base, mod)
        return result

    # Elements

    def element(self, value: Union[int, Sequence[int], "RingElement"]) -> "RingElement":
        if isinstance(value, RingElement):
            self.check_same(value.ring)
            return value
        if isinstance(value, (int, np.integer)):
            return self.from_int(int(value))
        coeffs = [int(c) for c in value]
        if len(coeffs) > self.dim:
            raise UsageError(f"Too many coefficients for an element of {self.name}")
        coeffs += [0] * (self.dim - len(coeffs))
        return RingElement(self, self._lmod(tuple(coeffs), self.char))

    def from_int(self, n: int) -> "RingElement":
        return RingElement(self, self._lmod(self._lfrom_int(n), self.char))

    def zero(self) -> "RingElement":
        return RingElement(self, self._lzero())

    def one(self) -> "RingElement":
        return RingElement(self, self._lone())

    def gen(self) -> "RingElement":
        """The class of x."""
        if self.degree == 1:
            return self.from_int(-self.modulus[0])
        coeffs = [0] * self.dim
        coeffs[1] = 1
        return RingElement(self, tuple(coeffs))

    def eps(self) -> "RingElement":
        if self.eps_order == 1:
            return self.zero()
        coeffs = [0] * self.dim
        coeffs[self.degree] = 1
        return RingElement(self, tuple(coeffs))

    def check_same(self, other: "CoefficientRing"):
        if other != self:
            raise RingMismatch(f"Ring mismatch: {self.name} vs {other.name}")

    def lift(self, a: "RingElement") -> Lift:
        self.check_same(a.ring)
        return a.c

    def reduce(self, z: Union[int, Sequence[int]]) -> "RingElement":
        if isinstance(z, (int, np.integer)):
            return self.from_int(int(z))
        return RingElement(self, self._lmod(tuple(z), self.char))

    def enumerate(self, cap: Optional[int] = None) -> Iterator["RingElement"]:
        cap = self.DEFAULT_SIZE_CAP if cap is None else cap
        if self.size > cap:
            raise SizeCap(f"{self.name} has {self.size} elements (cap {cap})")
        for coeffs in itertools.product(range(self.char), repeat=self.dim):
            yield RingElement(self, tuple(reversed(coeffs)))

    def random(self, rng: np.random.Generator) -> "RingElement":
        coeffs = rng.integers(0, self.char, size=self.dim)
        return RingElement(self, tuple(int(c) for c in coeffs))

    @cached_property
    def residue_field(self) -> "CoefficientRing":
        if self.is_perfect_char_p:
            return self
        return CoefficientRing(self.p, 1, self.modulus, 1)

    @cached_property
    def mod_p(self) -> "CoefficientRing":
        """R/pR"""
        if self.N == 1:
            return self
        return CoefficientRing(self.p, 1, self.modulus, self.eps_order)

    def reduce_mod_p(self, a: "RingElement") -> "RingElement":
        return self.mod_p.reduce(a.c)

    def to_residue(self, a: "RingElement") -> "RingElement":
        return self.residue_field.reduce(a.c[: self.degree])

    def is_unit(self, a: "RingElement") -> bool:
        return any(self.to_residue(a).c)

    def inv(self, a: "RingElement") -> "RingElement":
        if not self.is_unit(a):
            raise NonUnit(f"{a} is not a unit of {self.name}")
        field = self.residue_field
        q = self.residue_cardinality
        r = field._lpow(self.to_residue(a).c, q - 2, self.p)
        y = self.reduce(r + (0,) * (self.dim - self.degree))
        two = self.from_int(2)
        # Newton iteration: 1 - a*y is nilpotent and squares at each step
        for _ in range((self.N * self.eps_order).bit_length() + 2):
            if a * y == self.one():
                return y
            y = y * (two - a * y)
        assert a * y == self.one(), "Newton inversion did not converge"
        return y

    def frobenius(self, a: "RingElement") -> "RingElement":
        return a**self.p

    def frobenius_inverse(self, a: "RingElement") -> "RingElement":
        if not self.is_perfect_char_p:
            raise UsageError(f"The p-power map of {self.name} is not invertible")
        return a ** (self.p ** (self.degree - 1))

    @cached_property
    def multiplicative_generator(self) -> "RingElement":
        if not self.is_field:
            raise UsageError(f"{self.name} is not a field")
        order = self.size - 1
        factors = list(sympy.factorint(order).keys())
        for g in self.enumerate():
            if g.is_zero():
                continue
            if all(g ** (order // ell) != self.one() for ell in factors):
                return g
        raise AssertionError("No multiplicative generator found")

    def to_json(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "kind": self.kind,
            "N": self.N,
            "modulus": list(self.modulus),
            "eps_order": self.eps_order,
        }


class RingElement:
    __slots__ = ("ring", "c")

    def __init__(self, ring: CoefficientRing, c: Lift):
        self.ring = ring
        self.c = c

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ring is not self.ring:
                self.ring.check_same(other.ring)
            return other
        if isinstance(other, (int, np.integer)):
            return self.ring.from_int(int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RingElement(self.ring, self.ring._ladd(self.c, other.c, self.ring.char))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RingElement(self.ring, self.ring._lsub(self.c, other.c, self.ring.char))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return RingElement(self.ring, self.ring._lscale(self.c, -1, self.ring.char))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RingElement(self.ring, self.ring._lmul(self.c, other.c, self.ring.char))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.ring.inv(self) ** (-e)
        return RingElement(self.ring, self.ring._lpow(self.c, e, self.ring.char))

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = self.ring.from_int(int(other))
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring == other.ring and self.c == other.c

    def __hash__(self):
        return hash((self.ring.key, self.c))

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_unit(self) -> bool:
        return self.ring.is_unit(self)

    def inverse(self) -> "RingElement":
        return self.ring.inv(self)

    def to_json(self):
        if self.ring.dim == 1:
            return self.c[0]
        return list(self.c)

    def __repr__(self):
        if self.ring.dim == 1:
            return str(self.c[0])
        terms = []
        d = self.ring.degree
        for index, coeff in enumerate(self.c):
            if not coeff:
                continue
            i, j = index % d, index // d
            mono = "".join(
                part
                for part in (
                    "" if i == 0 else ("x" if i == 1 else f"x^{i}"),
                    "" if j == 0 else ("e" if j == 1 else f"e^{j}"),
                )
            )
            if not mono:
                terms.append(str(coeff))
            else:
                terms.append(mono if coeff == 1 else f"{coeff}*{mono}")
        return " + ".join(reversed(terms)) or "0"


class RingMap:
    """Ring homomorphism R -> R' given by the images of x and eps."""

    def __init__(
        self,
        source: CoefficientRing,
        target: CoefficientRing,
        x_image: Optional[RingElement] = None,
        eps_image: Optional[RingElement] = None,
    ):
        self.source = source
        self.target = target
        if source.p != target.p:
            raise RingMismatch("Ring maps must preserve the prime")
        if target.N > source.N:
            raise RingMismatch(
                f"p^{source.N} = 0 in {source.name} but not in {target.name}"
            )
        if source.degree > 1:
            if x_image is None:
                raise UsageError("Image of x required")
            target.check_same(x_image.ring)
            value = target.zero()
            for coeff in reversed(source.modulus):
                value = value * x_image + coeff
            if not value.is_zero():
                raise RingMismatch(f"{x_image} is not a root of the modulus")
        if source.eps_order > 1:
            eps_image = target.zero() if eps_image is None else eps_image
            if not (eps_image**source.eps_order).is_zero():
                raise RingMismatch(f"{eps_image} is not nilpotent of the right order")
        self.x_image = x_image
        self.eps_image = eps_image

    @classmethod
    def canonical(cls, source: CoefficientRing, target: CoefficientRing) -> "RingMap":
        x_image = None
        if source.degree > 1:
            if source.modulus == target.modulus:
                x_image = target.gen()
            else:
                for candidate in target.enumerate():
                    value = target.zero()
                    for coeff in reversed(source.modulus):
                        value = value * candidate + coeff
                    if value.is_zero():
                        x_image = candidate
                        break
                if x_image is None:
                    raise UsageError(f"No ring map {source.name} -> {target.name}")
        eps_image = None
        if source.eps_order > 1:
            if 1 < target.eps_order <= source.eps_order:
                eps_image = target.eps()
            else:
                eps_image = target.zero()
        return cls(source, target, x_image, eps_image)

    def __call__(self, a: RingElement) -> RingElement:
        self.source.check_same(a.ring)
        d = self.source.degree
        result = self.target.zero()
        for index, coeff in enumerate(a.c):
            if not coeff:
                continue
            i, j = index % d, index // d
            term = self.target.from_int(coeff)
            if i:
                term = term * self.x_image**i
            if j:
                term = term * self.eps_image**j
            result = result + term
        return result


def default_modulus(p: int, a: int) -> Tuple[int, ...]:
    """First monic irreducible polynomial of degree a mod p, low-to-high."""
    if a == 1:
        return (0, 1)
    x = sympy.Symbol("x")
    for coeffs in itertools.product(range(p), repeat=a):
        modulus = tuple(coeffs) + (1,)
        if sympy.Poly(list(reversed(modulus)), x, modulus=p).is_irreducible:
            return modulus
    raise AssertionError(f"No irreducible polynomial of degree {a} mod {p}")


def _prime_power(n: int) -> Tuple[int, int]:
    factors = sympy.factorint(n)
    if len(factors) != 1:
        raise UsageError(f"{n} is not a prime power")
    ((p, e),) = factors.items()
    return p, e


RING_NAME_RE = re.compile(r"^(Z|F)(\d+)(e?)$")


def ring_from_name(name: str) -> CoefficientRing:
    """Short ring names: Z4, Z27, F2, F4, F9, F2e, Z4e."""
    match = RING_NAME_RE.match(name.strip())
    if match is None:
        raise UsageError(f"Unknown ring name {name}")
    kind, order, eps = match.groups()
    p, e = _prime_power(int(order))
    eps_order = 2 if eps else 1
    if kind == "Z":
        return CoefficientRing(p, e, None, eps_order, name=name)
    return CoefficientRing(p, 1, default_modulus(p, e), eps_order, name=name)


def ring_from_int(n: int) -> CoefficientRing:
    """Z/nZ for a prime power n."""
    p, e = _prime_power(n)
    return CoefficientRing(p, e, None, 1, name=f"Z{n}")


def ring_from_spec(spec: Mapping[str, Any]) -> CoefficientRing:
    """Ring from a configuration table such as
    ``{ p = 2, kind = "Fq", a = 2, modulus = [1,1,1] }``."""
    try:
        p = int(spec["p"])
    except KeyError as err:
        raise UsageError("Ring spec needs a prime p") from err
    kind = spec.get("kind", "ZmodPN")
    eps_order = int(spec.get("eps_order", 2 if kind == "PolyQuotient" else 1))
    if kind == "ZmodPN":
        return CoefficientRing(p, int(spec.get("N", 1)), None, eps_order)
    if kind in ("Fq", "GaloisField"):
        a = int(spec.get("a", 1))
        modulus = spec.get("modulus") or default_modulus(p, a)
        if len(modulus) != a + 1:
            raise UsageError(f"Modulus {modulus} does not have degree {a}")
        return CoefficientRing(p, 1, modulus, eps_order)
    if kind == "PolyQuotient":
        return CoefficientRing(
            p, int(spec.get("N", 1)), spec.get("modulus"), eps_order
        )
    raise UsageError(f"Unknown ring kind {kind}")
