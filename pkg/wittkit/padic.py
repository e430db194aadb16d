"""Elements and matrices of W(k)[1/p] for a finite field k with precision ledgers.

A nonzero number is p^val * unit where the unit is a Witt vector over k with
``unit.precision`` certified digits; it is known modulo p^abs_prec with
abs_prec = val + relative precision. Zero only carries abs_prec.
"""

from typing import List, Optional, Sequence, Tuple

from .common import InsufficientPrecision, NotInvertible, UnsupportedRing
from .matrices import charpoly, mat_mul, shape
from .rings import CoefficientRing
from .witt import Valuation, WittVector, frobenius, witt_from_int, witt_inv, witt_one, witt_val


class PAdicNumber:
    # abs_prec of an exact zero
    EXACT = 1 << 16

    __slots__ = ("ring", "val", "unit", "abs_prec")

    def __init__(self, ring: CoefficientRing, val: Optional[int], unit: Optional[WittVector], abs_prec: int):
        if not ring.is_perfect_char_p:
            raise UnsupportedRing(f"p-adic numbers need a perfect field, not {ring.name}")
        self.ring = ring
        self.val = val
        self.unit = unit
        self.abs_prec = abs_prec

    @classmethod
    def zero(cls, ring: CoefficientRing, abs_prec: int) -> "PAdicNumber":
        return cls(ring, None, None, abs_prec)

    @classmethod
    def from_witt(cls, x: WittVector, shift: int = 0) -> "PAdicNumber":
        """p^shift * x"""
        v = witt_val(x)
        if not v.exact:
            return cls.zero(x.ring, shift + x.precision)
        unit = x.truncate(x.precision).p_unshift(v.value)
        return cls(x.ring, v.value + shift, unit, shift + x.precision)

    @classmethod
    def from_int(cls, n: int, ring: CoefficientRing, prec: int) -> "PAdicNumber":
        if n == 0:
            return cls.zero(ring, prec)
        v = 0
        while n % ring.p == 0:
            n //= ring.p
            v += 1
        return cls(ring, v, witt_from_int(n, ring, prec), v + prec)

    @classmethod
    def p_power(cls, ring: CoefficientRing, k: int, prec: int) -> "PAdicNumber":
        return cls(ring, k, witt_one(ring, prec), k + prec)

    def is_zero(self) -> bool:
        """Zero to the certified precision."""
        return self.val is None

    @property
    def relative_precision(self) -> int:
        return 0 if self.val is None else self.abs_prec - self.val

    def valuation(self) -> Valuation:
        if self.val is None:
            return Valuation(self.abs_prec, exact=False)
        return Valuation(self.val)

    def lower_bound(self) -> int:
        return self.abs_prec if self.val is None else self.val

    def _coerce(self, other) -> "PAdicNumber":
        if isinstance(other, PAdicNumber):
            self.ring.check_same(other.ring)
            return other
        if isinstance(other, int):
            return PAdicNumber.from_int(other, self.ring, max(1, self.abs_prec))
        return NotImplemented

    def truncate_abs(self, abs_prec: int) -> "PAdicNumber":
        if abs_prec >= self.abs_prec:
            return self
        if self.val is None or self.val >= abs_prec:
            return PAdicNumber.zero(self.ring, abs_prec)
        return PAdicNumber(self.ring, self.val, self.unit.truncate(abs_prec - self.val), abs_prec)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        A = min(self.abs_prec, other.abs_prec)
        if self.val is None:
            return other.truncate_abs(A)
        if other.val is None:
            return self.truncate_abs(A)
        v = min(self.val, other.val)
        x = self.unit.p_shift(self.val - v)
        y = other.unit.p_shift(other.val - v)
        total = (x + y).truncate(A - v)
        return PAdicNumber.from_witt(total, v)

    __radd__ = __add__

    def __neg__(self):
        if self.val is None:
            return self
        return PAdicNumber(self.ring, self.val, -self.unit, self.abs_prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.val is None or other.val is None:
            return PAdicNumber.zero(self.ring, self.lower_bound() + other.lower_bound())
        unit = self.unit * other.unit
        val = self.val + other.val
        return PAdicNumber(self.ring, val, unit, val + unit.precision)

    __rmul__ = __mul__

    def inverse(self) -> "PAdicNumber":
        if self.val is None:
            raise InsufficientPrecision(f"Cannot invert 0 + O(p^{self.abs_prec})")
        unit = witt_inv(self.unit)
        return PAdicNumber(self.ring, -self.val, unit, -self.val + unit.precision)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def shift(self, k: int) -> "PAdicNumber":
        """p^k * self"""
        if self.val is None:
            return PAdicNumber.zero(self.ring, self.abs_prec + k)
        return PAdicNumber(self.ring, self.val + k, self.unit, self.abs_prec + k)

    def frobenius(self) -> "PAdicNumber":
        if self.val is None:
            return self
        return PAdicNumber(self.ring, self.val, frobenius(self.unit), self.abs_prec)

    def frobenius_inverse(self) -> "PAdicNumber":
        if self.val is None:
            return self
        root = self.ring.p ** (self.ring.degree - 1)
        unit = WittVector(self.ring, [c**root for c in self.unit.coeffs], self.unit.precision)
        return PAdicNumber(self.ring, self.val, unit, self.abs_prec)

    def is_integral(self) -> bool:
        if self.val is None:
            if self.abs_prec < 0:
                raise InsufficientPrecision(f"Integrality of 0 + O(p^{self.abs_prec}) is undecided")
            return True
        return self.val >= 0

    def to_witt(self, m: int) -> WittVector:
        """The integral number as an element of W_m(k), certified up to abs_prec."""
        if not self.is_integral():
            raise InsufficientPrecision(f"{self} is not integral")
        ring = self.ring
        if self.val is None:
            lifts = [ring._lzero()] * m
        else:
            lifts = self.unit.p_shift(self.val).lifts()[:m]
            lifts += [ring._lzero()] * (m - len(lifts))
        return WittVector._from_lifts(ring, lifts, min(m, self.abs_prec))

    def agrees_with(self, other) -> bool:
        """Equality modulo the common absolute precision.

        The window counts certified digits above the smaller of 0 and the
        leading valuations; an empty window cannot decide anything.
        """
        other = self._coerce(other)
        A = min(self.abs_prec, other.abs_prec)
        window = A - min(0, self.lower_bound(), other.lower_bound())
        if window < 1:
            raise InsufficientPrecision(f"No certified digit to compare {self} and {other}")
        return (self - other).is_zero()

    def __repr__(self):
        if self.val is None:
            return f"O(p^{self.abs_prec})"
        head = "" if self.val == 0 else f"p^{self.val}*"
        return f"{head}{self.unit!r}"

    def to_json(self):
        if self.val is None:
            return {"val": None, "abs_prec": self.abs_prec}
        return {"val": self.val, "unit": self.unit.to_json(), "abs_prec": self.abs_prec}


class PAdicMatrix:
    """Matrix over W(k)[1/p]; ``pexp`` is the exponent clearing denominators."""

    def __init__(self, rows: Sequence[Sequence[PAdicNumber]]):
        self.rows = tuple(tuple(row) for row in rows)

    @classmethod
    def from_witt(cls, A: Sequence[Sequence[WittVector]], column_shifts: Optional[Sequence[int]] = None) -> "PAdicMatrix":
        """A . diag(p^shift)"""
        n, k = shape(A)
        shifts = column_shifts or [0] * k
        return cls([[PAdicNumber.from_witt(A[r][c], shifts[c]) for c in range(k)] for r in range(n)])

    @classmethod
    def identity(cls, ring: CoefficientRing, n: int, prec: int) -> "PAdicMatrix":
        return cls.diagonal(ring, [0] * n, prec)

    @classmethod
    def diagonal(cls, ring: CoefficientRing, exponents: Sequence[int], prec: int) -> "PAdicMatrix":
        """diag(p^e_1, ..., p^e_n)"""
        n = len(exponents)
        return cls(
            [
                [
                    PAdicNumber.p_power(ring, exponents[r], prec)
                    if r == c
                    else PAdicNumber.zero(ring, prec)
                    for c in range(n)
                ]
                for r in range(n)
            ]
        )

    @property
    def ring(self) -> CoefficientRing:
        return self.rows[0][0].ring

    @property
    def shape(self) -> Tuple[int, int]:
        return shape(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def precision(self) -> int:
        return min(x.abs_prec for row in self.rows for x in row)

    @property
    def pexp(self) -> int:
        vals = [x.val for row in self.rows for x in row if x.val is not None]
        return max(0, -min(vals)) if vals else 0

    def integral_view(self, m: int) -> Tuple[Tuple[WittVector, ...], ...]:
        """Entries of p^pexp * self in W_m(k)."""
        e = self.pexp
        return tuple(tuple(x.shift(e).to_witt(m) for x in row) for row in self.rows)

    def __mul__(self, other: "PAdicMatrix") -> "PAdicMatrix":
        return PAdicMatrix(mat_mul(self.rows, other.rows))

    def __add__(self, other: "PAdicMatrix") -> "PAdicMatrix":
        return PAdicMatrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def map(self, fn) -> "PAdicMatrix":
        return PAdicMatrix([[fn(x) for x in row] for row in self.rows])

    def shift(self, k: int) -> "PAdicMatrix":
        return self.map(lambda x: x.shift(k))

    def frobenius(self) -> "PAdicMatrix":
        return self.map(lambda x: x.frobenius())

    def transpose(self) -> "PAdicMatrix":
        n, k = self.shape
        return PAdicMatrix([[self.rows[r][c] for r in range(n)] for c in range(k)])

    def kron(self, other: "PAdicMatrix") -> "PAdicMatrix":
        n, k = self.shape
        s, t = other.shape
        return PAdicMatrix(
            [
                [self.rows[r // s][c // t] * other.rows[r % s][c % t] for c in range(k * t)]
                for r in range(n * s)
            ]
        )

    def is_integral(self) -> bool:
        return all(x.is_integral() for row in self.rows for x in row)

    def agrees_with(self, other: "PAdicMatrix") -> bool:
        if self.shape != other.shape:
            return False
        return all(a.agrees_with(b) for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    def _one_zero(self) -> Tuple[PAdicNumber, PAdicNumber]:
        width = max(1, max(x.relative_precision for row in self.rows for x in row))
        return PAdicNumber.p_power(self.ring, 0, width), PAdicNumber.zero(self.ring, PAdicNumber.EXACT)

    def charpoly(self) -> List[PAdicNumber]:
        one, zero = self._one_zero()
        return charpoly(self.rows, one, zero)

    def det(self) -> PAdicNumber:
        coeffs = self.charpoly()
        return coeffs[-1] if self.n % 2 == 0 else -coeffs[-1]

    def inverse(self) -> "PAdicMatrix":
        """Gauss-Jordan over W(k)[1/p] with minimal-valuation pivots."""
        n, k = self.shape
        if n != k:
            raise NotInvertible(f"A {n}x{k} matrix is not invertible")
        one, zero = self._one_zero()
        work = [
            list(row) + [one if r == c else zero for c in range(n)]
            for r, row in enumerate(self.rows)
        ]
        for col in range(n):
            candidates = [r for r in range(col, n) if not work[r][col].is_zero()]
            if not candidates:
                raise InsufficientPrecision(f"Pivot in column {col} vanishes at precision", index=col)
            pivot = min(candidates, key=lambda r: work[r][col].val)
            work[col], work[pivot] = work[pivot], work[col]
            inv = work[col][col].inverse()
            work[col] = [inv * e for e in work[col]]
            for r in range(n):
                if r != col and not work[r][col].is_zero():
                    factor = work[r][col]
                    work[r] = [e - factor * pe for e, pe in zip(work[r], work[col])]
        return PAdicMatrix([row[n:] for row in work])

    def elementary_divisors(self) -> List[int]:
        """Valuations of the Smith normal form, ascending.

        Minimal-valuation pivoting; a pivot that vanishes at precision raises.
        """
        work = [list(row) for row in self.rows]
        n, k = self.shape
        result = []
        for step in range(min(n, k)):
            best = None
            for r in range(step, n):
                for c in range(step, k):
                    x = work[r][c]
                    if not x.is_zero() and (best is None or x.val < work[best[0]][best[1]].val):
                        best = (r, c)
            if best is None:
                raise InsufficientPrecision(f"Elementary divisor {step} vanishes at precision", index=step)
            r0, c0 = best
            work[step], work[r0] = work[r0], work[step]
            for row in work:
                row[step], row[c0] = row[c0], row[step]
            pivot = work[step][step]
            inv = pivot.inverse()
            for r in range(step + 1, n):
                if not work[r][step].is_zero():
                    factor = work[r][step] * inv
                    work[r] = [e - factor * pe for e, pe in zip(work[r], work[step])]
            for c in range(step + 1, k):
                if not work[step][c].is_zero():
                    factor = work[step][c] * inv
                    for row in work:
                        row[c] = row[c] - factor * row[step]
            result.append(pivot.val)
        return sorted(result)

    def __repr__(self):
        return f"PAdicMatrix({[list(row) for row in self.rows]!r})"

    def to_json(self, m: Optional[int] = None):
        if m is None:
            finite = [x.abs_prec for row in self.rows for x in row if x.val is not None]
            m = max(1, max(finite or [1]) + self.pexp)
        return {
            "pexp": self.pexp,
            "precision": self.precision,
            "entries": [[x.to_json() for x in row] for row in self.integral_view(m)],
        }
