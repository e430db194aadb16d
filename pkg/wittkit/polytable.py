"Universal Witt sum and product polynomials"

import threading
from typing import Callable, Dict, List, Tuple

import sympy

from .common import SizeCap
from .witt import WittVector


class WittPolyTable:
    """Integer polynomials S_n, P_n with w_n(S) = w_n(X) + w_n(Y) and
    w_n(P) = w_n(X) * w_n(Y).

    Only used as an oracle against the ghost-coordinate arithmetic.
    """

    PRIMES = (2, 3, 5)
    MAX_DEPTH = 4

    def __init__(self, p: int, m: int):
        if p not in self.PRIMES or not 1 <= m <= self.MAX_DEPTH:
            raise SizeCap(
                f"Polynomial tables are limited to p in {self.PRIMES} and m <= {self.MAX_DEPTH}"
            )
        self.p = p
        self.m = m
        self.X = sympy.symbols(f"X0:{m}")
        self.Y = sympy.symbols(f"Y0:{m}")
        self.gens = tuple(self.X) + tuple(self.Y)
        self.sums = self._solve(lambda wx, wy: wx + wy)
        self.products = self._solve(lambda wx, wy: wx * wy)

    def _poly(self, expr) -> sympy.Poly:
        return sympy.Poly(expr, *self.gens, domain="ZZ")

    def ghost_poly(self, variables, n: int) -> sympy.Poly:
        p = self.p
        return self._poly(sum(p**i * variables[i] ** (p ** (n - i)) for i in range(n + 1)))

    def _solve(self, op: Callable) -> List[sympy.Poly]:
        p = self.p
        polys: List[sympy.Poly] = []
        for n in range(self.m):
            numerator = op(self.ghost_poly(self.X, n), self.ghost_poly(self.Y, n))
            for i, poly in enumerate(polys):
                numerator = numerator - poly ** (p ** (n - i)) * p**i
            polys.append(numerator.exquo_ground(p**n))
        return polys

    def verify(self) -> bool:
        """Expand the defining ghost identities."""
        p = self.p
        for n in range(self.m):
            wx, wy = self.ghost_poly(self.X, n), self.ghost_poly(self.Y, n)
            w_sum = sum(
                (poly ** (p ** (n - i)) * p**i for i, poly in enumerate(self.sums[: n + 1])),
                self._poly(0),
            )
            w_prod = sum(
                (poly ** (p ** (n - i)) * p**i for i, poly in enumerate(self.products[: n + 1])),
                self._poly(0),
            )
            if w_sum != wx + wy or w_prod != wx * wy:
                return False
        return True

    def _evaluate(self, polys: List[sympy.Poly], x: WittVector, y: WittVector) -> WittVector:
        ring = x.ring
        ring.check_same(y.ring)
        n = min(x.length, y.length, self.m)
        zero = ring._lzero()
        values = (x.lifts()[:n] + [zero] * (self.m - n)) + (
            y.lifts()[:n] + [zero] * (self.m - n)
        )
        coeffs = []
        for poly in polys[:n]:
            total = zero
            for monom, coeff in poly.terms():
                term = ring._lfrom_int(int(coeff))
                for value, exponent in zip(values, monom):
                    if exponent:
                        term = ring._lmul(term, ring._lpow(value, exponent, ring.char), ring.char)
                total = ring._ladd(total, term, ring.char)
            coeffs.append(total)
        return WittVector._from_lifts(ring, coeffs, min(x.precision, y.precision, n))

    def add(self, x: WittVector, y: WittVector) -> WittVector:
        return self._evaluate(self.sums, x, y)

    def mul(self, x: WittVector, y: WittVector) -> WittVector:
        return self._evaluate(self.products, x, y)


_TABLES: Dict[Tuple[int, int], WittPolyTable] = {}
_TABLES_LOCK = threading.Lock()


def witt_poly_table(p: int, m: int) -> WittPolyTable:
    with _TABLES_LOCK:
        if (p, m) not in _TABLES:
            _TABLES[(p, m)] = WittPolyTable(p, m)
        return _TABLES[(p, m)]
