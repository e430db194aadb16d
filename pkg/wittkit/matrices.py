"""Dense matrices over W_m(R).

Matrices are tuples of rows. Entries are WittVectors of one ring; mixed
lengths truncate like scalar operations do.
"""

from typing import Callable, List, Sequence, Tuple, Union

from .common import NotInvertible, UsageError
from .rings import CoefficientRing, RingMap
from .witt import WittVector, frobenius, witt_from_int, witt_one, witt_zero

Matrix = Tuple[Tuple[WittVector, ...], ...]


def shape(A: Sequence[Sequence]) -> Tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def mat_from_values(
    ring: CoefficientRing, m: int, rows: Sequence[Sequence[Union[int, WittVector, Sequence]]]
) -> Matrix:
    """Integers embed through Z -> W_m(R); lists are Witt coefficient lists."""
    out = []
    for row in rows:
        entries = []
        for value in row:
            if isinstance(value, WittVector):
                entries.append(value)
            elif isinstance(value, int):
                entries.append(witt_from_int(value, ring, m))
            else:
                coeffs = list(value) + [0] * (m - len(value))
                entries.append(WittVector(ring, coeffs[:m]))
        out.append(tuple(entries))
    return tuple(out)


def identity(ring: CoefficientRing, m: int, n: int) -> Matrix:
    one, zero = witt_one(ring, m), witt_zero(ring, m)
    return tuple(tuple(one if r == c else zero for c in range(n)) for r in range(n))


def zeros(ring: CoefficientRing, m: int, rows: int, cols: int) -> Matrix:
    zero = witt_zero(ring, m)
    return tuple(tuple(zero for _ in range(cols)) for _ in range(rows))


def diagonal(entries: Sequence[WittVector]) -> Matrix:
    n = len(entries)
    zero = entries[0] * 0
    return tuple(
        tuple(entries[r] if r == c else zero for c in range(n)) for r in range(n)
    )


def mat_map(fn: Callable, A: Sequence[Sequence]) -> tuple:
    return tuple(tuple(fn(x) for x in row) for row in A)


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    if shape(A) != shape(B):
        raise UsageError(f"Cannot subtract {shape(B)} from {shape(A)} matrices")
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(s, A: Matrix) -> Matrix:
    return mat_map(lambda x: s * x, A)


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence], zero=None) -> tuple:
    """Product of matrices whose entries support + and *."""
    n, k = shape(A)
    k2, l = shape(B)
    if k != k2:
        raise UsageError(f"Cannot multiply {n}x{k} by {k2}x{l} matrices")
    out = []
    for r in range(n):
        row = []
        for c in range(l):
            acc = zero
            for j in range(k):
                term = A[r][j] * B[j][c]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def kron(A: Sequence[Sequence], B: Sequence[Sequence], mul: Callable = None) -> tuple:
    """Kronecker product; basis index (a, b) sits at a * len(B) + b."""
    mul = mul or (lambda x, y: x * y)
    n, k = shape(A)
    s, t = shape(B)
    return tuple(
        tuple(mul(A[r // s][c // t], B[r % s][c % t]) for c in range(k * t))
        for r in range(n * s)
    )


def transpose(A: Sequence[Sequence]) -> tuple:
    n, k = shape(A)
    return tuple(tuple(A[r][c] for r in range(n)) for c in range(k))


def mat_frobenius(A: Matrix) -> Matrix:
    return mat_map(frobenius, A)


def mat_base_change(A: Matrix, ring_map: RingMap) -> Matrix:
    return mat_map(lambda x: x.map(ring_map), A)


def mat_truncate(A: Matrix, n: int) -> Matrix:
    return mat_map(lambda x: x.truncate(n), A)


def mat_precision(A: Matrix) -> int:
    return min(x.precision for row in A for x in row)


def mat_agrees(A: Matrix, B: Matrix) -> bool:
    """Entrywise equality on the certified prefix."""
    if shape(A) != shape(B):
        return False
    return all(a.agrees_with(b) for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def charpoly(A: Sequence[Sequence], one, zero) -> List:
    """Coefficients [1, c_1, ..., c_n] of det(T - A), highest degree first.

    Division-free (Berkowitz), so it works over any commutative ring.
    """
    n = len(A)
    if n == 0:
        return [one]
    vect = [one, zero - A[0][0]]
    for r in range(1, n):
        R = [A[r][j] for j in range(r)]
        S = [A[j][r] for j in range(r)]
        M = [[A[i][j] for j in range(r)] for i in range(r)]
        toeplitz = [one, zero - A[r][r]]
        column = S
        for _ in range(r):
            value = zero
            for rj, sj in zip(R, column):
                value = value + rj * sj
            toeplitz.append(zero - value)
            column = [
                sum((M[i][j] * column[j] for j in range(r)), zero) for i in range(r)
            ]
        new = []
        for i in range(r + 2):
            acc = zero
            for j in range(min(i, r) + 1):
                acc = acc + toeplitz[i - j] * vect[j]
            new.append(acc)
        vect = new
    return vect


def det(A: Sequence[Sequence], one, zero):
    coeffs = charpoly(A, one, zero)
    n = len(A)
    return coeffs[-1] if n % 2 == 0 else zero - coeffs[-1]


def witt_det(A: Matrix) -> WittVector:
    x = A[0][0]
    return det(A, witt_one(x.ring, x.length), witt_zero(x.ring, x.length))


def witt_charpoly(A: Matrix) -> List[WittVector]:
    x = A[0][0]
    return charpoly(A, witt_one(x.ring, x.length), witt_zero(x.ring, x.length))


def is_invertible(A: Matrix) -> bool:
    return bool(A) and witt_det(A).is_unit()


def inverse(A: Matrix) -> Matrix:
    """Gauss-Jordan with unit pivots; exact since W_m(R) is local."""
    n, k = shape(A)
    if n != k or n == 0:
        raise NotInvertible(f"A {n}x{k} matrix is not invertible")
    x = A[0][0]
    ring, m = x.ring, min(e.length for row in A for e in row)
    one, zero = witt_one(ring, m), witt_zero(ring, m)
    work = [list(row) + [one if r == c else zero for c in range(n)] for r, row in enumerate(A)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col].is_unit()), None)
        if pivot is None:
            raise NotInvertible(f"No unit pivot in column {col}")
        work[col], work[pivot] = work[pivot], work[col]
        inv = work[col][col].inverse()
        work[col] = [inv * e for e in work[col]]
        for r in range(n):
            if r != col and not work[r][col].is_zero():
                factor = work[r][col]
                work[r] = [e - factor * pe for e, pe in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def mat_to_json(A: Sequence[Sequence]):
    return [[x.to_json() for x in row] for row in A]
