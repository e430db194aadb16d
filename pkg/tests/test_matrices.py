import pytest

from wittkit.common import NotInvertible, UsageError
from wittkit.matrices import (
    identity,
    inverse,
    is_invertible,
    kron,
    mat_from_values,
    mat_mul,
    transpose,
    witt_charpoly,
    witt_det,
)
from wittkit.witt import witt_from_int, witt_random


def test_det_and_charpoly(z4) -> None:
    A = mat_from_values(z4, 2, [[1, 2], [3, 4]])
    assert witt_det(A) == witt_from_int(-2, z4, 2)
    one, trace, det = witt_charpoly(A)
    assert one == 1
    assert trace == witt_from_int(-5, z4, 2)
    assert det == witt_from_int(-2, z4, 2)


def test_inverse(ring, rng) -> None:
    for _ in range(5):
        A = tuple(tuple(witt_random(ring, 2, rng) for _ in range(3)) for _ in range(3))
        if not is_invertible(A):
            with pytest.raises(NotInvertible):
                inverse(A)
            continue
        assert mat_mul(A, inverse(A)) == identity(ring, 2, 3)


def test_kron_layout(f2) -> None:
    A = mat_from_values(f2, 2, [[1, 2], [0, 1]])
    B = mat_from_values(f2, 2, [[0, 1], [1, 0]])
    K = kron(A, B)
    assert K[0][3] == A[0][1] * B[0][1]
    assert K[3][0] == A[1][0] * B[1][0]
    assert transpose(transpose(K)) == K


def test_shape_errors(f2) -> None:
    A = mat_from_values(f2, 2, [[1, 0]])
    with pytest.raises(UsageError):
        mat_mul(A, A)
    with pytest.raises(NotInvertible):
        inverse(A)
