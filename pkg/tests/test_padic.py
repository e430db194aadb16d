import pytest

from wittkit.common import InsufficientPrecision, UnsupportedRing
from wittkit.padic import PAdicMatrix, PAdicNumber
from wittkit.serialize import parse_padic_matrix
from wittkit.witt import WittVector


def test_from_int_and_valuation(f2) -> None:
    x = PAdicNumber.from_int(12, f2, 4)
    assert x.val == 2
    assert x.abs_prec == 6
    assert x.valuation().exact
    zero = PAdicNumber.from_int(0, f2, 4)
    assert zero.is_zero() and not zero.valuation().exact


def test_arithmetic(f2) -> None:
    a, b = PAdicNumber.from_int(3, f2, 5), PAdicNumber.from_int(5, f2, 5)
    assert (a * b).agrees_with(15)
    assert (a + b).agrees_with(8)
    assert (a + b).val == 3
    assert (b - a).agrees_with(2)
    assert (a / b * b).agrees_with(a)
    assert a.shift(-2).val == -2


def test_cancellation_loses_precision(f2) -> None:
    a = PAdicNumber.from_int(1, f2, 3)
    b = PAdicNumber.from_int(9, f2, 3)
    difference = b - a
    assert difference.abs_prec == 3
    assert difference.is_zero()
    with pytest.raises(InsufficientPrecision):
        difference.inverse()


def test_integrality_and_witt(f2) -> None:
    x = PAdicNumber.from_witt(WittVector(f2, [0, 1, 1]))
    assert x.val == 1
    assert x.to_witt(3) == WittVector(f2, [0, 1, 1])
    assert not x.shift(-2).is_integral()
    with pytest.raises(InsufficientPrecision):
        PAdicNumber.zero(f2, -1).is_integral()


def test_needs_a_field(z4) -> None:
    with pytest.raises(UnsupportedRing):
        PAdicNumber.from_int(1, z4, 2)


def test_matrix_inverse_and_divisors(f2) -> None:
    b = parse_padic_matrix([[0, 2], [1, 0]], f2, 6)
    assert b.elementary_divisors() == [0, 1]
    inv = b.inverse()
    assert (b * inv).agrees_with(PAdicMatrix.identity(f2, 2, 6))
    assert inv.pexp == 1
    assert not inv.is_integral()
    assert parse_padic_matrix([["p^-1", 0], [0, "3*p^2"]], f2, 4).elementary_divisors() == [-1, 2]
