from dataclasses import replace

import pytest

from wittkit.common import SizeCap, UsageError
from wittkit.frame import (
    FrameElement,
    frame_check,
    frame_mul,
    frame_one,
    frame_sigma,
    frame_t,
    frame_t_map,
    frame_tau,
    frame_v,
    witt_frame_spec,
)
from wittkit.witt import WittVector, frobenius, verschiebung, witt_from_int, witt_one, witt_random


def test_frame_axioms(ring, rng) -> None:
    results = frame_check(witt_frame_spec(ring, 3), 15, rng)
    assert len(results) == 8
    assert all(results), [str(r) for r in results if not r]


def test_sigma_and_tau_of_t(f4) -> None:
    t = frame_t(f4, 3)
    assert frame_sigma(t) == witt_from_int(2, f4, 3)
    assert frame_tau(t) == witt_one(f4, 3)


def test_tau_of_v_image(f2, rng) -> None:
    u = witt_random(f2, 3, rng)
    assert frame_tau(frame_v(u)) == verschiebung(u)
    assert frame_sigma(frame_v(u)) == u
    p = witt_from_int(2, f2, 3)
    assert frame_tau(frame_v(u, 2)) == verschiebung(p * u)


def test_t_times_v_image(z4, rng) -> None:
    u = witt_random(z4, 3, rng)
    a = frame_v(u, 2)
    lowered = frame_t_map(a)
    assert lowered.deg == 1
    assert frame_sigma(lowered).agrees_with(witt_from_int(2, z4, 3) * u)


def test_mixed_degree_product(f4, rng) -> None:
    x, u = witt_random(f4, 3, rng), witt_random(f4, 3, rng)
    product = frame_mul(FrameElement(0, x), frame_v(u))
    assert product.deg == 1
    assert product.payload == frobenius(x) * u
    back = frame_mul(frame_t(f4, 3, 2), frame_v(u, 1))
    assert back.deg == -1
    assert frame_tau(back) == verschiebung(u)


def test_degree_window(f2) -> None:
    with pytest.raises(SizeCap):
        FrameElement(FrameElement.DEGREE_WINDOW + 1, witt_one(f2, 2))


def test_addition_needs_equal_degrees(f2) -> None:
    one = frame_one(f2, 2)
    with pytest.raises(UsageError):
        one + frame_t(f2, 2)
    with pytest.raises(UsageError):
        frame_v(WittVector(f2, [1, 0]), 0)


def test_image_equality(f2) -> None:
    a = frame_v(WittVector(f2, [1, 0, 1]))
    b = frame_v(WittVector(f2, [1, 0, 0]))
    # v drops the top coefficient of the payload in W_3
    assert a.eq_as_image(b)
    assert not a.eq(b)


def _result(results, name):
    (result,) = [r for r in results if r.name == name]
    return result


def test_regrading_is_not_a_t_map(f2, rng) -> None:
    spec = replace(witt_frame_spec(f2, 3), t_map=lambda a: FrameElement(a.deg - 1, a.payload))
    result = _result(frame_check(spec, 20, rng), "sigma_n(t_n(a)) = p sigma_n+1(a)")
    assert not result
    assert result.witness is not None and result.witness.startswith("n=")


def test_broken_frobenius_witness_is_reported(f2, rng) -> None:
    def broken(s):
        raise AssertionError("Frobenius is not a lift of x^p")

    spec = replace(witt_frame_spec(f2, 3), frobenius_witness=broken)
    results = frame_check(spec, 5, rng)
    assert len(results) == 8
    result = _result(results, "sigma_0(s) = s^p mod p")
    assert not result
    assert "not a lift" in result.witness
