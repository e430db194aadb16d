import pytest

from wittkit.common import NonLocalRing, NonUnit, RingMismatch, SizeCap, UsageError
from wittkit.rings import CoefficientRing, RingMap, ring_from_int, ring_from_name, ring_from_spec


def test_ring_names() -> None:
    z4 = ring_from_name("Z4")
    assert (z4.p, z4.N, z4.size, z4.kind) == (2, 2, 4, "ZmodPN")
    f4 = ring_from_name("F4")
    assert (f4.p, f4.degree, f4.size, f4.kind) == (2, 2, 4, "GaloisField")
    assert f4.is_field
    f2e = ring_from_name("F2e")
    assert f2e.kind == "PolyQuotient"
    assert f2e.is_char_p and not f2e.is_perfect_char_p


@pytest.mark.parametrize("name", ["Z6", "Q", "F12", ""])
def test_bad_ring_names(name) -> None:
    with pytest.raises(UsageError):
        ring_from_name(name)


def test_ring_from_int_and_spec() -> None:
    assert ring_from_int(4) == ring_from_name("Z4")
    assert ring_from_spec({"p": 2, "kind": "Fq", "a": 2}) == ring_from_name("F4")
    assert ring_from_spec({"p": 3, "N": 2}) == ring_from_name("Z9")
    with pytest.raises(UsageError):
        ring_from_spec({"kind": "Fq"})


def test_reducible_modulus_is_not_local() -> None:
    # x^2 + 1 = (x + 1)^2 modulo 2
    with pytest.raises(NonLocalRing):
        CoefficientRing(2, 1, (1, 0, 1))


def test_units_match_brute_force(ring) -> None:
    one = ring.one()
    elements = list(ring.enumerate())
    for a in elements:
        brute = any(a * b == one for b in elements)
        assert a.is_unit() == brute
        if brute:
            assert a * a.inverse() == one


def test_non_unit_inverse(z4) -> None:
    with pytest.raises(NonUnit):
        z4.from_int(2).inverse()


def test_enumeration_cap(f4) -> None:
    with pytest.raises(SizeCap):
        list(f4.enumerate(cap=3))


def test_frobenius_inverse(f4) -> None:
    for a in f4.enumerate():
        assert f4.frobenius_inverse(f4.frobenius(a)) == a


def test_multiplicative_generator(f4) -> None:
    g = f4.multiplicative_generator
    assert g != f4.one() and g**3 == f4.one()


def test_ring_maps() -> None:
    z8, z4 = ring_from_name("Z8"), ring_from_name("Z4")
    reduction = RingMap.canonical(z8, z4)
    assert reduction(z8.from_int(5)) == z4.from_int(1)
    with pytest.raises(RingMismatch):
        RingMap(z4, z8)
