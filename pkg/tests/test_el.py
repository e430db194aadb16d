import pytest

from wittkit.common import NotEquivariant, SplitFailure, UnsupportedRing, UsageError
from wittkit.display_group import banal_display, dg_action, gl_random
from wittkit.el import (
    ELDatum,
    component_shift,
    component_split,
    components,
    conjugate_lifts,
    determinant_condition,
    el_banal_display,
    el_compatible,
    el_group_membership,
    el_random_group_element,
    el_random_unit,
    lie_ranks,
    morita_reduce,
    o_l_generator,
    swap_weights,
)
from wittkit.matrices import diagonal, identity, inverse, kron, mat_from_values, mat_mul


@pytest.fixture
def data(f4):
    return [
        ELDatum.split(f4, 3, 2, [1, 0], [0, 1]),
        ELDatum.split(f4, 3, 2, [2, 1], [0, 1]),
        ELDatum.split(f4, 3, 2, [1, 1], [0, 0]),
    ]


def test_generator(f4, f2e) -> None:
    zeta = o_l_generator(f4, 2)
    assert zeta**3 == f4.one() and zeta != f4.one()
    assert o_l_generator(f4, 1) == f4.one()
    with pytest.raises(UnsupportedRing):
        o_l_generator(f4, 3)
    with pytest.raises(UnsupportedRing):
        o_l_generator(f2e, 1)
    first, second = conjugate_lifts(f4, 2, 3)
    assert first != second and first**2 == second


def test_split_datum(data) -> None:
    datum = data[1]
    assert datum.weights == (0, 0, 0, 1)
    assert datum.lambda0_ranks == [2, 1]
    assert datum.lambda1_ranks == [0, 1]
    assert components(datum) == [[0, 1], [2, 3]]
    assert datum.to_json()["lambda_rank"] == 4


def test_invalid_data(f4) -> None:
    with pytest.raises(UsageError):
        ELDatum.split(f4, 3, 2, [1, 0], [1, 1])
    with pytest.raises(UsageError):
        ELDatum(f4, 3, 2, [0, 2], identity(f4, 3, 2))
    with pytest.raises(NotEquivariant):
        ELDatum(f4, 3, 2, [0, 1], mat_from_values(f4, 3, [[1, 1], [0, 1]]))


def test_component_split(f4) -> None:
    lams = conjugate_lifts(f4, 2, 3)
    split = component_split(diagonal([lams[0], lams[1], lams[1]]), 2)
    assert split.ranks == [1, 2]
    jordan = ((lams[0], lams[0] ** 0), (lams[0] * 0, lams[0]))
    with pytest.raises(SplitFailure):
        component_split(jordan, 2)


def test_component_shift(data, f4) -> None:
    assert component_shift(data[2]) == mat_from_values(f4, 3, [[0, 1], [1, 0]])


def test_morita_reduction(f4) -> None:
    lams = conjugate_lifts(f4, 2, 3)
    action = kron(diagonal(lams), identity(f4, 3, 2))
    datum = ELDatum(f4, 3, 2, [0, 0, 1, 1], action, s=2)
    reduced = morita_reduce(datum)
    assert reduced.rank == 2
    assert reduced.lambda0_ranks == [1, 0]
    with pytest.raises(UsageError):
        morita_reduce(ELDatum(f4, 3, 2, [0, 0, 1], diagonal([lams[0]] * 3), s=2))


def test_group_membership(data, f4) -> None:
    datum = data[0]
    assert el_group_membership(identity(f4, 3, 2), datum)
    swap = mat_from_values(f4, 3, [[0, 1], [1, 0]])
    assert not el_group_membership(swap, datum)
    with pytest.raises(NotEquivariant):
        el_banal_display(swap, datum)


def test_determinant_condition(data, rng) -> None:
    for datum in data:
        for _ in range(3):
            D = el_banal_display(el_random_unit(datum, rng), datum)
            assert lie_ranks(D, datum) == datum.lambda0_ranks
            assert determinant_condition(D, datum)
            assert not determinant_condition(swap_weights(D), datum)
            h = el_random_group_element(datum, rng)
            assert el_compatible(h, datum)
            moved = banal_display(dg_action(D.phi, h), h.mu)
            assert determinant_condition(moved, datum)


def test_determinant_condition_rank_mismatch(data, rng) -> None:
    D = el_banal_display(el_random_unit(data[0], rng), data[0])
    with pytest.raises(UsageError):
        determinant_condition(D, data[1])


def test_component_split_ignores_base_change(data, f4, rng) -> None:
    for datum in data:
        ranks = component_split(datum.action, datum.a).ranks
        for _ in range(3):
            g = gl_random(f4, 3, datum.rank, rng)
            conjugated = mat_mul(mat_mul(g, datum.action), inverse(g))
            assert component_split(conjugated, datum.a).ranks == ranks
            h = el_random_unit(datum, rng)
            assert el_group_membership(h, datum)
            fixed = mat_mul(mat_mul(h, datum.action), inverse(h))
            assert component_split(fixed, datum.a).ranks == ranks
