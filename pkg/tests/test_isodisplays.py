from collections import Counter
from fractions import Fraction

import pytest

from wittkit.common import InsufficientPrecision, UnsupportedRing
from wittkit.displays import Display, display_base_change
from wittkit.isodisplays import (
    as_padic,
    det_valuation,
    is_isogeny,
    isodisplay_dual,
    isodisplay_of,
    isodisplay_tensor,
    morphism_from_quasi_isogeny,
    newton_slopes,
    quasi_isogeny_check,
    scalar_quasi_isogeny,
)
from wittkit.matrices import mat_from_values
from wittkit.modules import GradedModule
from wittkit.rings import RingMap
from wittkit.zink import random_display


def _display(ring, weights, phi, m=4):
    return Display(GradedModule(ring, m, weights), mat_from_values(ring, m, phi))


@pytest.mark.parametrize(
    "weights, phi, slopes",
    [
        ([0], [[1]], ["0"]),
        ([1], [[1]], ["1"]),
        ([0, 1], [[1, 0], [0, 1]], ["0", "1"]),
        ([0, 1], [[0, 1], [1, 0]], ["1/2", "1/2"]),
        ([2], [[1]], ["2"]),
    ],
)
def test_known_slopes(f2, weights, phi, slopes) -> None:
    assert [str(s) for s in newton_slopes(isodisplay_of(_display(f2, weights, phi)))] == slopes


def test_slopes_over_f4(f4) -> None:
    D = _display(f4, [0, 1], [[0, 1], [1, 0]])
    assert newton_slopes(isodisplay_of(D)) == [Fraction(1, 2), Fraction(1, 2)]


def test_tensor_and_dual_slopes(f2, rng) -> None:
    checked = 0
    for _ in range(10):
        D = random_display(GradedModule(f2, 4, [0, 1]), rng)
        E = random_display(GradedModule(f2, 4, [0, 0, 1]), rng)
        X, Y = isodisplay_of(D), isodisplay_of(E)
        try:
            sx, sy = newton_slopes(X), newton_slopes(Y)
            sxy = newton_slopes(isodisplay_tensor(X, Y))
            dual = newton_slopes(isodisplay_dual(X))
        except InsufficientPrecision:
            continue
        checked += 1
        assert Counter(a + b for a in sx for b in sy) == Counter(sxy)
        assert sorted(-s for s in sx) == dual
        assert sum(sx) == det_valuation(X)
    assert checked


def test_requires_a_field(z4) -> None:
    with pytest.raises(UnsupportedRing):
        isodisplay_of(_display(z4, [0], [[1]], m=2))


def test_scalar_quasi_isogenies(f2, rng) -> None:
    D = random_display(GradedModule(f2, 4, [0, 1]), rng)
    assert quasi_isogeny_check(scalar_quasi_isogeny(D, -1), D, D)
    assert is_isogeny(scalar_quasi_isogeny(D, 1), D, D)
    assert not is_isogeny(scalar_quasi_isogeny(D, -1), D, D)


def test_induced_morphism(f2) -> None:
    D = _display(f2, [0, 1], [[1, 0], [0, 1]])
    g = as_padic([[1, 0], [0, 1]], f2, 4)
    psi = morphism_from_quasi_isogeny(g, D, D)
    assert psi is not None
    assert [[x.deg for x in row] for row in psi.entries] == [[0, 1], [-1, 0]]
    # a unit entry of degree 1 is not divisible by p
    g = as_padic([[1, 1], [0, 1]], f2, 4)
    assert morphism_from_quasi_isogeny(g, D, D) is None


@pytest.mark.parametrize(
    "weights, phi",
    [
        ([0, 1], [[0, 1], [1, 0]]),
        ([0, 1], [[1, 1], [0, 1]]),
        ([0, 0, 1], [[0, 1, 0], [0, 0, 1], [1, 0, 0]]),
    ],
)
def test_slopes_survive_base_change(f2, f4, weights, phi) -> None:
    D = _display(f2, weights, phi)
    E = display_base_change(D, RingMap.canonical(f2, f4))
    assert E.phi[0][0].ring == f4
    assert newton_slopes(isodisplay_of(E)) == newton_slopes(isodisplay_of(D))
