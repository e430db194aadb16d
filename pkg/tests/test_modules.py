import pytest

from wittkit.common import DegreeViolation, UsageError
from wittkit.frame import FrameElement, frame_one
from wittkit.modules import (
    GradedModule,
    GradedMorphism,
    mod_altitude,
    mod_depth,
    mod_dual,
    mod_tensor,
    mod_type,
    morph_check,
    morph_compose,
    morph_sigma,
    morph_tau,
    nu_reduce,
    theta,
)
from wittkit.witt import witt_one, witt_random


def test_type_depth_altitude(f2) -> None:
    M = GradedModule(f2, 2, [1, 0, 1])
    assert mod_type(M) == (0, 1, 1)
    assert nu_reduce(M) == {0: 1, 1: 2}
    assert (mod_depth(M), mod_altitude(M)) == (0, 1)
    assert M.block(1) == [0, 2]
    empty = GradedModule(f2, 2, [])
    assert empty.depth is None and empty.altitude is None


def test_from_ranks(f2) -> None:
    M = GradedModule.from_ranks(f2, 2, {1: 1, 0: 2})
    assert M.basis_weights == (0, 0, 1)
    with pytest.raises(UsageError):
        GradedModule.from_ranks(f2, 2, {0: -1})


def test_weights_outside_window(f2) -> None:
    with pytest.raises(UsageError):
        GradedModule(f2, 2, [FrameElement.DEGREE_WINDOW + 1])


def test_tensor_and_dual(f2) -> None:
    M, N = GradedModule(f2, 3, [0, 1]), GradedModule(f2, 2, [-1, 2])
    T = mod_tensor(M, N)
    assert T.basis_weights == (-1, 2, 0, 3)
    assert T.m == 2
    assert mod_dual(M).basis_weights == (0, -1)


def test_morphism_degrees(f4, rng) -> None:
    M = GradedModule(f4, 2, [0, 1])
    payloads = [[witt_random(f4, 2, rng) for _ in range(2)] for _ in range(2)]
    h = GradedMorphism.from_payloads(M, M, payloads)
    assert [[x.deg for x in row] for row in h.entries] == [[0, 1], [-1, 0]]
    assert morph_check(h)
    bad = GradedMorphism(M, M, [[frame_one(f4, 2)] * 2] * 2)
    with pytest.raises(DegreeViolation) as err:
        morph_check(bad)
    assert err.value.entry == (0, 1)


def test_identity_composition(f4, rng) -> None:
    M = GradedModule(f4, 2, [0, 1, 1])
    payloads = [[witt_random(f4, 2, rng) for _ in range(3)] for _ in range(3)]
    h = GradedMorphism.from_payloads(M, M, payloads)
    composed = morph_compose(GradedMorphism.identity(M), h)
    assert morph_tau(composed) == morph_tau(h)
    assert morph_sigma(composed) == morph_sigma(h)


def test_theta(f2) -> None:
    M = GradedModule(f2, 2, [0, 1])
    assert theta(M, 0).image == ("W", "W")
    assert theta(M, 0).is_isomorphism
    assert theta(M, 1).image == ("I_R", "W")
    assert theta(GradedModule(f2, 2, [0]), 3).image == ("p^2 I_R",)
    with pytest.raises(DegreeViolation):
        theta(M, 1).apply([frame_one(f2, 2), frame_one(f2, 2)])
    assert theta(M, 0).apply([frame_one(f2, 2), FrameElement(-1, witt_one(f2, 2))]) == [
        witt_one(f2, 2),
        witt_one(f2, 2),
    ]
