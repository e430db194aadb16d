import pytest

from wittkit.common import (
    NotAPoint,
    NotInDoubleCoset,
    NotInvertible,
    NotMinuscule,
    PrecisionError,
    UsageError,
)
from wittkit.display_group import CocharacterVector, dg_random
from wittkit.matrices import mat_agrees, mat_from_values
from wittkit.rz import (
    fibre_equation_holds,
    framing_object,
    is_rz_point,
    lattice_representatives,
    rz_action,
    rz_enumerate,
    rz_membership,
    rz_orbits,
    same_orbit,
    tau_preimage,
    validate_framing,
)
from wittkit.serialize import parse_padic_matrix

MU = CocharacterVector((0, 1))


@pytest.fixture
def framing(f2):
    return validate_framing(MU, parse_padic_matrix([[0, 2], [1, 0]], f2, 6), 4)


def test_framing(framing, f2) -> None:
    assert mat_agrees(framing.u, mat_from_values(f2, 4, [[0, 1], [1, 0]]))
    assert framing_object(framing).type == (0, 1)


def test_framing_errors(f2) -> None:
    with pytest.raises(NotInDoubleCoset) as err:
        validate_framing(MU, parse_padic_matrix([[1, 0], [0, 1]], f2, 6), 4)
    assert err.value.divisors == [0, 0]
    with pytest.raises(NotMinuscule):
        validate_framing(CocharacterVector((0, 2)), parse_padic_matrix([[1, 0], [0, 4]], f2, 6), 4)
    with pytest.raises(NotInvertible):
        validate_framing(MU, parse_padic_matrix([[2, 0], [0, 1]], f2, 6), 4)
    with pytest.raises(UsageError):
        validate_framing(MU, parse_padic_matrix([[2]], f2, 6), 4)


def test_membership(framing, f2) -> None:
    pt = rz_membership(parse_padic_matrix([[1, 0], [0, 1]], f2, 6), framing)
    assert mat_agrees(pt.U, framing.u)
    assert fibre_equation_holds(pt, framing)
    off = parse_padic_matrix([[1, 0], [0, "p^-1"]], f2, 6)
    assert not is_rz_point(off, framing)
    with pytest.raises(NotAPoint):
        rz_membership(off, framing)


def test_action_stays_in_the_fibre(framing, f2, rng) -> None:
    pt = rz_membership(parse_padic_matrix([[1, 0], [0, 1]], f2, 6), framing)
    moved = 0
    for _ in range(10):
        h = dg_random(MU, f2, 4, rng)
        try:
            image = rz_action(pt, h, framing)
            related = same_orbit(pt, image, framing)
        except PrecisionError:
            continue
        moved += 1
        assert fibre_equation_holds(image, framing)
        assert related
    assert moved


def test_tau_preimage(f2) -> None:
    assert tau_preimage(parse_padic_matrix([[1, 0], [0, "p^-1"]], f2, 6), MU, 4) is None
    # a unit above the diagonal is not in the image of tau
    assert tau_preimage(parse_padic_matrix([[1, 1], [0, 1]], f2, 6), MU, 4) is None
    h = tau_preimage(parse_padic_matrix([[1, 2], [0, 1]], f2, 6), MU, 4)
    assert h is not None and h.entries[0][1].deg == 1


def test_lattice_representatives(framing, f2) -> None:
    assert len(lattice_representatives(framing, 1)) == 63
    scalar = validate_framing(CocharacterVector((0, 0)), parse_padic_matrix([[1, 0], [0, 1]], f2, 6), 4)
    assert len(lattice_representatives(scalar, 1)) == 21


def test_gl1_points(f2) -> None:
    framing = validate_framing(CocharacterVector((1,)), parse_padic_matrix([[2]], f2, 4), 3)
    points = rz_enumerate(framing, window=1)
    assert sorted(pt.g.rows[0][0].val for pt in points) == [-1, 0, 1]
    assert len(rz_orbits(points)) == 3


def test_enumeration_labels_orbits(framing) -> None:
    points = rz_enumerate(framing, window=1)
    assert points
    for pt in points:
        assert fibre_equation_holds(pt, framing)
    for orbit in rz_orbits(points):
        first = orbit[0]
        assert all(same_orbit(first, other, framing) for other in orbit[1:])
