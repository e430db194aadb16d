from fractions import Fraction

import pytest

from wittkit.common import InvalidZink, UsageError
from wittkit.displays import Display
from wittkit.matrices import mat_from_values
from wittkit.modules import GradedModule
from wittkit.zink import (
    ZINK_TABLE_FIELDS,
    ZinkDisplay,
    nilpotence_slope_table,
    random_display,
    v_sharp,
    zink_from_display,
    zink_is_nilpotent,
    zink_relation_check,
    zink_to_display,
    zink_validate,
)


@pytest.mark.parametrize("weights", [[0], [1], [0, 1], [0, 0, 1], [1, 1]])
def test_round_trip(ring, weights, rng) -> None:
    D = random_display(GradedModule(ring, 2, weights), rng)
    Z = zink_from_display(D)
    assert Z.lie_rank == weights.count(0)
    assert zink_to_display(Z) == D
    assert zink_relation_check(Z, 5, rng)


def test_only_one_displays(f2, rng) -> None:
    D = random_display(GradedModule(f2, 2, [0, 2]), rng)
    with pytest.raises(UsageError):
        zink_from_display(D)


def test_invalid_zink_data(f2) -> None:
    one = mat_from_values(f2, 2, [[1]])
    with pytest.raises(InvalidZink):
        # F_0 must be p F_1 on L_1
        zink_validate(ZinkDisplay([1], one, one))
    zero = mat_from_values(f2, 2, [[0]])
    with pytest.raises(InvalidZink):
        zink_validate(ZinkDisplay([0], zero, zero))


def test_v_sharp_relations(f4, rng) -> None:
    for weights in ([0, 1], [0, 0], [1, 1], [0, 1, 1]):
        D = random_display(GradedModule(f4, 3, weights), rng)
        V = v_sharp(zink_from_display(D), samples=5, rng=rng)
        assert len(V.matrix) == len(weights)


def test_nilpotence_cases(f4, rng) -> None:
    # L_1 = 0: V# = p Phi^-1 reduces to zero
    etale_dual = random_display(GradedModule(f4, 3, [0, 0]), rng)
    assert zink_is_nilpotent(zink_from_display(etale_dual)) == (True, 1)
    # L_0 = 0 with Phi = id: V# = id is not nilpotent
    etale = Display(GradedModule(f4, 3, [1, 1]), mat_from_values(f4, 3, [[1, 0], [0, 1]]))
    assert zink_is_nilpotent(zink_from_display(etale)) == (False, None)
    # the formal group of slope 1/2
    supersingular = Display(GradedModule(f4, 3, [0, 1]), mat_from_values(f4, 3, [[0, 1], [1, 0]]))
    nilpotent, witness = zink_is_nilpotent(zink_from_display(supersingular))
    assert nilpotent and witness == 2


def test_nilpotence_slope_table(f2, rng) -> None:
    table = nilpotence_slope_table(f2, 3, 2, 10, rng)
    assert list(table.columns) == ZINK_TABLE_FIELDS
    for _, row in table.iterrows():
        # nilpotent exactly when slope 1 does not occur
        assert bool(row["nilpotent"]) != bool(row["has_slope_one"])
        assert all(0 <= Fraction(s) <= 1 for s in row["slopes"].split())
