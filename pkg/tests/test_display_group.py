import pytest

from wittkit.common import NotInvertible, SizeCap, UnsupportedRing, UsageError
from wittkit.display_group import (
    CocharacterVector,
    DisplayGroupElement,
    banal_display,
    conjugation_identity_check,
    dg_action,
    dg_enumerate,
    dg_identity,
    dg_inverse,
    dg_membership,
    dg_morphism,
    dg_mul,
    dg_orbits,
    dg_random,
    gl_enumerate,
    gl_random,
    grading_preservation_check,
    hom_set,
    in_hom_set,
    reachability_classes,
)
from wittkit.displays import display_morphism_check
from wittkit.frame import frame_one
from wittkit.matrices import identity, mat_agrees, mat_from_values
from wittkit.rings import ring_from_name
from wittkit.witt import witt_zero

MU = CocharacterVector((0, 1))


def test_cocharacter() -> None:
    assert MU.is_minuscule and MU.n == 2
    assert MU.degree(0, 1) == 1 and MU.degree(1, 0) == -1
    assert not CocharacterVector((0, 2)).is_minuscule
    with pytest.raises(UsageError):
        CocharacterVector((1, 0))


def test_membership(f2) -> None:
    h = dg_identity(MU, f2, 2)
    assert dg_membership(h)
    wrong = DisplayGroupElement(MU, [[frame_one(f2, 2)] * 2] * 2)
    result = dg_membership(wrong)
    assert not result and result.witness == (0, 1)
    zero = witt_zero(f2, 2)
    singular = DisplayGroupElement.from_payloads(MU, [[zero, zero], [zero, zero]])
    assert dg_membership(singular).witness == "tau(h) is not invertible"


def test_enumeration_counts(f2) -> None:
    # tau(h) = [[a, v(b)], [c, d]] is invertible iff a and d are units
    assert len(dg_enumerate(MU, f2, 2)) == 64
    # GL_2(W_2(F_2)) has |GL_2(F_2)| * 2^4 elements
    assert len(dg_enumerate(CocharacterVector((0, 0)), f2, 2)) == 96
    assert len(gl_enumerate(f2, 2, 2)) == 96


def test_enumeration_does_not_depend_on_threads(f2) -> None:
    assert dg_enumerate(MU, f2, 2, threads=4) == dg_enumerate(MU, f2, 2, threads=1)


def test_enumeration_cap(f4) -> None:
    with pytest.raises(SizeCap):
        dg_enumerate(MU, f4, 3, cap=1000)


def test_enumeration_output(f2, tmp_path) -> None:
    dg_enumerate(CocharacterVector((0,)), f2, 2, output_dir=str(tmp_path))
    (result_dir,) = list(tmp_path.glob("display_group_*"))
    assert (result_dir / "results.csv").exists()
    assert (result_dir / "results.parquet").exists()
    assert (result_dir / "version.txt").exists()


@pytest.mark.parametrize("ring_name, weights", [("F2", (0, 1)), ("F4", (0, 1)), ("F2e", (1, 2)), ("F2", (0, 0, 1))])
def test_group_law(ring_name, weights, rng) -> None:
    ring, mu = ring_from_name(ring_name), CocharacterVector(weights)
    unit = dg_identity(mu, ring, 3)
    for _ in range(5):
        h, g = dg_random(mu, ring, 3, rng), dg_random(mu, ring, 3, rng)
        assert dg_membership(dg_mul(h, g))
        inv = dg_inverse(h)
        assert dg_membership(inv)
        product = dg_mul(h, inv)
        assert all(a.eq(b) for ra, rb in zip(product.entries, unit.entries) for a, b in zip(ra, rb))
        for construction in ("standard", "tensor-square", "dual"):
            assert grading_preservation_check(h, construction)


def test_grading_check_reports_entry(f2) -> None:
    wrong = DisplayGroupElement(MU, [[frame_one(f2, 2)] * 2] * 2)
    result = grading_preservation_check(wrong, "dual")
    assert not result and result.witness == (0, 1)
    with pytest.raises(UsageError):
        grading_preservation_check(dg_identity(MU, f2, 2), "symmetric")


def test_conjugation_identity(f4, rng) -> None:
    for _ in range(5):
        assert conjugation_identity_check(dg_random(MU, f4, 3, rng))


def test_action_gives_morphisms(f4, rng) -> None:
    for _ in range(5):
        U, h = gl_random(f4, 3, 2, rng), dg_random(MU, f4, 3, rng)
        D, E = banal_display(dg_action(U, h), MU), banal_display(U, MU)
        assert display_morphism_check(dg_morphism(h), D, E)
        assert in_hom_set(h, dg_action(U, h), U)


def test_action_of_identity_and_products(f2, rng) -> None:
    U = gl_random(f2, 3, 2, rng)
    assert mat_agrees(dg_action(U, dg_identity(MU, f2, 3)), U)
    h, g = dg_random(MU, f2, 3, rng), dg_random(MU, f2, 3, rng)
    assert mat_agrees(dg_action(dg_action(U, h), g), dg_action(U, dg_mul(h, g)))


def test_banal_display_needs_a_unit(f2) -> None:
    with pytest.raises(NotInvertible):
        banal_display(mat_from_values(f2, 2, [[1, 1], [1, 1]]), MU)
    with pytest.raises(UsageError):
        banal_display(mat_from_values(f2, 2, [[1]]), MU)


def test_hom_set_contains_identity(f2) -> None:
    U = identity(f2, 2, 2)
    found = hom_set(U, U, MU)
    assert dg_identity(MU, f2, 2) in found
    assert all(in_hom_set(h, U, U) for h in found)
    assert hom_set(U, U, MU, limit=1) == found[:1]


def test_hom_set_recovers_a_planted_element(f2, rng) -> None:
    elements = dg_enumerate(MU, f2, 2)
    for _ in range(3):
        U_prime, h = gl_random(f2, 2, 2, rng), dg_random(MU, f2, 2, rng)
        U = dg_action(U_prime, h)
        found = hom_set(U, U_prime, MU, elements=elements)
        assert h in found
        for g in found:
            assert in_hom_set(dg_inverse(g), U_prime, U)
        assert len(hom_set(U_prime, U, MU, elements=elements)) == len(found)


def test_hom_set_is_empty_between_classes(f2) -> None:
    elements = dg_enumerate(MU, f2, 2)
    classes = reachability_classes(gl_enumerate(f2, 2, 2), elements)
    assert len(classes) > 1
    U, U_prime = classes[0][0], classes[1][0]
    assert hom_set(U, U_prime, MU, elements=elements) == []


def test_orbits_and_isomorphism_classes(f2) -> None:
    space = gl_enumerate(f2, 2, 2)
    elements = dg_enumerate(MU, f2, 2)
    orbits = dg_orbits(space, elements)
    assert sum(len(o) for o in orbits) == len(space)
    classes = reachability_classes(space, elements)
    assert {frozenset(o) for o in orbits} == {frozenset(c) for c in classes}
    members = {U: i for i, orbit in enumerate(orbits) for U in orbit}
    for U in space[:10]:
        for h in elements[:10]:
            assert members[dg_action(U, h)] == members[U]


def test_orbits_of_gl1(f2) -> None:
    mu = CocharacterVector((0,))
    orbits = dg_orbits(gl_enumerate(f2, 2, 1), dg_enumerate(mu, f2, 2))
    assert sorted(map(len, orbits)) == [1, 1]


def test_orbits_need_char_p(z4) -> None:
    with pytest.raises(UnsupportedRing):
        dg_orbits(gl_enumerate(z4, 2, 1), [])
