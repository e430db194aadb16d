"""Property and oracle checks run by ``wittkit selftest``."""

import itertools
import time
from collections import Counter
from typing import Callable, List, Tuple

import numpy as np
from tqdm import tqdm

from .common import CheckResult, NotAPoint, PrecisionError, get_logger
from .display_group import (
    CocharacterVector,
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
    reachability_classes,
)
from .displays import Display, display_morphism_check, display_tensor
from .el import (
    ELDatum,
    determinant_condition,
    el_banal_display,
    el_random_group_element,
    el_random_unit,
    swap_weights,
)
from .frame import frame_check, witt_frame_spec
from .isodisplays import det_valuation, isodisplay_of, isodisplay_tensor, newton_slopes
from .matrices import mat_agrees, mat_from_values, mat_truncate
from .modules import GradedModule
from .polytable import witt_poly_table
from .rings import ring_from_name
from .rz import (
    fibre_equation_holds,
    lattice_representatives,
    rz_action,
    rz_enumerate,
    rz_membership,
    validate_framing,
)
from .serialize import parse_padic_matrix
from .witt import frobenius, frobenius_defect, teichmuller, verschiebung, witt_from_int, witt_random
from .zink import random_display, v_sharp, zink_from_display, zink_is_nilpotent, zink_to_display

Criterion = Callable[[Callable[[int], int], np.random.Generator], CheckResult]


def witt_oracle(count, rng) -> CheckResult:
    name = "Witt arithmetic agrees with the polynomial oracle"
    rings = {2: ["Z8", "F2", "F4", "F2e"], 3: ["Z27", "F3", "F9", "F3e"]}
    total = 0
    for p, names in rings.items():
        for m in (2, 3):
            table = witt_poly_table(p, m)
            for ring in map(ring_from_name, names):
                for _ in range(count(500)):
                    x, y = witt_random(ring, m, rng), witt_random(ring, m, rng)
                    total += 1
                    if x + y != table.add(x, y) or x * y != table.mul(x, y):
                        return CheckResult(name, False, f"{ring.name}: {x!r}, {y!r}", total)
    return CheckResult(name, True, None, total)


def frame_axioms(count, rng) -> CheckResult:
    name = "Frame axioms of the Witt frame"
    for ring in map(ring_from_name, ["F2", "Z4", "F4", "F2e", "F3"]):
        for result in frame_check(witt_frame_spec(ring, 3), count(200), rng):
            if not result:
                return CheckResult(name, False, f"{ring.name}: {result}", result.samples)
    return CheckResult(name, True, None, count(200))


def witt_identities(count, rng) -> CheckResult:
    name = "f v = p, x v(y) = v(f(x) y), f = x^p mod p, Teichmuller multiplicativity"
    for ring in map(ring_from_name, ["F2", "Z4", "F4", "F2e", "Z27"]):
        m = 3
        p = witt_from_int(ring.p, ring, m)
        for _ in range(count(200)):
            x, y = witt_random(ring, m, rng), witt_random(ring, m, rng)
            a, b = ring.random(rng), ring.random(rng)
            checks = (
                frobenius(verschiebung(x)).agrees_with(p * x),
                (x * verschiebung(y)).agrees_with(verschiebung(frobenius(x) * y)),
                frobenius(x).agrees_with(x**ring.p + p * frobenius_defect(x)),
                teichmuller(a * b, m) == teichmuller(a, m) * teichmuller(b, m),
            )
            if not all(checks):
                return CheckResult(name, False, f"{ring.name}: x={x!r}, y={y!r}, checks={checks}")
    return CheckResult(name, True, None, count(200))


def zink_round_trip(count, rng) -> CheckResult:
    name = "Display -> Zink display -> display is the identity"
    for ring in map(ring_from_name, ["F2", "Z4", "F4", "F2e"]):
        for _ in range(count(100)):
            rank = int(rng.integers(1, 4))
            weights = sorted(int(w) for w in rng.integers(0, 2, size=rank))
            D = random_display(GradedModule(ring, 2, weights), rng)
            if zink_to_display(zink_from_display(D)) != D:
                return CheckResult(name, False, repr(D))
    return CheckResult(name, True, None, count(100))


def v_sharp_relations(count, rng) -> CheckResult:
    name = "V# relations and the two structural nilpotence cases"
    ring = ring_from_name("F4")
    for _ in range(count(50)):
        rank = int(rng.integers(1, 4))
        weights = sorted(int(w) for w in rng.integers(0, 2, size=rank))
        D = random_display(GradedModule(ring, 3, weights), rng)
        try:
            v_sharp(zink_from_display(D), samples=5, rng=rng)
        except AssertionError as err:
            return CheckResult(name, False, f"{D!r}: {err}")
    L1_zero = random_display(GradedModule(ring, 3, [0, 0]), rng)
    L0_zero = Display(GradedModule(ring, 3, [1, 1]), mat_from_values(ring, 3, [[1, 0], [0, 1]]))
    if not zink_is_nilpotent(zink_from_display(L1_zero))[0]:
        return CheckResult(name, False, "L_1 = 0 is not nilpotent")
    if zink_is_nilpotent(zink_from_display(L0_zero))[0]:
        return CheckResult(name, False, "L_0 = 0 with Phi = id is nilpotent")
    return CheckResult(name, True, None, count(50))


def display_group_coherence(count, rng) -> CheckResult:
    name = "Display group over W_2(F_2), mu = (1, 2)"
    ring, m = ring_from_name("F2"), 2
    mu = CocharacterVector((1, 2))
    members = dg_enumerate(mu, ring, m)
    pairs = list(itertools.product(members, repeat=2))
    if count(len(pairs)) < len(pairs):
        pairs = [pairs[i] for i in rng.choice(len(pairs), size=count(len(pairs)), replace=False)]
    for h, g in pairs:
        if not dg_membership(dg_mul(h, g)):
            return CheckResult(name, False, f"product of {h!r} and {g!r}")
    identity = dg_identity(mu, ring, m)
    for h in members:
        inv = dg_inverse(h)
        product = dg_mul(h, inv)
        if not dg_membership(inv) or not all(
            a.eq(b) for ra, rb in zip(product.entries, identity.entries) for a, b in zip(ra, rb)
        ):
            return CheckResult(name, False, f"inverse of {h!r}")
        for construction in ("standard", "tensor-square", "dual"):
            result = grading_preservation_check(h, construction)
            if not result:
                return CheckResult(name, False, f"{h!r}: {result}")
    space = gl_enumerate(ring, m, 2)
    orbits = dg_orbits(space, members)
    classes = reachability_classes(space, members)
    if {frozenset(o) for o in orbits} != {frozenset(c) for c in classes}:
        return CheckResult(name, False, f"{len(orbits)} orbits vs {len(classes)} isomorphism classes")
    return CheckResult(name, True, f"{len(members)} members, {len(orbits)} orbits", len(pairs))


def action_morphism_dictionary(count, rng) -> CheckResult:
    name = "Psi(h) is a morphism D_(U.h) -> D_U"
    setups = [("F2", (0, 1)), ("F4", (0, 1)), ("F2e", (1, 2)), ("F2", (0, 0, 1))]
    for ring_name, weights in setups:
        ring, mu = ring_from_name(ring_name), CocharacterVector(weights)
        for _ in range(count(50)):
            U = gl_random(ring, 3, mu.n, rng)
            h = dg_random(mu, ring, 3, rng)
            D, E = banal_display(dg_action(U, h), mu), banal_display(U, mu)
            if not display_morphism_check(dg_morphism(h), D, E):
                return CheckResult(name, False, f"U={U!r}, h={h!r}")
    return CheckResult(name, True, None, count(200))


def rz_well_defined(count, rng) -> CheckResult:
    name = "RZ action preserves g^-1 b f(g) = U mu(p)"
    samples = 0
    for ring_name in ("F2", "F4"):
        ring = ring_from_name(ring_name)
        mu = CocharacterVector((0, 1))
        framing = validate_framing(mu, parse_padic_matrix([[0, ring.p], [1, 0]], ring, 6), 4)
        points = []
        for g in lattice_representatives(framing, 1):
            try:
                points.append(rz_membership(g, framing))
            except (NotAPoint, PrecisionError):
                continue
        for _ in range(count(100)):
            pt = points[int(rng.integers(len(points)))]
            h = dg_random(mu, ring, 4, rng)
            if not conjugation_identity_check(h):
                return CheckResult(name, False, f"sigma(h) != mu(p) f(tau(h)) mu(p)^-1 for {h!r}")
            try:
                image = rz_action(pt, h, framing)
            except PrecisionError:
                continue
            samples += 1
            if not fibre_equation_holds(image, framing):
                return CheckResult(name, False, f"{pt!r} . {h!r}")
    return CheckResult(name, samples > 0, None, samples)


def isodisplay_slopes(count, rng) -> CheckResult:
    name = "Isodisplay tensor products and Newton slopes"
    ring = ring_from_name("F2")
    m = 4
    known = [
        ([0], [[1]], ["0"]),
        ([0, 1], [[1, 0], [0, 1]], ["0", "1"]),
        ([0, 1], [[0, 1], [1, 0]], ["1/2", "1/2"]),
    ]
    for weights, phi, slopes in known:
        X = isodisplay_of(Display(GradedModule(ring, m, weights), mat_from_values(ring, m, phi)))
        if [str(s) for s in newton_slopes(X)] != slopes:
            return CheckResult(name, False, f"slopes of {phi} are not {slopes}")
    samples = 0
    for _ in range(count(50)):
        D = random_display(GradedModule(ring, m, sorted(int(w) for w in rng.integers(0, 2, size=2))), rng)
        E = random_display(GradedModule(ring, m, sorted(int(w) for w in rng.integers(0, 2, size=2))), rng)
        X, Y = isodisplay_of(D), isodisplay_of(E)
        if not isodisplay_tensor(X, Y).phi.agrees_with(isodisplay_of(display_tensor(D, E)).phi):
            return CheckResult(name, False, f"tensor of {D!r} and {E!r}")
        try:
            sx, sy, sxy = newton_slopes(X), newton_slopes(Y), newton_slopes(isodisplay_tensor(X, Y))
        except PrecisionError:
            continue
        samples += 1
        if Counter(a + b for a in sx for b in sy) != Counter(sxy):
            return CheckResult(name, False, f"slopes {sx} (x) {sy} != {sxy}")
        if sum(sx) != det_valuation(X):
            return CheckResult(name, False, f"slope sum of {D!r}")
    return CheckResult(name, True, None, samples)


def gl1_rz(count, rng) -> CheckResult:
    name = "RZ space of GL_1 with b = p"
    ring = ring_from_name("F2")
    framing = validate_framing(CocharacterVector((1,)), parse_padic_matrix([[2]], ring, 4), 3)
    points = rz_enumerate(framing, window=1)
    exponents = sorted(pt.g.rows[0][0].val for pt in points)
    if exponents != [-1, 0, 1] or len({pt.orbit for pt in points}) != 3:
        return CheckResult(name, False, f"exponents {exponents}")
    for pt in points:
        again = rz_membership(pt.g, framing)
        if not mat_agrees(again.U, pt.U):
            return CheckResult(name, False, repr(pt))
    return CheckResult(name, True, None, len(points))


def el_determinant(count, rng) -> CheckResult:
    name = "Determinant condition for banal GL_(O_L)-displays"
    ring = ring_from_name("F4")
    data = [
        ELDatum.split(ring, 3, 2, [1, 0], [0, 1]),
        ELDatum.split(ring, 3, 2, [2, 1], [0, 1]),
        ELDatum.split(ring, 3, 2, [1, 1], [0, 0]),
    ]
    for i in range(count(50)):
        datum = data[i % len(data)]
        D = el_banal_display(el_random_unit(datum, rng), datum)
        if not determinant_condition(D, datum):
            return CheckResult(name, False, f"{datum!r}, {D!r}")
        h = el_random_group_element(datum, rng)
        moved = banal_display(dg_action(D.phi, h), h.mu)
        if not determinant_condition(moved, datum):
            return CheckResult(name, False, f"not invariant under {h!r}")
    for i in range(count(20)):
        datum = data[i % len(data)]
        D = el_banal_display(el_random_unit(datum, rng), datum)
        if determinant_condition(swap_weights(D), datum):
            return CheckResult(name, False, f"mismatched {datum!r} passes")
    return CheckResult(name, True, None, count(70))


def precision_honesty(count, rng) -> CheckResult:
    name = "Low precision answers agree with high precision reruns"
    ring = ring_from_name("F2")
    samples = 0
    for _ in range(count(50)):
        weights = sorted(int(w) for w in rng.integers(0, 2, size=2))
        high = random_display(GradedModule(ring, 6, weights), rng)
        low = Display(GradedModule(ring, 2, weights), mat_truncate(high.phi, 2))
        try:
            coarse = newton_slopes(isodisplay_of(low))
        except PrecisionError:
            continue
        try:
            fine = newton_slopes(isodisplay_of(high))
        except PrecisionError:
            continue
        samples += 1
        if coarse != fine:
            return CheckResult(name, False, f"{low!r}: {coarse} vs {fine}")
    return CheckResult(name, True, None, samples)


CRITERIA: List[Tuple[str, Criterion]] = [
    ("witt-oracle", witt_oracle),
    ("frame-axioms", frame_axioms),
    ("witt-identities", witt_identities),
    ("zink-round-trip", zink_round_trip),
    ("v-sharp", v_sharp_relations),
    ("display-group", display_group_coherence),
    ("action-morphism", action_morphism_dictionary),
    ("rz-action", rz_well_defined),
    ("isodisplay-slopes", isodisplay_slopes),
    ("gl1-rz", gl1_rz),
    ("el-determinant", el_determinant),
    ("precision-honesty", precision_honesty),
]


def run_acceptance(quick: bool = False, seed: int = 0, quiet: bool = False) -> List[CheckResult]:
    logger = get_logger("wittkit_selftest")

    def count(full: int) -> int:
        return max(3, full // 20) if quick else full

    results = []
    for key, criterion in tqdm(CRITERIA, desc="Acceptance", disable=quiet):
        rng = np.random.default_rng(seed)
        start = time.perf_counter()
        result = criterion(count, rng)
        logger.debug("%s took %.2fs", key, time.perf_counter() - start)
        if not result:
            logger.warning("%s failed: %s", key, result)
        results.append(result)
    return results
