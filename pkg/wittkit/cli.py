import logging
import os
import sys
from argparse import SUPPRESS, ArgumentParser, Namespace
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

import wittkit

from .acceptance import run_acceptance
from .common import UsageError, WittkitException, get_logger, write_table
from .config import FORMATS, SessionConfig, build_config, load_config_file
from .display_group import (
    banal_display,
    dg_action,
    dg_enumerate,
    dg_membership,
    dg_orbits,
    gl_enumerate,
    hom_set,
    reachability_classes,
    DisplayGroupElement,
)
from .displays import (
    display_dual,
    display_hodge_ranks,
    display_morphism_check,
    display_tensor,
    display_validate,
)
from .el import component_split, determinant_condition, el_group_membership, lie_ranks
from .frame import frame_check, frame_mul, frame_sigma, frame_tau, witt_frame_spec
from .isodisplays import is_isogeny, isodisplay_of, newton_slopes, quasi_isogeny_check
from .modules import GradedModule, GradedMorphism, theta
from .rz import rz_action, rz_enumerate, rz_membership, rz_orbits, validate_framing
from .serialize import (
    format_matrix,
    parse_el_datum,
    parse_frame_element,
    parse_matrix,
    parse_mu,
    parse_padic_matrix,
    parse_vector,
    parse_weights,
    read_value,
    record,
)
from .witt import (
    frobenius,
    ghost,
    teichmuller,
    verschiebung,
    witt_add,
    witt_inv,
    witt_mul,
    witt_sub,
    witt_val,
)
from .zink import (
    ZINK_TABLE_FIELDS,
    ZinkDisplay,
    nilpotence_slope_table,
    v_sharp,
    zink_from_display,
    zink_is_nilpotent,
    zink_to_display,
)

# Each handler returns (structured result, text rendering, exit code)
Outcome = Tuple[Any, str, int]


def _display(args: Namespace, config: SessionConfig, suffix: str = ""):
    weights = parse_weights(getattr(args, "weights" + suffix))
    phi = parse_matrix(getattr(args, "phi" + suffix), config.ring, config.m)
    return display_validate(GradedModule(config.ring, config.m, weights), phi)


def _checks(results) -> Outcome:
    text = "\n".join(str(r) for r in results)
    passed = all(results)
    if passed:
        text += "\nall axioms pass"
    return [{"name": r.name, "passed": r.passed, "witness": r.witness} for r in results], text, 0 if passed else 1


def run_witt(args: Namespace, config: SessionConfig) -> Outcome:
    ring, m = config.ring, config.m
    if args.op == "teich":
        result = teichmuller(ring.element(read_value(args.x)), m)
        return result, repr(result), 0
    x = parse_vector(args.x, ring, m)
    if args.op in ("add", "sub", "mul"):
        if args.y is None:
            raise UsageError(f"witt {args.op} needs two operands")
        y = parse_vector(args.y, ring, m)
        result = {"add": witt_add, "sub": witt_sub, "mul": witt_mul}[args.op](x, y)
    elif args.op == "frob":
        result = frobenius(x)
    elif args.op == "versch":
        result = verschiebung(x)
    elif args.op == "inv":
        result = witt_inv(x)
    elif args.op == "val":
        v = witt_val(x)
        result = {"value": v.value, "exact": v.exact}
        return result, str(v.value) if v.exact else f">= {v.value}", 0
    else:
        result = [w if isinstance(w, int) else list(w) for w in ghost(x)]
        return result, str(result), 0
    return result, repr(result), 0


def run_frame(args: Namespace, config: SessionConfig) -> Outcome:
    if args.op == "check":
        rng = np.random.default_rng(config.seed)
        return _checks(frame_check(witt_frame_spec(config.ring, config.m), args.samples, rng))
    if args.x is None:
        raise UsageError(f"frame {args.op} needs an operand")
    a = parse_frame_element(args.x, config.ring, config.m)
    if args.op == "sigma":
        result = frame_sigma(a)
    elif args.op == "tau":
        result = frame_tau(a)
    else:
        if args.y is None:
            raise UsageError("frame mul needs two operands")
        result = frame_mul(a, parse_frame_element(args.y, config.ring, config.m))
    return result, repr(result), 0


def run_display(args: Namespace, config: SessionConfig) -> Outcome:
    D = _display(args, config)
    if args.op == "validate":
        text = (
            f"type {list(D.type)}, depth {D.depth}, altitude {D.altitude}, "
            f"Hodge ranks {display_hodge_ranks(D)}"
        )
        return D, text, 0
    if args.op == "dual":
        E = display_dual(D)
        return E, format_matrix(E.phi), 0
    if args.op == "theta":
        th = theta(D.module, args.n)
        return {"slots": list(th.image), "isomorphism": th.is_isomorphism}, " ".join(th.image), 0
    E = _display(args, config, "2")
    if args.op == "tensor":
        T = display_tensor(D, E)
        return T, format_matrix(T.phi), 0
    psi = GradedMorphism.from_payloads(D.module, E.module, parse_matrix(args.psi, config.ring, config.m))
    ok = display_morphism_check(psi, D, E)
    return ok, "morphism" if ok else "not a morphism", 0 if ok else 1


def run_zink(args: Namespace, config: SessionConfig) -> Outcome:
    if args.op == "table":
        frame = nilpotence_slope_table(
            config.ring, config.m, args.rank, args.samples, np.random.default_rng(config.seed)
        )
        rows = frame.to_dict("records")
        if config.output_dir is not None:
            os.makedirs(config.output_dir, exist_ok=True)
            write_table(rows, ZINK_TABLE_FIELDS, os.path.join(config.output_dir, "zink_table.csv"))
        return rows, frame.to_string(index=False), 0
    if args.op == "to-display":
        if args.F0 is None or args.F1 is None:
            Z = zink_from_display(_display(args, config))
        else:
            Z = ZinkDisplay(
                parse_weights(args.split),
                parse_matrix(args.F0, config.ring, config.m),
                parse_matrix(args.F1, config.ring, config.m),
                config.ring,
                config.m,
            )
        D = zink_to_display(Z)
        return D, format_matrix(D.phi), 0
    Z = zink_from_display(_display(args, config))
    if args.op == "from-display":
        return Z, f"F0:\n{format_matrix(Z.F0)}\nF1:\n{format_matrix(Z.F1)}", 0
    if args.op == "vsharp":
        V = v_sharp(Z, rng=np.random.default_rng(config.seed))
        return V.matrix, format_matrix(V.matrix), 0
    nilpotent, witness = zink_is_nilpotent(Z)
    text = f"nilpotent after {witness} steps" if nilpotent else "not nilpotent"
    return {"nilpotent": nilpotent, "witness": witness}, text, 0


def run_iso(args: Namespace, config: SessionConfig) -> Outcome:
    D = _display(args, config)
    if args.op == "of-display":
        X = isodisplay_of(D)
        return X, format_matrix(X.phi.rows), 0
    if args.op == "slopes":
        slopes = newton_slopes(isodisplay_of(D))
        return [str(s) for s in slopes], " ".join(str(s) for s in slopes), 0
    E = _display(args, config, "2")
    g = parse_padic_matrix(args.g, config.ring, config.m)
    result = {"quasi_isogeny": quasi_isogeny_check(g, D, E), "isogeny": is_isogeny(g, D, E)}
    return result, ", ".join(f"{k}: {v}" for k, v in result.items()), 0


def run_dg(args: Namespace, config: SessionConfig) -> Outcome:
    ring, m, mu = config.ring, config.m, parse_mu(args.mu)
    if args.op == "member":
        h = DisplayGroupElement.from_payloads(mu, parse_matrix(args.h, ring, m))
        result = dg_membership(h)
        return result.passed, str(result), 0 if result else 1
    if args.op == "action":
        h = DisplayGroupElement.from_payloads(mu, parse_matrix(args.h, ring, m))
        image = dg_action(parse_matrix(args.U, ring, m), h)
        return image, format_matrix(image), 0
    elements = dg_enumerate(
        mu, ring, m, config.size_cap, config.threads, config.output_dir, config.quiet
    )
    if args.op == "enumerate":
        return elements, f"{len(elements)} elements", 0
    if args.op == "homset":
        U = parse_matrix(args.U, ring, m)
        banal_display(U, mu)
        found = hom_set(U, parse_matrix(args.U2, ring, m), mu, elements=elements)
        return found, f"{len(found)} morphisms", 0
    space = gl_enumerate(ring, m, mu.n, config.size_cap)
    orbits = dg_orbits(space, elements)
    classes = reachability_classes(space, elements)
    result = {"orbits": len(orbits), "classes": len(classes), "sizes": [len(o) for o in orbits]}
    return result, f"{len(orbits)} orbits, {len(classes)} isomorphism classes", 0


def run_rz(args: Namespace, config: SessionConfig) -> Outcome:
    mu = parse_mu(args.mu)
    prec = config.m + 2 * args.val_window
    framing = validate_framing(mu, parse_padic_matrix(args.b, config.ring, prec), config.m)
    if args.op == "validate":
        return framing, f"u =\n{format_matrix(framing.u)}", 0
    if args.op == "enumerate":
        points = rz_enumerate(
            framing, args.val_window, config.threads, config.output_dir, config.quiet
        )
        return points, f"{len(points)} points in {len(rz_orbits(points))} orbits", 0
    pt = rz_membership(parse_padic_matrix(args.g, config.ring, prec), framing)
    if args.op == "orbit":
        h = DisplayGroupElement.from_payloads(mu, parse_matrix(args.h, config.ring, config.m))
        pt = rz_action(pt, h, framing)
    return pt, f"U =\n{format_matrix(pt.U)}", 0


def run_el(args: Namespace, config: SessionConfig) -> Outcome:
    datum = parse_el_datum(args.datum, config.ring, config.m)
    if args.op == "member":
        ok = el_group_membership(parse_matrix(args.h, config.ring, config.m), datum)
        return ok, str(ok), 0 if ok else 1
    if args.op == "split":
        split = component_split(datum.action, datum.a)
        return split, f"ranks {split.ranks}", 0
    D = _display(args, config)
    ok = determinant_condition(D, datum)
    text = f"Lie ranks {lie_ranks(D, datum)}, Lambda^0 ranks {datum.lambda0_ranks}: {ok}"
    return ok, text, 0 if ok else 1


def run_selftest(args: Namespace, config: SessionConfig) -> Outcome:
    results = run_acceptance(args.quick, config.seed, config.quiet)
    return _checks(results)


SUBCOMMANDS: Dict[str, Callable[[Namespace, SessionConfig], Outcome]] = {
    "witt": run_witt,
    "frame": run_frame,
    "display": run_display,
    "zink": run_zink,
    "iso": run_iso,
    "dg": run_dg,
    "rz": run_rz,
    "el": run_el,
    "selftest": run_selftest,
}


def _add_display_args(parser: ArgumentParser, second: bool = False):
    parser.add_argument("--weights", default="0", help="Comma separated basis weights of L")
    parser.add_argument("--phi", default="[[1]]", help="Matrix of Phi (JSON or file)")
    if second:
        parser.add_argument("--weights2", default="0", help="Weights of the second display")
        parser.add_argument("--phi2", default="[[1]]", help="Phi of the second display")


def _global_flags() -> ArgumentParser:
    # shared by the top level and every subcommand; SUPPRESS keeps a flag
    # given before the subcommand from being reset by the subparser
    common = ArgumentParser(add_help=False)
    common.add_argument("--config", default=SUPPRESS, help="TOML file with ring, m, degree_window, size_cap, seed")
    common.add_argument("--ring", default=SUPPRESS, help="Coefficient ring, e.g. Z4, F2, F4, F2e")
    common.add_argument("--m", type=int, default=SUPPRESS, help="Truncation length of Witt vectors")
    common.add_argument("--format", choices=FORMATS, default=SUPPRESS, help="Text or line-delimited JSON records")
    common.add_argument("--threads", type=int, default=SUPPRESS, help="Worker threads for enumerations")
    common.add_argument("--seed", type=int, default=SUPPRESS, help="Seed of sampled checks")
    common.add_argument("--degree-window", type=int, default=SUPPRESS, help="Largest |degree| of frame elements")
    common.add_argument("--size-cap", type=int, default=SUPPRESS, help="Largest enumeration size")
    common.add_argument("--output-dir", default=SUPPRESS, help="Directory for CSV/parquet results of enumerations")
    common.add_argument("--quiet", action="store_true", default=SUPPRESS, help="No progress bars")
    return common


def build_parser() -> ArgumentParser:
    common = _global_flags()
    parser = ArgumentParser(
        description="wittkit computes with Witt vectors, displays and their moduli over tiny rings.",
        parents=[common],
    )

    subparsers = parser.add_subparsers(dest="subcommand")
    subparsers.required = True

    witt_parser = subparsers.add_parser("witt", help="Witt vector arithmetic", parents=[common])
    witt_parser.add_argument(
        "op", choices=["add", "sub", "mul", "frob", "versch", "teich", "inv", "val", "ghost"]
    )
    witt_parser.add_argument("x", help="Witt vector as a coefficient list")
    witt_parser.add_argument("y", nargs="?", help="Second operand")

    frame_parser = subparsers.add_parser("frame", help="The Witt frame and its axioms", parents=[common])
    frame_parser.add_argument("op", choices=["check", "mul", "sigma", "tau"])
    frame_parser.add_argument("x", nargs="?", help='Frame element {"deg": d, "payload": [...]}')
    frame_parser.add_argument("y", nargs="?", help="Second operand of mul")
    frame_parser.add_argument("--samples", type=int, default=20)

    display_parser = subparsers.add_parser("display", help="Displays in standard form", parents=[common])
    display_parser.add_argument("op", choices=["validate", "tensor", "dual", "morphcheck", "theta"])
    _add_display_args(display_parser, second=True)
    display_parser.add_argument("--psi", default="[[1]]", help="Payload matrix of a morphism")
    display_parser.add_argument("--n", type=int, default=0)

    zink_parser = subparsers.add_parser("zink", help="Zink displays and nilpotence", parents=[common])
    zink_parser.add_argument("op", choices=["from-display", "to-display", "vsharp", "nilpotent", "table"])
    _add_display_args(zink_parser)
    zink_parser.add_argument("--split", default="", help="Parts of P_0 = T + L, 0 for T and 1 for L")
    zink_parser.add_argument("--F0", default=None, help="Matrix of F_0")
    zink_parser.add_argument("--F1", default=None, help="Matrix of F_1")
    zink_parser.add_argument("--rank", type=int, default=2)
    zink_parser.add_argument("--samples", type=int, default=20)

    iso_parser = subparsers.add_parser("iso", help="Isodisplays and quasi-isogenies", parents=[common])
    iso_parser.add_argument("op", choices=["of-display", "slopes", "qisog-check"])
    _add_display_args(iso_parser, second=True)
    iso_parser.add_argument("--g", default="[[1]]", help="Quasi-isogeny, entries int or c*p^k")

    dg_parser = subparsers.add_parser("dg", help="The display group", parents=[common])
    dg_parser.add_argument("op", choices=["member", "action", "enumerate", "homset", "orbits"])
    dg_parser.add_argument("--mu", default="0,1")
    dg_parser.add_argument("--h", default=None, help="Payload matrix")
    dg_parser.add_argument("--U", default=None)
    dg_parser.add_argument("--U2", default=None)

    rz_parser = subparsers.add_parser("rz", help="Rapoport-Zink points", parents=[common])
    rz_parser.add_argument("op", choices=["validate", "member", "orbit", "enumerate"])
    rz_parser.add_argument("--field", dest="ring", default=SUPPRESS, help="The perfect field k, same as --ring")
    rz_parser.add_argument("--mu", default="0,1")
    rz_parser.add_argument("--b", required=True, help="Matrix of b (JSON or file)")
    rz_parser.add_argument("--g", default=None)
    rz_parser.add_argument("--h", default=None)
    rz_parser.add_argument("--val-window", type=int, default=1)

    el_parser = subparsers.add_parser("el", help="Unramified EL data", parents=[common])
    el_parser.add_argument("op", choices=["member", "split", "det"])
    el_parser.add_argument("--datum", required=True, help="EL datum (JSON or file)")
    el_parser.add_argument("--h", default=None)
    _add_display_args(el_parser)

    selftest_parser = subparsers.add_parser("selftest", help="Run the acceptance suite", parents=[common])
    selftest_parser.add_argument("--quick", action="store_true")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    flags = vars(args)
    quiet = flags.get("quiet", False)
    logger = get_logger("wittkit", level=logging.WARNING if quiet else logging.INFO)
    try:
        file_values = load_config_file(flags["config"]) if flags.get("config") else None
        config = build_config(
            file_values,
            ring=flags.get("ring"),
            m=flags.get("m"),
            format=flags.get("format"),
            threads=flags.get("threads"),
            seed=flags.get("seed"),
            degree_window=flags.get("degree_window"),
            size_cap=flags.get("size_cap"),
            output_dir=flags.get("output_dir"),
            quiet=quiet or None,
        )
        config.apply()
        logger.debug("Running %s with %s", args.subcommand, config)
        result, text, code = SUBCOMMANDS[args.subcommand](args, config)
    except WittkitException as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return err.EXIT_CODE

    if config.output_format == "records":
        command = " ".join([args.subcommand] + ([args.op] if hasattr(args, "op") else []))
        if isinstance(result, list):
            for item in result:
                print(record(command, item, wittkit.__version__))
        else:
            print(record(command, result, wittkit.__version__))
    else:
        print(text)
    return code
