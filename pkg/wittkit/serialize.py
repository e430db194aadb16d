"""Text forms of vectors, matrices and data, and line-delimited output records."""

import json
import os
import re
from typing import Any, List, Sequence, Union

from .common import UsageError
from .display_group import CocharacterVector
from .el import ELDatum, morita_reduce
from .frame import FrameElement
from .matrices import Matrix, mat_from_values, shape
from .padic import PAdicMatrix, PAdicNumber
from .rings import CoefficientRing
from .witt import WittVector

SCHEMA_VERSION = 1

P_POWER_RE = re.compile(r"^\s*(?:(-?\d+)\s*\*\s*)?p\s*\^\s*(-?\d+)\s*$")


def read_value(arg: Union[str, Any]) -> Any:
    """JSON given inline or as the path of a file holding it."""
    if not isinstance(arg, str):
        return arg
    text = arg
    if os.path.isfile(arg):
        with open(arg, "r", encoding="utf-8") as value_file:
            text = value_file.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise UsageError(f"Cannot parse {arg!r} as JSON: {err}") from err


def parse_vector(arg, ring: CoefficientRing, m: int) -> WittVector:
    """"[x_0, ..., x_(k-1)]", padded with zeros to length m."""
    value = read_value(arg)
    if isinstance(value, int):
        value = [value]
    if not isinstance(value, list) or not value:
        raise UsageError(f"A Witt vector is a non-empty list, got {arg!r}")
    if len(value) > m:
        raise UsageError(f"{arg!r} has more than m = {m} coefficients")
    return WittVector(ring, list(value) + [0] * (m - len(value)))


def parse_frame_element(arg, ring: CoefficientRing, m: int) -> FrameElement:
    """``{"deg": d, "payload": [x_0, ...]}``; the payload may be a serialized Witt vector."""
    value = read_value(arg)
    if not isinstance(value, dict) or "deg" not in value or "payload" not in value:
        raise UsageError(f"A frame element is an object with deg and payload, got {arg!r}")
    payload = value["payload"]
    if isinstance(payload, dict):
        payload = payload.get("coeffs")
    return FrameElement(int(value["deg"]), parse_vector(payload, ring, m))


def parse_matrix(arg, ring: CoefficientRing, m: int) -> Matrix:
    """Integers embed through Z -> W_m(R); lists are Witt coefficients."""
    value = read_value(arg)
    if not isinstance(value, list) or not all(isinstance(row, list) for row in value):
        raise UsageError(f"A matrix is a list of rows, got {arg!r}")
    if value and len({len(row) for row in value}) > 1:
        raise UsageError("Matrix rows have different lengths")
    try:
        return mat_from_values(ring, m, value)
    except (TypeError, ValueError) as err:
        raise UsageError(f"Invalid matrix entry in {arg!r}: {err}") from err


def parse_padic(value, ring: CoefficientRing, prec: int) -> PAdicNumber:
    """An integer, or ``"c*p^k"`` / ``"p^k"`` with k possibly negative."""
    if isinstance(value, int):
        return PAdicNumber.from_int(value, ring, prec)
    match = P_POWER_RE.match(str(value))
    if match is None:
        raise UsageError(f"Cannot read {value!r} as a p-adic number")
    unit, k = match.groups()
    return PAdicNumber.from_int(int(unit or 1), ring, prec).shift(int(k))


def parse_padic_matrix(arg, ring: CoefficientRing, prec: int) -> PAdicMatrix:
    value = read_value(arg)
    if not isinstance(value, list) or not value or not all(isinstance(row, list) for row in value):
        raise UsageError(f"A matrix is a non-empty list of rows, got {arg!r}")
    rows = [[parse_padic(x, ring, prec) for x in row] for row in value]
    if len({len(row) for row in rows}) > 1:
        raise UsageError("Matrix rows have different lengths")
    return PAdicMatrix(rows)


def parse_weights(arg: str) -> List[int]:
    try:
        return [int(w) for w in str(arg).replace(" ", "").split(",") if w != ""]
    except ValueError as err:
        raise UsageError(f"Weights are comma separated integers, got {arg!r}") from err


def parse_mu(arg: str) -> CocharacterVector:
    return CocharacterVector(sorted(parse_weights(arg)))


def parse_el_datum(arg, ring: CoefficientRing, m: int) -> ELDatum:
    """``{"factors": [{"a": 2, "s": 1}], "lambda_rank": 2, "action": [...], "mu": [0, 1]}``

    Without ``action`` the split datum is built from ``lambda0`` and
    ``lambda1``, the ranks of Lambda^0(j) and Lambda^1(j).
    """
    spec = read_value(arg)
    if not isinstance(spec, dict):
        raise UsageError("An EL datum is a JSON object")
    factors = spec.get("factors") or [{"a": 1, "s": 1}]
    if len(factors) != 1:
        raise UsageError("Give one simple factor of O_B at a time")
    a, s = int(factors[0].get("a", 1)), int(factors[0].get("s", 1))
    if "action" in spec:
        action = parse_matrix(spec["action"], ring, m)
        datum = ELDatum(ring, m, a, spec.get("mu") or [], action, s)
        if "lambda_rank" in spec and int(spec["lambda_rank"]) != datum.rank:
            raise UsageError("lambda_rank does not match the action")
        return morita_reduce(datum)
    if s != 1:
        raise UsageError("Split data are given after Morita reduction (s = 1)")
    try:
        return ELDatum.split(ring, m, a, spec["lambda0"], spec["lambda1"])
    except KeyError as err:
        raise UsageError(f"Missing key {err} in the EL datum") from err


def format_matrix(A: Sequence[Sequence]) -> str:
    if not A:
        return "[]"
    width = shape(A)[1]
    return "\n".join("  ".join(repr(A[r][c]) for c in range(width)) for r in range(len(A)))


def to_jsonable(value: Any) -> Any:
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)


def record(command: str, result: Any, version: str) -> str:
    """One line of structured output."""
    return json.dumps(
        {"schema": SCHEMA_VERSION, "version": version, "command": command, "result": to_jsonable(result)},
        sort_keys=True,
    )
