import json

import pytest

from wittkit.cli import build_parser, main
from wittkit.displays import display_validate
from wittkit.frame import FrameElement, frame_mul, frame_t, frame_v
from wittkit.matrices import mat_from_values
from wittkit.modules import GradedModule
from wittkit.rings import CoefficientRing
from wittkit.serialize import format_matrix
from wittkit.witt import witt_one
from wittkit.zink import zink_from_display, zink_to_display

EL_DATUM = '{"factors": [{"a": 2}], "lambda0": [1, 1], "lambda1": [0, 0]}'


@pytest.fixture(autouse=True)
def restore_limits(monkeypatch):
    monkeypatch.setattr(FrameElement, "DEGREE_WINDOW", FrameElement.DEGREE_WINDOW)
    monkeypatch.setattr(CoefficientRing, "DEFAULT_SIZE_CAP", CoefficientRing.DEFAULT_SIZE_CAP)


def test_witt_add(capsys) -> None:
    assert main(["--ring", "Z4", "--m", "2", "witt", "add", "[1,0]", "[1,0]"]) == 0
    assert capsys.readouterr().out == "[2,3]\n"


def test_witt_ghost(capsys) -> None:
    assert main(["--ring", "Z4", "--m", "2", "witt", "ghost", "[1,1]"]) == 0
    assert capsys.readouterr().out.startswith("[")


def test_records_output(capsys) -> None:
    assert main(["--format", "records", "--ring", "Z4", "--m", "2", "witt", "mul", "[1,1]", "[3]"]) == 0
    (line,) = capsys.readouterr().out.splitlines()
    data = json.loads(line)
    assert data["schema"] == 1
    assert data["command"] == "witt mul"
    assert data["result"]["len"] == 2
    assert "version" in data


def test_config_file(tmp_path, capsys) -> None:
    path = tmp_path / "wittkit.toml"
    path.write_text('ring = "Z4"\nm = 2\n')
    assert main(["--config", str(path), "witt", "add", "[1,0]", "[1,0]"]) == 0
    assert capsys.readouterr().out == "[2,3]\n"


@pytest.mark.parametrize(
    "argv, code, error",
    [
        (["--m", "1", "witt", "add", "[1]", "[1]"], 2, "UsageError"),
        (["--ring", "Z6", "witt", "add", "[1]", "[1]"], 2, "UsageError"),
        (["--ring", "F2", "--m", "2", "witt", "add", "[1]"], 2, "UsageError"),
        (["--ring", "F2", "--m", "2", "witt", "inv", "[0,1]"], 5, "NonUnit"),
        (["--ring", "F2", "--m", "2", "--size-cap", "10", "dg", "enumerate", "--mu", "0,1"], 4, "SizeCap"),
    ],
)
def test_exit_codes(argv, code, error, capsys) -> None:
    assert main(argv) == code
    assert capsys.readouterr().err.startswith(error)


def test_argument_errors() -> None:
    with pytest.raises(SystemExit) as info:
        main(["nosuch"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        build_parser().parse_args(["rz", "validate"])


def test_frame_check(capsys) -> None:
    assert main(["--ring", "F2", "--m", "3", "--seed", "4", "frame", "check", "--samples", "5"]) == 0
    assert capsys.readouterr().out.rstrip().endswith("all axioms pass")


def test_display_commands(capsys) -> None:
    base = ["--ring", "F4", "--m", "3"]
    swap = ["--weights", "0,1", "--phi", "[[0,1],[1,0]]"]
    assert main(base + ["display", "validate"] + swap) == 0
    assert "Hodge ranks" in capsys.readouterr().out
    assert main(["--ring", "F2", "--m", "4", "iso", "slopes"] + swap) == 0
    assert capsys.readouterr().out == "1/2 1/2\n"
    assert main(base + ["zink", "nilpotent"] + swap) == 0
    assert capsys.readouterr().out == "nilpotent after 2 steps\n"
    second = ["--weights2", "0,1", "--phi2", "[[0,1],[1,0]]", "--psi", "[[1,0],[0,1]]"]
    assert main(base + ["display", "morphcheck"] + swap + second) == 0
    assert capsys.readouterr().out == "morphism\n"


def test_display_group_commands(tmp_path, capsys) -> None:
    base = ["--ring", "F2", "--m", "2", "--quiet"]
    assert main(base + ["dg", "member", "--mu", "0,1", "--h", "[[1,0],[0,1]]"]) == 0
    capsys.readouterr()
    assert main(base + ["--output-dir", str(tmp_path), "dg", "enumerate", "--mu", "0,1"]) == 0
    assert capsys.readouterr().out == "64 elements\n"
    (result_dir,) = list(tmp_path.glob("display_group_*"))
    assert (result_dir / "results.csv").is_file()


def test_rz_enumerate(capsys) -> None:
    argv = ["--ring", "F2", "--m", "3", "--quiet", "rz", "enumerate", "--mu", "1", "--b", "[[2]]"]
    assert main(argv) == 0
    assert capsys.readouterr().out == "3 points in 3 orbits\n"


def test_rz_not_in_double_coset(capsys) -> None:
    argv = ["--ring", "F2", "--m", "3", "rz", "validate", "--mu", "0,1", "--b", "[[1,0],[0,1]]"]
    assert main(argv) == 5
    assert capsys.readouterr().err.startswith("NotInDoubleCoset")


def test_el_commands(capsys) -> None:
    base = ["--ring", "F4", "--m", "3", "el"]
    assert main(base + ["split", "--datum", EL_DATUM]) == 0
    assert capsys.readouterr().out == "ranks [1, 1]\n"
    assert main(base + ["det", "--datum", EL_DATUM, "--weights", "0,0", "--phi", "[[0,1],[1,0]]"]) == 0
    assert capsys.readouterr().out.rstrip().endswith("True")


def test_global_flags_after_the_subcommand(capsys) -> None:
    assert main(["witt", "add", "--ring", "Z4", "--m", "2", "[1,0]", "[1,0]"]) == 0
    assert capsys.readouterr().out == "[2,3]\n"
    assert main(["--ring", "F2", "witt", "versch", "--m", "3", "[1,1]"]) == 0
    assert capsys.readouterr().out == "[0,1,1]\n"
    assert main(["frame", "check", "--ring", "F2", "--m", "3", "--samples", "5"]) == 0
    assert capsys.readouterr().out.rstrip().endswith("all axioms pass")


def test_frame_operations(f2, capsys) -> None:
    t = '{"deg": -1, "payload": [1]}'
    base = ["frame", "--ring", "F2", "--m", "3"]
    assert main(base + ["sigma", t]) == 0
    assert capsys.readouterr().out == "[0,1,0]\n"
    assert main(base + ["tau", t]) == 0
    assert capsys.readouterr().out == "[1,0,0]\n"
    v_one = '{"deg": 1, "payload": {"len": 3, "coeffs": [1, 0, 0]}}'
    assert main(base + ["mul", t, v_one]) == 0
    expected = frame_mul(frame_t(f2, 3), frame_v(witt_one(f2, 3)))
    assert capsys.readouterr().out == f"{expected!r}\n"
    assert main(base + ["mul", t]) == 2
    assert capsys.readouterr().err.startswith("UsageError")


def test_zink_to_display(f4, capsys) -> None:
    swap = ["--weights", "0,1", "--phi", "[[0,1],[1,0]]"]
    base = ["zink", "to-display", "--ring", "F4", "--m", "3"]
    D = display_validate(GradedModule(f4, 3, [0, 1]), mat_from_values(f4, 3, [[0, 1], [1, 0]]))
    Z = zink_from_display(D)
    expected = format_matrix(zink_to_display(Z).phi) + "\n"
    assert main(base + swap) == 0
    assert capsys.readouterr().out == expected
    F0 = json.dumps([[x.to_json()["coeffs"] for x in row] for row in Z.F0])
    F1 = json.dumps([[x.to_json()["coeffs"] for x in row] for row in Z.F1])
    assert main(base + ["--split", "0,1", "--F0", F0, "--F1", F1]) == 0
    assert capsys.readouterr().out == expected


def test_iso_commands(capsys) -> None:
    base = ["iso", "--ring", "F2", "--m", "4"]
    swap = ["--weights", "0,1", "--phi", "[[0,1],[1,0]]"]
    assert main(base[:1] + ["of-display"] + base[1:] + swap) == 0
    rows = capsys.readouterr().out.splitlines()
    assert len(rows) == 2 and "p^1*" in rows[0]
    second = ["--weights2", "0,1", "--phi2", "[[0,1],[1,0]]", "--g", "[[1,0],[0,1]]"]
    assert main(base[:1] + ["qisog-check"] + base[1:] + swap + second) == 0
    assert "isogeny" in capsys.readouterr().out


def test_rz_field_flag(capsys) -> None:
    argv = ["rz", "enumerate", "--mu", "1", "--b", "[[2]]", "--field", "F2", "--m", "3", "--val-window", "1", "--quiet"]
    assert main(argv) == 0
    assert capsys.readouterr().out == "3 points in 3 orbits\n"
