import pytest

from wittkit.common import UsageError
from wittkit.config import SessionConfig, build_config, load_config_file, parse_ring
from wittkit.frame import FrameElement
from wittkit.rings import CoefficientRing, ring_from_name


def test_defaults() -> None:
    config = build_config()
    assert config.ring == ring_from_name("F2")
    assert (config.m, config.degree_window, config.size_cap) == (4, 8, 100000)
    assert config.output_format == "text" and config.threads == 1


def test_flags_override_file_values() -> None:
    config = build_config({"ring": "Z4", "m": 3, "format": "records"}, m=5, threads=None)
    assert config.ring == ring_from_name("Z4")
    assert config.m == 5
    assert config.output_format == "records"
    assert config.threads == 1


@pytest.mark.parametrize(
    "values",
    [{"colour": "red"}, {"m": 1}, {"size_cap": 0}, {"format": "xml"}, {"threads": 0}],
)
def test_invalid_values(values) -> None:
    with pytest.raises(UsageError):
        build_config(values)


def test_parse_ring() -> None:
    f4 = ring_from_name("F4")
    assert parse_ring(4) == ring_from_name("Z4")
    assert parse_ring({"p": 2, "kind": "Fq", "a": 2}) == f4
    assert parse_ring("F4") == f4
    assert parse_ring(f4) is f4


def test_load_config_file(tmp_path) -> None:
    path = tmp_path / "wittkit.toml"
    path.write_text('m = 3\nformat = "records"\n\n[ring]\np = 3\nN = 2\n')
    config = build_config(load_config_file(str(path)))
    assert config.ring == ring_from_name("Z9")
    assert config.m == 3
    assert config.output_format == "records"


def test_load_config_file_errors(tmp_path) -> None:
    broken = tmp_path / "broken.toml"
    broken.write_text("m = = 3\n")
    with pytest.raises(UsageError):
        load_config_file(str(broken))
    with pytest.raises(UsageError):
        load_config_file(str(tmp_path / "missing.toml"))


def test_apply_installs_limits(monkeypatch) -> None:
    monkeypatch.setattr(FrameElement, "DEGREE_WINDOW", FrameElement.DEGREE_WINDOW)
    monkeypatch.setattr(CoefficientRing, "DEFAULT_SIZE_CAP", CoefficientRing.DEFAULT_SIZE_CAP)
    SessionConfig(degree_window=3, size_cap=50).apply()
    assert FrameElement.DEGREE_WINDOW == 3
    assert CoefficientRing.DEFAULT_SIZE_CAP == 50
