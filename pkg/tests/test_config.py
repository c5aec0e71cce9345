import pytest

from fulldisp import ConfigError
from fulldisp.harness.config import defaults, load_config, parse_config, validate
from fulldisp.models import ModelKind


def test_defaults_are_valid():
    assert validate(defaults()) == []
    assert defaults().model is ModelKind.FDGN1


def test_parse_typed_values():
    cfg = parse_config(
        "[run]\nmodel = WB   ; inline comment\n[grid]\nn = 32\nL = 10\ndealias = no\n"
        "[stepper]\ndt = auto\n[sweep]\nmu = 0.1, 0.2, 0.3, 0.4\nmodels = FDGN1, WB\n"
    )
    assert cfg.model is ModelKind.WB
    assert cfg["grid"]["n"] == 32 and cfg["grid"]["L"] == 10.0 and cfg["grid"]["dealias"] is False
    assert cfg["stepper"]["dt"] is None
    assert cfg["sweep"]["mu"] == [0.1, 0.2, 0.3, 0.4]
    assert cfg["sweep"]["models"] == [ModelKind.FDGN1, ModelKind.WB]
    assert cfg.line_of("grid", "n") == 4


def test_all_problems_reported_with_lines():
    text = "[grid]\nn = 7\n[params]\neps = abc\n[bogus]\nx = 1\n[stepper]\nt_end = -1\nfoo = 2\n"
    with pytest.raises(ConfigError) as info:
        parse_config(text, source="run.ini")
    probs = info.value.problems
    joined = "\n".join(probs)
    assert len(probs) >= 5
    for ln in (2, 4, 5, 8, 9):
        assert f"run.ini:{ln}:" in joined


def test_cavitating_initial_data_rejected():
    with pytest.raises(ConfigError, match="h_min"):
        parse_config("[params]\neps = 0.5\n[initial]\na = 1.9\n")


def test_short_sweep_rejected():
    with pytest.raises(ConfigError, match="at least 4"):
        parse_config("[sweep]\nmu = 0.1, 0.2\n")


def test_syntax_error_and_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        parse_config("n = 3\n")
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.ini")
    p = tmp_path / "ok.ini"
    p.write_text("[params]\nmu = 0.5\n")
    assert load_config(p)["params"]["mu"] == 0.5
