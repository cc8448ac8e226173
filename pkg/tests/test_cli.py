from fractions import Fraction

import pytest

from nilgeo.cli import ConfigError, main, parse_config, run_suite
from nilgeo.suites import SUITES, TrialResult


def test_minimal_config_gets_defaults():
    cfg = parse_config("model = heisenberg\nseed = 1\n")
    assert cfg.trials == 100
    assert cfg.suite == "all"
    assert cfg.connection == "random"
    assert cfg.mutation is False


def test_sections_and_comments_are_tolerated():
    cfg = parse_config(
        """
        [run]
        model = trivial_gauge   # the gauge groupoid
        structure_group = sl2
        seed = 9
        trials = 3
        """
    )
    assert cfg.model == "trivial_gauge"
    assert cfg.structure_group == "sl2"
    assert cfg.trials == 3


def test_rational_bound_is_parsed_exactly():
    cfg = parse_config("model = heisenberg\nseed = 1\ncoeff_bound = 3/2\n")
    assert cfg.coeff_bound == Fraction(3, 2)


def test_unknown_model_error_names_the_registry():
    with pytest.raises(ConfigError) as err:
        parse_config("model = nope\nseed = 1\n")
    message = str(err.value)
    for name in ("heisenberg", "direct_product", "trivial_gauge"):
        assert name in message


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config("model = heisenberg\nwhatever\nseed = 1\n")
    with pytest.raises(ConfigError, match="line 3"):
        parse_config("model = heisenberg\nseed = 1\nbogus_key = 2\n")
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config("model = heisenberg\nseed = 1\nseed = 2\n")


def test_seed_must_fit_in_64_bits():
    with pytest.raises(ConfigError, match="64 bits"):
        parse_config(f"model = heisenberg\nseed = {1 << 64}\n")
    with pytest.raises(ConfigError, match="64 bits"):
        parse_config("model = heisenberg\nseed = -1\n")


def test_structure_group_only_for_the_gauge_model():
    with pytest.raises(ConfigError):
        parse_config("model = heisenberg\nstructure_group = gl2\nseed = 1\n")


def test_unknown_preset_is_rejected():
    with pytest.raises(ConfigError, match="preset"):
        parse_config("model = heisenberg\nseed = 1\nconnection = preset:bogus\n")
    cfg = parse_config(
        "model = trivial_gauge\nseed = 1\nconnection = preset:x1dx2\ntrials = 1\n"
    )
    assert cfg.connection == "preset:x1dx2"


def test_reports_are_byte_identical_across_runs():
    cfg = parse_config(
        "model = trivial_gauge\nstructure_group = gl2\nseed = 42\ntrials = 2\n"
    )
    first = run_suite(cfg)
    second = run_suite(cfg)
    assert first == second
    assert "\n".join(first[1]) == "\n".join(second[1])


def test_all_run_covers_every_identifier():
    cfg = parse_config("model = heisenberg\nseed = 5\ntrials = 1\nmutation = true\n")
    status, lines = run_suite(cfg)
    assert status == 0
    text = "\n".join(lines)
    for ident in (
        "prop-1.1", "prop-1.2", "prop-1.3", "thm-1.4", "prop-1.5",
        "prop-3.1", "cor-3.2", "prop-3.3", "thm-3.4",
        "prop-4.1", "prop-4.2", "prop-4.3", "thm-4.4", "prop-4.5",
        "dnabla-form", "bianchi-abstract", "bianchi-classical", "face-curvature",
    ):
        assert ident in text, ident


def test_report_has_plan_and_summary():
    cfg = parse_config("model = direct_product\nseed = 2\ntrials = 1\n")
    status, lines = run_suite(cfg)
    assert lines[0] == f"1..{len(lines) - 2}"
    assert lines[-1].startswith("# pass=")
    assert status == 0


def test_mutation_reports_expected_failure_and_passes():
    cfg = parse_config(
        "model = heisenberg\nseed = 7\ntrials = 1\nsuite = bianchi\nmutation = true\n"
    )
    status, lines = run_suite(cfg)
    assert status == 0
    mutation_lines = [l for l in lines if "bianchi-mutation" in l]
    assert len(mutation_lines) == 1
    assert mutation_lines[0].startswith("ok")
    assert "expected failure" in mutation_lines[0]


def test_run_suite_flags_failures_with_exit_one(monkeypatch):
    def doomed(model, rng, trials, params):
        return [TrialResult("prop-1.1", False, "forced")]

    monkeypatch.setitem(SUITES, "tangent", (doomed,))
    cfg = parse_config("model = heisenberg\nseed = 1\ntrials = 1\nsuite = tangent\n")
    status, lines = run_suite(cfg)
    assert status == 1
    assert any(line.startswith("not ok") for line in lines)


def test_main_exit_codes_and_output(tmp_path, capsys):
    good = tmp_path / "good.cfg"
    good.write_text("model = heisenberg\nseed = 1\ntrials = 1\nsuite = algebra\n")
    assert main(["--config", str(good)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("1..")
    assert "# pass=" in out

    bad = tmp_path / "bad.cfg"
    bad.write_text("model = mystery\nseed = 1\n")
    assert main(["--config", str(bad)]) == 2
    assert "registry" in capsys.readouterr().err

    assert main(["--config", str(tmp_path / "missing.cfg")]) == 2
    capsys.readouterr()

    assert main(["--list-models"]) == 0
    listing = capsys.readouterr().out
    assert "heisenberg" in listing and "structure_group=sl2" in listing


def test_main_overrides(tmp_path, capsys):
    path = tmp_path / "run.cfg"
    path.write_text("model = heisenberg\nseed = 1\ntrials = 5\nsuite = algebra\n")
    assert main(["--config", str(path), "--trials", "2", "--seed", "9", "--suite", "algebra"]) == 0
    out = capsys.readouterr().out
    assert "seed=9" in out
    assert out.startswith("1..2")
