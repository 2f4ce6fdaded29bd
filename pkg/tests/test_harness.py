import json
import math

import pytest

from speclp.cli import main
from speclp.errors import ConfigError
from speclp.harness import ScenarioConfig, parse_config, run_scenario


def write_cfg(path, **kv):
    lines = ["# test config"]
    for k, v in kv.items():
        lines.append(f"{k} = {v}")
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def test_parse_config_round_trip(tmp_path):
    p = write_cfg(tmp_path / "c.cfg", scenario="GFUN_RATIO", symbol1="heat",
                  symbol2="poisson", d=1, n=512, L=16, p=2, q=2, s=0, a="inf",
                  seed=3, corpus_kind="GAUSSIAN_MIX", corpus_count=2,
                  output_dir=str(tmp_path / "out"), custom_key="hello")
    cfg = parse_config(p)
    assert cfg.symbol2 == "poisson"
    assert math.isinf(cfg.a)
    assert cfg.n == 512 and cfg.seed == 3
    assert cfg.extras == {"custom_key": "hello"}


def test_parse_config_rejects_garbage(tmp_path):
    p = tmp_path / "bad.cfg"
    p.write_text("this is not a key value line\n")
    with pytest.raises(ConfigError):
        parse_config(str(p))


def test_illegal_infinite_window_combination(tmp_path):
    p = write_cfg(tmp_path / "c.cfg", scenario="GFUN_RATIO", symbol1="heat",
                  symbol2="power-t:2", q=4, a="inf")
    with pytest.raises(ConfigError, match="q"):
        parse_config(p)


def test_unknown_scenario_rejected():
    cfg = ScenarioConfig(scenario="NOPE")
    with pytest.raises(ConfigError):
        cfg.validate()


def test_audit_symbol_scenario(tmp_path):
    cfg = ScenarioConfig(scenario="AUDIT_SYMBOL", symbol1="heat", symbol2="poisson",
                         n=256, L=16.0, output_dir=str(tmp_path / "out"))
    assert run_scenario(cfg) == 0
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["passed"] is True
    assert summary["schema_version"] == "1"
    assert (tmp_path / "out" / "audits.csv").exists()


def test_gfun_ratio_scenario_and_determinism(tmp_path):
    outs = []
    for tag in ("a", "b"):
        cfg = ScenarioConfig(scenario="GFUN_RATIO", symbol1="heat", symbol2="heat",
                             n=512, L=16.0, corpus_count=2, seed=5,
                             output_dir=str(tmp_path / tag))
        assert run_scenario(cfg) == 0
        outs.append(tmp_path / tag)
    s = json.loads((outs[0] / "summary.json").read_text())
    assert abs(s["max"] - 0.5) <= 1e-3
    # byte-identical artifacts apart from the timestamped run_meta
    for name in ("summary.json", "ratios.csv"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()
    meta = json.loads((outs[0] / "run_meta.json").read_text())
    assert "timestamp" in meta


def test_lp_decomp_scenario(tmp_path):
    cfg = ScenarioConfig(scenario="LP_DECOMP", n=512, L=16.0, corpus_count=2,
                         corpus_kind="BANDLIMITED_RANDOM",
                         output_dir=str(tmp_path / "out"))
    assert run_scenario(cfg) == 0


def test_fraclap_scenario_via_cli(tmp_path):
    p = write_cfg(tmp_path / "c.cfg", scenario="FRACLAP_XCHECK", n=8192, L=256,
                  output_dir=str(tmp_path / "o1"))
    assert main(["fraclap-xcheck", "--config", p, "--out", str(tmp_path / "o2")]) == 0
    summary = json.loads((tmp_path / "o2" / "summary.json").read_text())
    assert summary["passed"] is True


def test_cli_requires_config_for_scenarios(capsys):
    assert main(["gfun-ratio"]) == 2
    assert "config" in capsys.readouterr().err


def test_cli_reports_config_errors(tmp_path, capsys):
    p = write_cfg(tmp_path / "c.cfg", scenario="GFUN_RATIO", symbol1="heat",
                  symbol2="power-t:2", q=4, a="inf")
    assert main(["gfun-ratio", "--config", p]) == 2
    assert "error" in capsys.readouterr().err


def test_hormander_scenario(tmp_path):
    cfg = ScenarioConfig(scenario="HORMANDER", symbol1="heat", symbol2="heat",
                         n=8192, L=32.0, q=2.0, output_dir=str(tmp_path / "out"))
    cfg.extras["y_oct_lo"] = "-4"
    cfg.extras["y_oct_hi"] = "2"
    assert run_scenario(cfg) == 0
    assert (tmp_path / "out" / "hormander.csv").exists()


def test_kernel_decay_scenario(tmp_path):
    cfg = ScenarioConfig(scenario="KERNEL_DECAY", symbol1="poisson", symbol2="poisson",
                         n=4096, L=64.0, t=1.0, output_dir=str(tmp_path / "out"))
    assert run_scenario(cfg) == 0


def test_dyadic_envelope_scenario(tmp_path):
    cfg = ScenarioConfig(scenario="DYADIC_ENVELOPE", symbol1="heat", symbol2="heat",
                         n=131072, L=2048.0, t=1.0, j_min=-6, j_max=5,
                         output_dir=str(tmp_path / "out"))
    assert run_scenario(cfg) == 0
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["rate"] > 0
