import json
import os

import numpy as np
import pytest

import almlab as al
from almlab import cli, harness
from almlab.harness import (
    ConfigError,
    ExperimentConfig,
    build_class,
    parse_config,
    wilson_lower_bound,
)


def test_wilson_bound_basics():
    assert wilson_lower_bound(0, 0) == 0.0
    assert wilson_lower_bound(50, 50) > 0.9
    assert wilson_lower_bound(45, 50) < 45 / 50
    # monotone in successes
    assert wilson_lower_bound(40, 50) < wilson_lower_bound(48, 50)


CONFIG = """
[class]
kind = thresholds
n = 16

[dist]
kind = realizable
target = 5

[learner]
algo = cal
max_unlabeled = 512

[run]
eps = 0.25
delta = 0.2
trials = 20
seed = 11
out_csv = {csv}
out_json = {json}
"""


def test_parse_config_rejects_unknown_and_missing():
    with pytest.raises(ConfigError, match="unknown key 'frobnicate'"):
        parse_config("[class]\nkind = thresholds\nfrobnicate = 1\n")
    with pytest.raises(ConfigError, match="unknown section"):
        parse_config("[wat]\nx = 1\n")
    with pytest.raises(ConfigError, match="missing required key 'eps'"):
        parse_config(
            "[class]\nkind = thresholds\n[dist]\nkind = realizable\n"
            "[learner]\nalgo = cal\n"
            "[run]\ndelta = 0.1\ntrials = 5\nseed = 1\nout_csv = a\nout_json = b\n"
        )
    with pytest.raises(ConfigError, match="missing section"):
        parse_config("[class]\nkind = thresholds\n")


def test_build_class_variants():
    C, label = build_class({"kind": "gap_lower", "n": "6", "d": "2"})
    assert label == "gap_lower:6:2" and C.n_hypotheses == 8
    C, label = build_class({"kind": "singletons", "n": "5"})
    assert C.n_hypotheses == 6
    with pytest.raises(ConfigError):
        build_class({"kind": "mystery"})


def test_run_config_end_to_end(tmp_path):
    csv_path = tmp_path / "out.csv"
    json_path = tmp_path / "out.json"
    cfg = tmp_path / "exp.conf"
    cfg.write_text(CONFIG.format(csv=csv_path, json=json_path))
    assert harness.run_config(str(cfg)) == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "algo,class,noise,eps,delta,trial,budget,queries,excess,success"
    assert len(lines) > 1
    doc = json.loads(json_path.read_text())
    assert doc["schema"] == "almlab-report-1"
    assert "0.25" in doc["estimates"]
    est = doc["estimates"]["0.25"]
    assert est["wilson_lb"] >= 0.8 and not est["capped"]


def test_run_config_deterministic_across_threads(tmp_path, monkeypatch):
    outputs = []
    for threads in ("1", "8"):
        monkeypatch.setenv("ALMLAB_THREADS", threads)
        csv_path = tmp_path / f"out{threads}.csv"
        json_path = tmp_path / f"out{threads}.json"
        cfg = tmp_path / f"exp{threads}.conf"
        cfg.write_text(CONFIG.format(csv=csv_path, json=json_path))
        assert harness.run_config(str(cfg)) == 0
        outputs.append(csv_path.read_bytes())
    assert outputs[0] == outputs[1]


def test_run_config_missing_key_exit_code(tmp_path, capsys):
    cfg = tmp_path / "bad.conf"
    cfg.write_text("[class]\nkind = thresholds\n")
    assert harness.run_config(str(cfg)) == 2
    assert "missing section" in capsys.readouterr().out


def test_family_worst_case_semantics():
    C = al.build_singletons_plus_allneg(6)
    marg = al.FinDiscreteMarginal.uniform(range(6))
    members = [al.make_realizable(C, t, marg) for t in (0, 3)]
    cfg = ExperimentConfig(
        algo="cal", C=C, class_label="singletons:6",
        members=members, member_labels=["t0", "t3"],
        eps_list=[0.25], delta=0.25, trials=16, seed=3,
        learner_options={"max_unlabeled": 256},
    )
    lc = harness.measure_label_complexity(cfg)
    est = lc.per_eps[0.25]
    assert est.n_hat == max(lc.per_member[0.25].values())
    assert est.wilson_lb >= 0.75


def test_verify_equivalences_gap_lower():
    C = al.build_gap_lower(6, 2)
    report = harness.verify_equivalences(C, seed=2)
    for key, val in report.items():
        if isinstance(val, dict):
            assert val["pass"], (key, val)
    assert report["all_pass"]


def test_verify_equivalences_thresholds():
    C = al.build_thresholds(al.uniform_grid(8))
    report = harness.verify_equivalences(
        C, harness.VerifyLimits(m_max=3, random_instances=5, marginal_samples=10), seed=4)
    assert report["all_pass"]
    assert report["teaching-dim-identity"]["star"] == 2


# -- CLI ------------------------------------------------------------------------


def test_cli_complexity_star(capsys):
    rc = cli.main(["complexity", "--class", "builtin:gap_lower:6:2",
                   "--measure", "star", "--json"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["value"] == 6 and doc["exactness"] == "exact"


def test_cli_complexity_vc_td(capsys):
    assert cli.main(["complexity", "--class", "builtin:thresholds:8",
                     "--measure", "vc", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == 1
    assert cli.main(["complexity", "--class", "builtin:thresholds:8",
                     "--measure", "xtd", "--m", "4", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == 2


def test_cli_noise_classify(tmp_path, capsys):
    C = al.build_singletons_plus_allneg(4)
    marg = al.FinDiscreteMarginal.uniform(range(4))
    d = al.make_realizable(C, 1, marg)
    dist_file = tmp_path / "d.almdist"
    dist_file.write_text(d.to_text())
    rc = cli.main(["noise", "classify", "--dist", str(dist_file),
                   "--class", "builtin:singletons:4", "--json"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["realizable"] is True


def test_cli_learn_and_verify(tmp_path, capsys):
    rc = cli.main(["learn", "--algo", "cal", "--class", "builtin:thresholds:8",
                   "--dist", "realizable:3", "--eps", "0.25", "--delta", "0.2",
                   "--budget", "16", "--seed", "1", "--json"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["queries"] <= 16 and doc["success"]
    rc = cli.main(["verify", "--class", "builtin:gap_upper:4:2", "--seed", "0", "--json"])
    assert rc == 0


def test_cli_simulate_with_svg(tmp_path, capsys):
    csv_path = tmp_path / "o.csv"
    json_path = tmp_path / "o.json"
    svg_path = tmp_path / "o.svg"
    cfg = tmp_path / "c.conf"
    cfg.write_text(
        CONFIG.format(csv=csv_path, json=json_path).replace(
            "out_json = " + str(json_path),
            "out_json = " + str(json_path) + "\nsvg = " + str(svg_path),
        ).replace("eps = 0.25", "eps = 0.25,0.125")
    )
    assert cli.main(["simulate", "--config", str(cfg)]) == 0
    assert svg_path.read_text().startswith("<svg")
