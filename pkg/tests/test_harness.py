import csv
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from loewnerkit import cli, harness
from loewnerkit.curves import Curve, polyline
from loewnerkit.harness import CONVERGING, INCONCLUSIVE, STALLED, ExperimentConfig, Report

finite = st.floats(min_value=1e-6, max_value=10.0, allow_nan=False)


# ------------------------------------------------------------------ verdicts

@given(st.lists(finite, min_size=4, max_size=12))
def test_converging_only_when_sound(vals):
    v = harness.verdict(vals)
    tail = np.asarray(vals[-4:])
    if v == CONVERGING:
        assert np.all(np.diff(tail) < 0)
        assert vals[-1] < 0.5 * vals[0]
    else:
        assert not (np.all(np.diff(tail) < 0) and vals[-1] < 0.5 * vals[0])


@given(st.lists(finite, min_size=4, max_size=12))
def test_stalled_needs_floor(vals):
    if harness.verdict(vals) == STALLED:
        assert max(vals[-4:]) >= harness.STALL_FLOOR


def test_verdict_examples():
    assert harness.verdict([1, 0.5, 0.25, 0.1]) == CONVERGING
    assert harness.verdict([1, 0.9, 0.8, 0.7]) == STALLED  # decreasing but not halved
    assert harness.verdict([0.3, 0.2, 0.25, 0.2]) == STALLED
    assert harness.verdict([0.01, 0.02, 0.01, 0.02]) == INCONCLUSIVE
    assert harness.verdict([1, 0.5]) == INCONCLUSIVE


# ------------------------------------------------------------------ config and report

def test_config_defaults_and_round_trip(tmp_path):
    cfg = ExperimentConfig(family="hooks", xs=[0.3 + 0.6j, 1j], seed=7)
    assert cfg.js == list(harness.FAMILIES["hooks"]["js"])
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg.to_dict()))
    back = ExperimentConfig.from_json(p)
    assert back == cfg


def test_config_rejects_duplicate_viewpoints():
    with pytest.raises(ValueError):
        ExperimentConfig(xs=[1j, 1j])


def test_viewpoint_on_curve_is_error():
    from loewnerkit.examples import gen_ladder

    z = gen_ladder(2).points
    on = complex(0.5 * (z[len(z) // 2] + z[len(z) // 2 + 1]))
    cfg = ExperimentConfig(family="ladder", js=[2], xs=[on], metrics=["hausdorff"])
    with pytest.raises(ValueError, match="j="):
        harness.run_convergence_suite(cfg)


def _report():
    r = Report(meta={"family": "demo", "version": "x"})
    for j in (1, 2, 3):
        for x in (0.3 + 0.6j, -0.2 + 1j):
            r.add(j, x, "d_cap_r", 1.0 / j, (0.1 / j, 0.9 / j))
            r.add(j, x, "d_strong", 0.5)
    r.verdicts = {"d_cap_r@a": CONVERGING}
    return r


def test_json_round_trip(tmp_path):
    r = _report()
    p = tmp_path / "r.json"
    harness.emit_report(r, "json", p)
    assert harness.load_report(p) == r


def test_csv_row_count(tmp_path):
    r = _report()
    p = tmp_path / "r.csv"
    harness.emit_report(r, "csv", p)
    rows = list(csv.reader(p.open()))
    assert rows[0] == list(Report.FIELDS)
    assert len(rows) - 1 == 3 * 2 * 2


def test_empty_report_header_only_csv(tmp_path):
    p = tmp_path / "e.csv"
    harness.emit_report(Report(), "csv", p)
    assert p.read_text().splitlines() == [",".join(Report.FIELDS)]


def test_svg_output(tmp_path):
    p = tmp_path / "r.svg"
    harness.emit_report(_report(), "svg", p)
    text = p.read_text()
    assert text.startswith("<svg") and text.count("<polyline") == 4


def test_unwritable_path_raises(tmp_path):
    with pytest.raises(OSError):
        harness.emit_report(_report(), "csv", tmp_path / "missing" / "r.csv")


def test_suite_rows_complete_and_deterministic(tmp_path):
    cfg = ExperimentConfig(family="semicircle", js=[1, 2], xs=[0.3 + 0.6j, 0.1 + 1.5j],
                           metrics=["hausdorff", "d_cap_r"])
    r1 = harness.run_convergence_suite(cfg)
    r2 = harness.run_convergence_suite(cfg)
    keys = [(r["j"], r["x_re"], r["x_im"], r["metric"]) for r in r1.rows]
    assert len(keys) == len(set(keys)) == 2 * 2 * 2
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    harness.emit_report(r1, "csv", a)
    harness.emit_report(r2, "csv", b)
    assert a.read_bytes() == b.read_bytes()


def test_law_refuses_small_m():
    with pytest.raises(ValueError):
        harness.run_law_convergence(ExperimentConfig(family="law", m=20))


def test_verdicts_as_expected():
    r = Report(verdicts={"d_strong@a": STALLED, "d_cap_r@a": CONVERGING},
               meta={"expected": {"d_strong": STALLED, "d_cap_r": CONVERGING}})
    assert harness.verdicts_as_expected(r)
    r.verdicts["d_cap_r@b"] = INCONCLUSIVE
    assert not harness.verdicts_as_expected(r)


# ------------------------------------------------------------------ CLI

def test_cli_example_metric(tmp_path):
    a, b, out = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "m.json"
    assert cli.main(["example", "--family", "ladder", "--j", "2", "--out", str(a)]) == 0
    assert cli.main(["example", "--family", "ladder", "--j", "3", "--out", str(b)]) == 0
    assert cli.main(["metric", "--name", "hausdorff", "--a", str(a), "--b", str(b), "--out", str(out)]) == 0
    res = json.loads(out.read_text())
    ca, cb = Curve.from_csv(a), Curve.from_csv(b)
    assert res["value"] == pytest.approx(ca.hausdorff_distance(cb))


def test_cli_sle_trace_drive(tmp_path):
    w, tr, d = tmp_path / "w.csv", tmp_path / "t.csv", tmp_path / "d.csv"
    assert cli.main(["sle-sample", "--kappa", "2", "--T", "1", "--dt", "0.005", "--seed", "3",
                     "--out", str(w)]) == 0
    assert cli.main(["trace", "--driving", str(w), "--out", str(tr)]) == 0
    c = Curve.from_csv(tr)
    assert len(c) > 10 and c.points[0] == 0
    assert cli.main(["drive", "--curve", str(tr), "--out", str(d)]) == 0
    assert d.read_text().count("\n") > 10


def test_cli_analyze(tmp_path):
    c, out = tmp_path / "c.csv", tmp_path / "a.json"
    polyline([0, 1j], max_step=0.01).to_csv(c)
    assert cli.main(["analyze", "--op", "hit", "--curve", str(c), "--x", "2i", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["value"] == pytest.approx(1 / 3, abs=5e-3)


def test_cli_usage_errors_exit_1(tmp_path, capsys):
    assert cli.main(["example", "--family", "nope", "--j", "1"]) == 1
    assert cli.main(["trace", "--driving", str(tmp_path / "missing.csv"), "--out", "x"]) == 1
    assert cli.main(["example", "--family", "ladder", "--j", "2"]) == 1  # --out missing


def test_cli_report_mismatch_exit_2(tmp_path):
    r = Report(verdicts={"d_strong@a": CONVERGING}, meta={"expected": {"d_strong": STALLED}})
    src, dst = tmp_path / "r.json", tmp_path / "r.csv"
    harness.emit_report(r, "json", src)
    assert cli.main(["report", "--in", str(src), "--out", str(dst)]) == 2
    r.verdicts["d_strong@a"] = STALLED
    harness.emit_report(r, "json", src)
    assert cli.main(["report", "--in", str(src), "--out", str(dst)]) == 0


def test_cli_converge_mismatch_exit_2(tmp_path):
    # two indices are too few for any verdict, so the expected CONVERGING is missed
    cfg = ExperimentConfig(family="semicircle", js=[1, 2], xs=[0.3 + 0.6j], metrics=["d_cap_r"])
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg.to_dict()))
    assert cli.main(["converge", "--config", str(p), "--out", str(tmp_path / "o.json")]) == 2


def test_roundtrip_suite():
    r = harness.run_roundtrip_suite()
    ns, zero = r.series("zero_trace")
    assert zero[ns.index(1000)] <= 1e-3
    _, brown = r.series("brownian_unzip")
    assert all(b < a for a, b in zip(brown, brown[1:]))
    # smooth drivings converge at least at the n^-1/2 rate (observed: first order)
    assert r.meta["smooth_trace_exponent"] <= -0.35
    assert -0.65 <= r.meta["brownian_unzip_exponent"] <= -0.35
