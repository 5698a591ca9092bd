import csv
import io
import json

from frustra.cli import main
from frustra.models import model_to_dict, chain3


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_ising(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--model", "ising2", "--param", "g=1")
    assert code == 0
    report = json.loads(out)
    assert abs(report["ef_bound"] - 0.3819660) < 1e-6
    assert abs(report["entanglement"] - 0.0527864) < 1e-6
    assert report["entanglement_method"] == "schmidt_exact"
    assert report["ground_state"]["dims"] == [2, 2]


def test_analyze_triangle_degenerate(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--model", "triangle", "--param", "J=1")
    assert code == 0
    report = json.loads(out)
    assert report["ef_bound"] is None
    assert report["ef_bound_reason"] == "delta_e_ent = 0"
    assert report["degenerate_ground"] is True


def test_analyze_chain3_bipartition(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--model", "chain3",
                           "--param", "gb=10", "--bipartition", "B|AC")
    assert code == 0
    report = json.loads(out)
    assert report["ratio_bound"] is not None and report["ratio_bound"] < 0.5
    assert report["entanglement"] <= report["ratio_bound"] + 1e-6


def test_analyze_config_errors(capsys):
    code, _, err = run_cli(capsys, "analyze", "--model", "nope")
    assert code == 2 and "unknown model" in err
    code, _, err = run_cli(capsys, "analyze", "--model", "ising2", "--param", "q=1")
    assert code == 2
    code, _, err = run_cli(capsys, "analyze", "--model", "ising2", "--param", "g=x")
    assert code == 2
    code, _, _ = run_cli(capsys, "analyze", "--model", "missing.json")
    assert code == 2
    code, _, _ = run_cli(capsys, "analyze", "--model", "ising2", "--split", "bogus:1")
    assert code == 2
    code, _, _ = run_cli(capsys, "analyze", "--model", "chain3", "--bipartition", "B|AX")
    assert code == 2
    code, _, _ = run_cli(capsys, "bogus-command")
    assert code == 2


def test_analyze_model_file_and_split_file(tmp_path, capsys):
    model_path = tmp_path / "chain.json"
    model_path.write_text(json.dumps(model_to_dict(chain3(1.0, 2.0, 1.0))))
    code, out, _ = run_cli(capsys, "analyze", "--model", str(model_path))
    assert code == 0
    assert json.loads(out)["E0"] < 0

    split_path = tmp_path / "split.json"
    split_path.write_text(json.dumps({"local": [0]}))
    code, out, _ = run_cli(capsys, "analyze", "--model", "ising2",
                           "--split", f"file:{split_path}")
    assert code == 0
    assert abs(json.loads(out)["ef_bound"] - 0.0890728) < 1e-6


def test_analyze_schmidt_split(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--model", "ising2",
                           "--split", "schmidt:0.01")
    assert code == 0
    report = json.loads(out)
    assert abs(report["delta_e_ent"] - 0.01) < 1e-10
    assert report["ef_bound"] >= report["entanglement"] - 1e-9


def test_analyze_out_file(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "analyze", "--model", "ising2", "--out", str(out_path))
    assert code == 0 and out == ""
    assert json.loads(out_path.read_text())["E0"] < 0


# ---------------------------------------------------------------------------
# sweep


def parse_csv(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    return rows


def test_sweep_small_grid(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--grid", "0.5:1.5:3")
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 3
    for row in rows:
        assert float(row["dev_entanglement"]) < 1e-10
        assert float(row["dev_ef_symmetric"]) < 1e-10
        assert float(row["dev_ef_asymmetric"]) < 1e-10
        assert float(row["ef_bound_asymmetric"]) <= float(row["ef_bound_symmetric"])


def test_sweep_g_zero_row(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--grid", "0:1:2")
    assert code == 0
    rows = parse_csv(out)
    first = rows[0]
    assert float(first["g"]) == 0.0
    # the closed form extends continuously to the strong-coupling limit 1/2
    assert abs(float(first["closed_form_gse"]) - 0.5) < 1e-9
    # numeric bounds are undefined at delta_e_ent = 0 and left blank
    assert first["ef_bound_symmetric"] == ""
    assert first["dev_ef_symmetric"] == ""


def test_analyze_byte_identical_reruns(capsys):
    _, out1, _ = run_cli(capsys, "analyze", "--model", "chain3", "--param", "gb=3")
    _, out2, _ = run_cli(capsys, "analyze", "--model", "chain3", "--param", "gb=3")
    assert out1 == out2


def test_sweep_determinism_and_jobs(capsys):
    _, out1, _ = run_cli(capsys, "sweep", "--grid", "0.2:2:5")
    _, out2, _ = run_cli(capsys, "sweep", "--grid", "0.2:2:5")
    assert out1 == out2
    _, out3, _ = run_cli(capsys, "sweep", "--grid", "0.2:2:5", "--jobs", "3")
    assert out1 == out3


def test_sweep_rejects_other_models(capsys):
    code, _, _ = run_cli(capsys, "sweep", "--model", "triangle", "--grid", "0.1:1:2")
    assert code == 2
    code, _, _ = run_cli(capsys, "sweep", "--grid", "1:0:2")
    assert code == 2


# ---------------------------------------------------------------------------
# excited / saturate / perturb / selftest


def test_excited_reports(capsys):
    code, out, _ = run_cli(capsys, "excited", "--model", "ising2",
                           "--param", "g=2", "--j", "0..3")
    assert code == 0
    reports = json.loads(out)
    assert [r["j"] for r in reports] == [0, 1, 2, 3]
    assert abs(reports[0]["bound_29"] - 1 / 9) < 1e-12
    assert reports[0]["precondition_met"] is True
    code, _, _ = run_cli(capsys, "excited", "--model", "ising2", "--j", "9")
    assert code == 2


def test_saturate_csv(capsys):
    code, out, _ = run_cli(capsys, "saturate", "--model", "ising2",
                           "--param", "g=1", "--gammas", "1e-1,1e-2,1e-3")
    assert code == 0
    rows = parse_csv(out)
    excesses = [float(r["excess"]) for r in rows]
    assert excesses[0] > excesses[1] > excesses[2] > 0
    assert set(rows[0].keys()) == {
        "gamma", "E0", "E0_L", "E0_I", "E_f", "delta_e_ent",
        "ef_bound", "entanglement", "excess", "overshoot_interaction",
    }


def test_saturate_json(capsys):
    code, out, _ = run_cli(capsys, "saturate", "--model", "ising2",
                           "--gammas", "1e-1,1e-2", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert len(payload) == 2
    assert payload[0]["gamma"] == 0.1
    assert not payload[0]["unreliable"]


def test_perturb_reports_and_summary(tmp_path, capsys):
    out_path = tmp_path / "trials.jsonl"
    code, out, _ = run_cli(capsys, "perturb", "--trials", "12", "--seed", "1",
                           "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert len(lines) == 12
    first = json.loads(lines[0])
    assert first["all_ok"] is True
    assert "perturb: 12 trials, 0 failures" in out


def test_selftest_quick(capsys):
    code, out, _ = run_cli(capsys, "selftest", "--trials", "8", "--seed", "0")
    assert code == 0
    assert "PASS" in out and "FAIL" not in out


def test_list_models(capsys):
    code, out, _ = run_cli(capsys, "list-models")
    assert code == 0
    for name in ("ising2", "triangle", "chain3"):
        assert name in out
