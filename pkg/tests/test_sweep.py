import csv
import io
import json
import subprocess
import sys

import pytest

from qcorr.cli import main, read_config
from qcorr.errors import InvalidInput, InvalidSpec
from qcorr.sweep import OUTPUTS, Axis, Model, SweepSpec, fmt, run_audit, run_point, run_sweep, sweep_csv


def small_spec(**kw):
    base = dict(model="aniso-xy", axis1=Axis("gamma", -1, 1, 5), temperature=Axis("temperature", 0.1, 2, 3))
    base.update(kw)
    return SweepSpec(**base)


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_axis_parsing_and_validation():
    ax = Axis.parse("field", "0:3:61")
    assert ax.steps == 61 and ax.step == pytest.approx(0.05)
    for bad in ("0:3", "0:3:1", "3:0:5", "a:b:c"):
        with pytest.raises(InvalidSpec) as exc:
            Axis.parse("field", bad)
        assert exc.value.field == "field"


def test_spec_validation_names_the_field():
    cases = [
        (dict(temperature=Axis("temperature", 0.001, 1, 3)), "temperature"),
        (dict(axis1=Axis("gamma", -2, 1, 3)), "gamma"),
        (dict(axis1=Axis("field", 0, 1, 3)), "axis1"),
        (dict(outputs=("lqfi_numeric", "bogus")), "outputs"),
        (dict(coupling=float("nan")), "coupling"),
    ]
    for kw, name in cases:
        with pytest.raises(InvalidSpec) as exc:
            small_spec(**kw)
        assert exc.value.field == name


def test_sweep_layout_and_format():
    spec = small_spec(outputs=("lqu_numeric", "lqfi_numeric"))
    text = sweep_csv(spec)
    lines = text.split("\n")
    assert lines[0] == "gamma,temperature,lqu_numeric,lqfi_numeric"
    assert "\r" not in text and text.endswith("\n")
    rows = parse_csv(text)
    assert len(rows) == 15
    # axis1 outer, temperature inner
    assert [r["gamma"] for r in rows[:3]] == ["-1", "-1", "-1"]
    assert [r["temperature"] for r in rows[:3]] == ["0.1", "1.05", "2"]
    for r in rows:
        for v in r.values():
            mantissa = v.lstrip("-").split("e")[0].replace(".", "").lstrip("0")
            assert len(mantissa) <= 15


def test_fmt():
    assert fmt(0.1) == "0.1"
    assert fmt(1 / 3) == "0.333333333333333"
    assert fmt(True) == "true"


def test_sweep_is_deterministic():
    spec = small_spec()
    assert sweep_csv(spec) == sweep_csv(spec)


def test_two_step_sweep_matches_library_calls():
    spec = SweepSpec("iso-xy-field", Axis("field", 0.5, 2, 2), Axis("temperature", 0.2, 1, 2))
    rows = run_sweep(spec)
    assert len(rows) == 4
    for row in rows:
        rec = run_point("iso-xy-field", row["field"], row["temperature"])
        assert row["lqfi_numeric"] == rec["lqfi"]
        assert row["lqu_numeric"] == rec["lqu"]
        assert row["lqfi_paper"] == rec["lqfi_paper"]
        assert row["lambda_max_m"] == rec["lambda_max_m"]


def test_point_records():
    rec = run_point("aniso-xy", 0.5, 1.0)
    assert list(rec)[:3] == ["model", "parameters", "lqfi"]
    assert rec["lqfi"] == pytest.approx(0.05998515119362204372, abs=1e-10)
    assert rec["lqu"] == pytest.approx(0.03045637085978541495, abs=1e-10)
    rec = run_point("aniso-xy", 1.0, 0.5)
    assert rec["lqfi"] <= 1e-9 and rec["lqu"] <= 1e-9
    rec = run_point("iso-xy-field", 0.0, 0.7, coupling=0.0)
    for key in ("lqfi", "lqu", "lqfi_paper", "lqu_paper"):
        assert rec[key] == pytest.approx(0, abs=1e-12)
    json.dumps(rec)


def test_audit_summary_block():
    buf = io.StringIO()
    report = run_audit(small_spec(), buf)
    text = buf.getvalue()
    assert "# summary" in text
    assert "# chain_violations: 0" in text
    assert report.summary["max_gap_lqfi"] <= 1e-9
    head = text.split("\n\n# summary")[0]
    assert len(parse_csv(head)) == 15


def test_paper_convention_sweep_runs():
    rows = run_sweep(small_spec(model="iso-xy-field", axis1=Axis("field", 0, 2, 3), convention="paper"))
    assert len(rows) == 9


# -- command line -------------------------------------------------------------

def test_cli_sweep_to_file(tmp_path):
    out = tmp_path / "s.csv"
    code = main(["sweep", "--model", "aniso-xy", "--gamma", "-1:1:3", "--temp", "0.5:1:2", "--out", str(out)])
    assert code == 0
    rows = parse_csv(out.read_text())
    assert len(rows) == 6 and list(rows[0]) == ["gamma", "temperature", *OUTPUTS]


def test_cli_outputs_and_json(capsys):
    assert main(["sweep", "--model", "iso-xy-field", "--field", "0:1:2", "--temp", "1:2:2",
                 "--outputs", "lqu_numeric", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["columns"] == ["field", "temperature", "lqu_numeric"]
    assert len(data["rows"]) == 4


def test_cli_point_json(capsys):
    assert main(["point", "--model", "aniso-xy", "--gamma", "0.5", "--temp", "1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["lqfi"] == pytest.approx(0.0599851511936, abs=1e-10)


def test_cli_config_file_with_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# grid\nmodel = iso-xy-field\nfield = 0:3:4\ntemp = 0.5:1:2\ncoupling = 2\n")
    assert main(["sweep", "--config", str(cfg), "--field", "0:1:2"]) == 0
    rows = parse_csv(capsys.readouterr().out)
    assert len(rows) == 4
    assert read_config(cfg)["coupling"] == "2"
    cfg.write_text("nonsense = 1\n")
    with pytest.raises(InvalidInput):
        read_config(cfg)


def test_cli_exit_codes(capsys, monkeypatch):
    assert main(["sweep", "--model", "aniso-xy", "--gamma", "-2:1:3", "--temp", "0.5:1:2"]) == 1
    assert main(["sweep", "--model", "aniso-xy", "--temp", "0.5:1:2"]) == 1
    assert main(["audit", "--model", "aniso-xy", "--gamma", "0:1:3", "--temp", "0.001:1:2"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--model", "heisenberg"])
    assert exc.value.code == 1

    import qcorr.sweep as sweep_mod
    from qcorr.errors import ConvergenceFailure

    def boom(*a, **k):
        raise ConvergenceFailure("no convergence")

    monkeypatch.setattr(sweep_mod, "evaluate_point", boom)
    assert main(["sweep", "--model", "aniso-xy", "--gamma", "0:1:2", "--temp", "1:2:2"]) == 2
    assert "numerical failure" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qcorr", "point", "--model", "iso-xy-field", "--field", "1",
                           "--temp", "1", "--format", "csv"], capture_output=True, text=True, check=True)
    header, values = proc.stdout.strip().split("\n")
    assert header.startswith("field,temperature,coupling,model")
