from __future__ import annotations
import csv
import json
import math

import pytest
import yaml

from revhenon.errors import ConfigError
from revhenon.jobs import JobConfig, load_job
from revhenon.main import EXIT_GATE, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, cli
from revhenon.maps import Family, PerturbationForm


@pytest.mark.parametrize(
    "raw, field",
    [
        ({"bogus": 1}, "bogus"),
        ({"family": "nope"}, "family"),
        ({"family": "T2mu", "b": 0.0}, "b"),
        ({"period": "x"}, "period"),
        ({"steps": 2.5}, "steps"),
        ({"range": "1"}, "range"),
        ({"range": "1:1"}, "range"),
        ({"format": "xml"}, "format"),
        ({"param": "q"}, "param"),
        ({"step": -0.1}, "step"),
        ({"gates": [1]}, "gates"),
        ({"family": "Hm1mu", "nonlinearity": "minus"}, "nonlinearity"),
        ({"family": "ConservativeH", "nonlinearity": "poly"}, "F"),
        ({"box": "1,2,3"}, "box"),
    ],
)
def test_bad_job_values_name_their_field(raw, field):
    with pytest.raises(ConfigError) as e:
        JobConfig.from_mapping(raw)
    assert e.value.field == field


def test_job_defaults_and_dashed_keys():
    job = JobConfig.from_mapping({"family": "hp1mu", "M": "1.5", "mu": 0.02, "stop-on-stall": "yes"})
    assert job.family is Family.HP1MU
    assert job.stop_on_stall and job.scan
    assert job.format == "csv" and job.param == "M"
    m = job.build_map()
    assert (m.M, m.mu) == (1.5, 0.02)
    assert job.search_box().grid == 50


def test_load_job_file_with_overrides(tmp_path):
    path = tmp_path / "job.yaml"
    path.write_text(
        yaml.safe_dump({
            "family": "QRexample1",
            "M": 1.0,
            "eps": {"p": [0.0, 0.0, 0.05], "q": [0.0, 0.1]},
            "range": [-1, 2],
            "gates": {"transfer": 1e-9},
        })
    )
    job = load_job(path, {"M": "0.5", "samples": None})
    assert job.M == 0.5 and job.samples == 1000
    assert job.range == (-1.0, 2.0)
    assert job.gates == {"transfer": 1e-9}
    assert job.build_map().eps.form is PerturbationForm.SEPARABLE_SUM


def test_load_job_errors(tmp_path):
    with pytest.raises(ConfigError) as e:
        load_job(tmp_path / "missing.yaml")
    assert e.value.field == "config"
    bad = tmp_path / "bad.yaml"
    bad.write_text("family: [unclosed\n")
    with pytest.raises(ConfigError) as e:
        load_job(bad)
    assert e.value.field == "config"


def test_cli_curves_csv(capsys):
    assert cli(["curves", "--mu", "0.02", "--range=-1:1", "--steps", "5"]) == EXIT_OK
    rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
    assert [r["b"] for r in rows] == ["-1", "-0.5", "0.5", "1"]
    assert rows[0]["F_label"] == "F1"
    assert float(rows[-1]["F"]) == pytest.approx(0.0)


def test_cli_iterate_zero_steps(capsys):
    assert cli(["iterate", "--family", "Hp1mu", "--M", "1", "--mu", "0.02", "--point", "0.1,0.2"]) == EXIT_OK
    rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
    assert len(rows) == 1
    assert float(rows[0]["x"]) == 0.1 and float(rows[0]["y"]) == 0.2


def test_cli_iterate_json_lines(capsys):
    assert cli(["iterate", "--family", "ConservativeH", "--M", "0.5", "--point", "0.1,0.2", "--steps", "3", "--format", "json"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert [json.loads(l)["step"] for l in lines] == [0, 1, 2, 3]


def test_cli_orbit_report_reloads_as_seed(tmp_path):
    found = tmp_path / "found.json"
    args = ["--family", "Hm1mu", "--M", "0.25", "--mu", "0.05"]
    assert cli(["orbit", *args, "--period", "1", "--box", "1.5", "--grid", "15", "--workers", "0", "--out", str(found)]) == EXIT_OK
    report = json.loads(found.read_text())
    assert report["family"] == "Hm1mu" and len(report["orbits"]) == 2

    polished = tmp_path / "polished.json"
    assert cli(["orbit", *args, "--seed-file", str(found), "--out", str(polished)]) == EXIT_OK
    orbit = json.loads(polished.read_text())
    assert orbit["period"] == 1
    for got, want in zip(orbit["points"][0], report["orbits"][0]["points"][0]):
        assert got == pytest.approx(want, abs=1e-10)
    # Hm1mu is orientation reversing.
    assert orbit["cycle_jacobian"] < 0


def test_cli_branch_writes_events_next_to_table(tmp_path):
    s = math.sqrt(0.05)
    seed = tmp_path / "o3.yaml"
    seed.write_text(yaml.safe_dump({"y": [-s, 1.0 + s, -s]}))
    out = tmp_path / "o3.csv"
    code = cli([
        "branch", "--family", "ConservativeH", "--M", "1.05", "--seed-file", str(seed),
        "--range", "1.05:1.45", "--step", "0.013", "--no-scan", "--out", str(out),
    ])
    assert code == EXIT_OK
    with out.open() as f:
        rows = list(csv.DictReader(f))
    assert float(rows[0]["parameter"]) == 1.05 and float(rows[-1]["parameter"]) == 1.45
    assert {"x0", "y0", "x2", "y2"} <= set(rows[0])
    events = json.loads(out.with_suffix(".events.json").read_text())
    pd = [e for e in events if e["kind"] == "period_doubling"]
    assert len(pd) == 1
    assert pd[0]["parameter"] == pytest.approx(1.25, abs=1e-6)
    assert pd[0]["emitted"] == []


def test_cli_usage_errors():
    assert cli(["orbit", "--family", "T2mu", "--b", "0", "--period", "1"]) == EXIT_USAGE
    assert cli(["orbit", "--family", "ConservativeH"]) == EXIT_USAGE
    assert cli(["branch", "--family", "ConservativeH", "--point", "0,0"]) == EXIT_USAGE
    assert cli(["curves", "--log-level", "chatty"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as e:
        cli(["nope"])
    assert e.value.code == EXIT_USAGE


def test_cli_verify_passes(tmp_path):
    out = tmp_path / "gates.json"
    code = cli([
        "verify", "--family", "QRexample1", "--M", "0.5", "--eps", "0,0,0,0.05|0,0,0,0.02",
        "--samples", "200", "--format", "json", "--out", str(out),
    ])
    assert code == EXIT_OK
    records = json.loads(out.read_text())
    assert {r["suite"] for r in records} == {"reversibility", "jacobian", "transfer"}
    assert all(r["passed"] for r in records)


def test_cli_verify_gate_failure(tmp_path):
    job = tmp_path / "strict.yaml"
    job.write_text(
        yaml.safe_dump({
            "family": "QRexample1",
            "M": 0.5,
            "eps": {"p": [0.0, 0.0, 0.0, 0.05]},
            "samples": 50,
            "gates": {"jacobian": 1e-30},
        })
    )
    assert cli(["verify", "--config", str(job), "--out", str(tmp_path / "gates.csv")]) == EXIT_GATE


@pytest.mark.smoke
def test_cli_iterate_escape_is_numerical():
    assert cli(["iterate", "--family", "conservative_h", "--M", "0.5", "--point", "10,10", "--steps", "20"]) == EXIT_NUMERICAL
