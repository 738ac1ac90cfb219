import csv
import io
import json
import xml.etree.ElementTree as ET
from importlib import resources

import jsonschema
import pytest

from suslov import RunConfig, main, run


def load_schema(name: str) -> dict:
    text = resources.files("suslov.schemas").joinpath(f"{name}.v1.json").read_text()
    return json.loads(text)


def validate(payload, schema_name: str) -> None:
    jsonschema.validate(payload, load_schema(schema_name))


def config(command: str, **kw) -> RunConfig:
    base = dict(command=command, b1=4.0, b2=1.0, k1=2.0, k2=0.75)
    base.update(kw)
    return RunConfig(**base)


class TestClassify:
    def test_stdout_json_and_schema(self, capsys):
        assert run(config("classify", k1=4.4, k2=1.1)) == 0
        payload = json.loads(capsys.readouterr().out)
        validate(payload, "classify")
        assert payload["region"] == "D5"
        assert payload["subregion"] is None
        assert payload["delta"] == pytest.approx(11.05, abs=1e-12)

    def test_subregion_and_singular(self, capsys):
        assert run(config("classify", k1=3.4, k2=1.2)) == 0
        payload = json.loads(capsys.readouterr().out)
        validate(payload, "classify")
        assert (payload["region"], payload["subregion"]) == ("D4", "Sub12")
        assert run(config("classify", k1=2.0, k2=0.5)) == 0
        payload = json.loads(capsys.readouterr().out)
        validate(payload, "classify")
        assert payload["region"] == "Singular"
        assert payload["singular_cause"] == "RatioSumOne"

    def test_equal_b_has_null_delta(self, capsys):
        assert run(config("classify", b1=1.0, b2=1.0, k1=0.7, k2=0.7)) == 0
        payload = json.loads(capsys.readouterr().out)
        validate(payload, "classify")
        assert payload["delta"] is None

    def test_out_file(self, tmp_path):
        out = tmp_path / "r.json"
        assert run(config("classify", out_path=str(out))) == 0
        validate(json.loads(out.read_text()), "classify")


class TestCriticalPoints:
    def test_schema_and_content(self, capsys):
        assert run(config("critical-points", k1=3.4, k2=1.2)) == 0
        payload = json.loads(capsys.readouterr().out)
        validate(payload, "critical_points")
        assert len(payload) == 16
        kinds = {p["kind"] for p in payload}
        assert kinds == {"Saddle", "Center"}
        assert sum(p["index"] for p in payload) == 0
        for p in payload:
            assert set(p) == {"state", "kind", "index", "eigenvalues"}
            assert set(p["state"]) == {"m1", "m2", "gamma1", "gamma2", "gamma3"}

    def test_singular_is_runtime_error(self, capsys):
        assert run(config("critical-points", k1=2.0, k2=0.5)) == 1
        assert "error:" in capsys.readouterr().err


class TestTopology:
    def test_schema_and_agreement(self, capsys):
        assert run(config("topology")) == 0
        payload = json.loads(capsys.readouterr().out)
        validate(payload, "topology")
        assert payload["components"] == 1
        assert payload["genus_per_component"] == [5]
        assert payload["euler"] == -8
        assert payload["euler_ph"] == -8
        assert payload["agree"] is True

    def test_singular_exit_code(self, capsys):
        assert run(config("topology", k1=2.0, k2=0.5)) == 1
        err = capsys.readouterr().err
        assert "not a smooth surface" in err


class TestSimulate:
    def test_csv_and_drift_artifacts(self, tmp_path):
        out = tmp_path / "traj.csv"
        cfg = config("simulate", k1=1.0, k2=0.5, t_end=2.0, out_path=str(out), seed=3)
        assert run(cfg) == 0
        raw = out.read_bytes()
        assert b"\r\n" in raw
        rows = list(csv.reader(io.StringIO(raw.decode("ascii"))))
        assert rows[0] == ["t", "m1", "m2", "gamma1", "gamma2", "gamma3", "f1", "f2", "norm"]
        assert len(rows) == 1 + 2001  # header + samples at every step
        for row in (rows[1], rows[-1]):
            vals = [float(v) for v in row]
            assert vals[6] == pytest.approx(1.0, abs=1e-10)
            assert vals[7] == pytest.approx(0.5, abs=1e-10)
            assert vals[8] == pytest.approx(1.0, abs=1e-10)
        drift = json.loads((tmp_path / "traj.drift.json").read_text())
        validate(drift, "drift")
        assert drift["seed"] == 3
        assert max(drift["f1_drift"], drift["f2_drift"], drift["norm_drift"]) <= 1e-10

    def test_requires_out(self, capsys):
        assert run(config("simulate", k1=1.0, k2=0.5)) == 2
        assert "usage error" in capsys.readouterr().err


class TestProject:
    def test_svg_parses_and_has_layers(self, tmp_path):
        out = tmp_path / "portrait.svg"
        cfg = config("project", t_end=5.0, out_path=str(out))
        assert run(cfg) == 0
        root = ET.parse(out).getroot()
        assert root.tag.endswith("svg")
        ids = {el.get("id") for el in root.iter() if el.get("id")}
        assert {"shading", "fold", "guides", "orbits", "markers"} <= ids

    def test_markers_follow_critical_points(self, tmp_path):
        out = tmp_path / "p.svg"
        assert run(config("project", k1=3.4, k2=1.2, t_end=2.0, out_path=str(out))) == 0
        root = ET.parse(out).getroot()
        markers = [el for el in root.iter() if el.tag.endswith("circle")]
        assert len(markers) == 16


class TestSweep:
    def test_csv_svg_and_json(self, tmp_path):
        out = tmp_path / "atlas.csv"
        cfg = config(
            "sweep", k1=None, k2=None, sweep=(0.5, 7.5, 0.25, 1.75, 4),
            grid_n=64, out_path=str(out),
        )
        assert run(cfg) == 0
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert len(rows) == 16
        for row in rows:
            if row["region"] == "Singular":
                assert row["n_critical"] == ""
                continue
            assert row["agree"] == "true"
            assert row["euler"] == row["euler_ph"]
        assert (tmp_path / "atlas.svg").exists()
        ET.parse(tmp_path / "atlas.svg")

        jout = tmp_path / "atlas.json"
        cfg2 = config(
            "sweep", k1=None, k2=None, sweep=(0.5, 7.5, 0.25, 1.75, 4),
            grid_n=64, out_format="json", out_path=str(jout),
        )
        assert run(cfg2) == 0
        payload = json.loads(jout.read_text())
        validate(payload, "sweep")
        assert len(payload["cells"]) == 16

    def test_monotone_region_rows(self, tmp_path):
        # along increasing k1 at fixed k2 < b2 the tags pass D1 -> D2 -> D3
        out = tmp_path / "line.csv"
        cfg = config(
            "sweep", k1=None, k2=None, sweep=(0.1, 7.9, 0.4, 0.6, 13),
            grid_n=64, out_path=str(out),
        )
        assert run(cfg) == 0
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        by_k2: dict[str, list[tuple[float, str]]] = {}
        for r in rows:
            by_k2.setdefault(r["k2"], []).append((float(r["k1"]), r["region"]))
        order = {"D1": 0, "D2": 1, "D3": 2}
        for line in by_k2.values():
            codes = [order[t] for _, t in sorted(line) if t != "Singular"]
            assert codes and codes == sorted(codes)


class TestDeterminism:
    @pytest.mark.parametrize("command", ["simulate", "project", "sweep"])
    def test_artifacts_are_reproducible(self, tmp_path, command):
        outs = []
        for tag in ("a", "b"):
            d = tmp_path / tag
            d.mkdir()
            ext = "csv" if command != "project" else "svg"
            out = d / f"x.{ext}"
            kw = dict(t_end=2.0, out_path=str(out))
            if command == "sweep":
                kw.update(k1=None, k2=None, sweep=(0.5, 7.5, 0.25, 1.75, 3), grid_n=64)
            assert run(config(command, **kw)) == 0
            outs.append(sorted(p.read_bytes() for p in d.iterdir()))
        assert outs[0] == outs[1]


class TestMainArgParsing:
    def test_classify_roundtrip(self, capsys):
        code = main(["classify", "--b1", "4", "--b2", "1", "--k1", "4.4", "--k2", "1.1"])
        assert code == 0
        assert json.loads(capsys.readouterr().out)["region"] == "D5"

    def test_missing_required_flag(self, capsys):
        assert main(["classify", "--b1", "4", "--b2", "1", "--k1", "1"]) == 2

    def test_unknown_command(self):
        assert main(["explode", "--b1", "4", "--b2", "1"]) == 2

    def test_bad_sweep_string(self):
        code = main([
            "sweep", "--b1", "4", "--b2", "1", "--sweep", "0:1:0", "--out", "/tmp/x.csv",
        ])
        assert code == 2

    def test_bad_format_for_command(self, capsys):
        code = main([
            "topology", "--b1", "4", "--b2", "1", "--k1", "2", "--k2", "0.75",
            "--format", "csv",
        ])
        assert code == 2
        assert "usage error" in capsys.readouterr().err

    def test_grid_n_floor(self, capsys):
        code = main([
            "topology", "--b1", "4", "--b2", "1", "--k1", "2", "--k2", "0.75",
            "--grid-n", "32",
        ])
        assert code == 2

    def test_unwritable_out_is_runtime_error(self, tmp_path, capsys):
        out = tmp_path / "no" / "such" / "dir" / "x.json"
        code = main([
            "classify", "--b1", "4", "--b2", "1", "--k1", "2", "--k2", "0.75",
            "--out", str(out),
        ])
        assert code == 1
        assert "error:" in capsys.readouterr().err
