import json
import subprocess
import sys

import numpy as np
import pytest

from localcert import io as lio
from localcert.cli import main
from localcert.linalg import reflection_example


@pytest.fixture
def mats(tmp_path):
    paths = {}
    for name, M in {
        "diag": np.diag([1, 1j]),
        "refl2": reflection_example(2),
        "refl3": reflection_example(3),
        "refl4": reflection_example(4),
        "I4": np.eye(4),
        "I16": np.eye(16),
        "quad": np.diag([1, 1j, 1j, -1]),
    }.items():
        p = tmp_path / f"{name}.json"
        lio.save_matrix(p, M)
        paths[name] = str(p)
    return paths


def run_json(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(args + ["--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_numrange(mats, tmp_path):
    code, doc = run_json(["numrange", mats["diag"]], tmp_path)
    assert code == 0
    assert doc["dist_origin"]["distance"] == pytest.approx(0.7071067, abs=1e-7)
    assert all(len(v) == 2 for v in doc["polygon"])
    code, doc = run_json(["numrange", mats["refl3"]], tmp_path)
    assert code == 0 and doc["dist_origin"]["distance"] == 0.0


def test_numrange_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"rows": 2, "cols": 2, "data": [[1, 0]]}')
    out = tmp_path / "never.json"
    assert main(["numrange", str(bad), "--out", str(out)]) == 2
    assert not out.exists()
    assert "'data'" in capsys.readouterr().err
    bad.write_text("{")
    assert main(["numrange", str(bad), "--out", str(out)]) == 2
    assert not out.exists()


def test_pnr_min(mats, tmp_path, capsys):
    code, doc = run_json(["pnr-min", mats["I4"], "--split", "2:2", "--seed", "1"], tmp_path)
    assert code == 0 and doc["result"]["distance"] == pytest.approx(1.0)
    code, doc = run_json(["pnr-min", mats["quad"], "--split", "2:2", "--seed", "1"], tmp_path)
    assert doc["result"]["distance"] == pytest.approx(0.5, abs=1e-6)
    assert doc["trace_upper_bound"] == pytest.approx(0.5)
    assert doc["seed"] == 1
    code, doc = run_json(["pnr-min", mats["refl4"], "--seed", "1"], tmp_path)
    assert doc["split"] == [4, 4] and doc["result"]["distance"] == pytest.approx(0.5, abs=1e-6)
    assert "trace_upper_bound" in capsys.readouterr().out


def test_pnr_min_bad_split(mats, tmp_path):
    assert main(["pnr-min", mats["I4"], "--split", "3:2", "--out", str(tmp_path / "x.json")]) == 2
    assert main(["pnr-min", mats["I4"], "--split", "two", "--out", str(tmp_path / "x.json")]) == 2
    assert not (tmp_path / "x.json").exists()


def test_seed_env_var(mats, tmp_path, monkeypatch):
    monkeypatch.setenv("LOCALCERT_SEED", "17")
    code, doc = run_json(["pnr-min", mats["I4"]], tmp_path)
    assert doc["seed"] == 17


def test_shadow_family(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["shadow", "--family", "t-alpha", "--d", "2", "--alpha", "1", "--n", "300", "--seed", "4", "--out", str(out)]) == 0
    samples = lio.shadow_from_csv(out.read_text())
    assert samples.size == 300
    meta = json.loads((tmp_path / "s.csv.meta.json").read_text())
    assert meta["seed"] == 4 and meta["alpha"] == 1 and meta["split"] == [2, 2]
    assert sum(meta["marginal_re"]["counts"]) == 300
    # alpha = 1 is the Hermitian reflection, so every sample is real and in [-1, 1]
    assert np.max(np.abs(samples.imag)) <= 1e-12
    assert np.all(np.abs(samples.real) <= 1 + 1e-12)


def test_shadow_alpha_zero_in_numrange(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["shadow", "--family", "t-alpha", "--d", "2", "--alpha", "0", "--n", "200", "--seed", "5", "--out", str(out)]) == 0
    samples = lio.shadow_from_csv(out.read_text())
    meta = json.loads((tmp_path / "s.csv.meta.json").read_text())
    from localcert.numrange import NumRangePolygon

    poly = NumRangePolygon(np.array([complex(*p) for p in meta["numerical_range_polygon"]]), 256)
    assert all(poly.contains(z, 1e-6) for z in samples)


def test_shadow_empty_and_matrix(mats, tmp_path):
    out = tmp_path / "e.csv"
    assert main(["shadow", mats["I4"], "--n", "0", "--out", str(out)]) == 0
    assert out.read_text() == "re,im\n"
    assert main(["shadow", "--family", "t-alpha", "--d", "2"]) == 2
    assert main(["shadow"]) == 2


def test_certify(mats, tmp_path):
    code, doc = run_json(["certify", mats["I4"], mats["I4"], "--delta", "0.1"], tmp_path)
    assert code == 0 and doc["plan"]["p2_predicted"] == pytest.approx(0.9, abs=1e-9)
    code, doc = run_json(["certify", mats["refl4"], mats["I16"], "--delta", "0", "--mode", "local"], tmp_path)
    assert doc["plan"]["p2_predicted"] == pytest.approx(0.25, abs=1e-6)
    code, doc = run_json(["certify", mats["refl4"], mats["I16"], "--delta", "0", "--mode", "global"], tmp_path)
    assert doc["plan"]["p2_predicted"] == 0.0
    code, doc = run_json(["certify", mats["refl2"], mats["I4"], "--delta", "0", "--mode", "local"], tmp_path)
    assert doc["plan"]["p2_predicted"] == 0.0


def test_certify_simulate(mats, tmp_path):
    code, doc = run_json(["certify", mats["I4"], mats["I4"], "--delta", "0.1", "--simulate", "100000", "--seed", "3"], tmp_path)
    assert code == 0
    t = doc["transcript"]
    assert t["shots"] == 100000
    assert t["checks"]["p1_within_delta_3sigma"] and t["checks"]["p2_within_3sigma"]
    assert t["wilson95"]["p2"][0] <= t["p2_hat"] <= t["wilson95"]["p2"][1]


def test_certify_dimension_mismatch(mats, tmp_path):
    assert main(["certify", mats["I4"], mats["I16"], "--delta", "0.1", "--out", str(tmp_path / "x.json")]) == 2
    assert main(["certify", mats["I4"], mats["I4"], "--delta", "2", "--out", str(tmp_path / "x.json")]) == 2
    assert not (tmp_path / "x.json").exists()


def test_haar_study(tmp_path):
    code, doc = run_json(["haar-study", "--d1", "1", "--d2", "1", "--trials", "10", "--seed", "2"], tmp_path)
    assert code == 0 and doc["fraction_zero"] == 0.0 and len(doc["distances"]) == 10
    assert doc["theorem_exp_term"] == pytest.approx(np.exp(-np.log(2) / 2))
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    main(["haar-study", "--d1", "2", "--d2", "2", "--trials", "3", "--seed", "9", "--out", str(a)])
    main(["haar-study", "--d1", "2", "--d2", "2", "--trials", "3", "--seed", "9", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    lo, hi = doc["wilson95"]
    assert lo <= doc["fraction_zero"] <= hi
    assert main(["haar-study", "--d1", "2", "--d2", "2", "--trials", "0"]) == 2


@pytest.mark.parametrize("name", ["reflection", "product-ii", "diagonal-quadruple", "trace-bound"])
def test_examples(name, capsys):
    assert main(["examples", name]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_examples_unknown(capsys):
    assert main(["examples", "nope"]) == 2
    assert "reflection" in capsys.readouterr().err


def test_console_entry_point(mats):
    proc = subprocess.run(
        [sys.executable, "-m", "localcert.cli", "numrange", mats["diag"]],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(proc.stdout)["dist_origin"]["distance"] == pytest.approx(0.7071067, abs=1e-7)
