import json

import numpy as np
import pytest

from orlicz4d import bubbles as bb
from orlicz4d import serialize as ser
from orlicz4d.cli import EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION, main
from orlicz4d.decompose import synthesize_family


# -------------------------------------------------------------- round trips

def test_logradial_roundtrip():
    f = bb.make_falpha(5.0)
    d = ser.logradial_to_dict(f)
    g = ser.logradial_from_dict(json.loads(ser.dumps(d)))
    np.testing.assert_array_equal(g.grid.nodes, f.grid.nodes)
    np.testing.assert_array_equal(g.values, f.values)
    assert g.name == f.name and g.closed_form == "falpha"


def test_profile_roundtrip_and_schema():
    p = bb.profile_L()
    d = ser.profile_to_dict(p)
    assert set(d) == {"s", "psi"}
    q = ser.profile_from_dict(json.loads(ser.dumps(d)))
    np.testing.assert_array_equal(q.s, p.s)
    np.testing.assert_array_equal(q.values, p.values)


def test_profile_rejects_negative_s():
    with pytest.raises(ValueError):
        ser.profile_from_dict({"s": [-1.0, 0.0, 1.0], "psi": [0.0, 0.0, 1.0]})


def test_family_roundtrip():
    fam = synthesize_family([4, 8, 16], lambda n: [
        bb.BubbleSpec(alpha=float(n), profile=bb.profile_L())])
    d = ser.family_to_dict(fam)
    g = ser.family_from_dict(json.loads(ser.dumps(d)))
    assert g.indices == fam.indices
    np.testing.assert_array_equal(g.members[1].values, fam.members[1].values)


def test_malformed_json_reports_path():
    with pytest.raises(ValueError, match="missing"):
        ser.logradial_from_dict({"meta": {}})


def test_float_format_seventeen_digits():
    x = 1.0 / 3.0
    assert ser.fmt_float(x) == x  # 17 significant digits round-trip


# ------------------------------------------------------------------- CLI ---

def test_cli_gen_norm_orlicz_pipeline(tmp_path):
    fpath = tmp_path / "f.json"
    assert main(["gen-falpha", "--alpha", "10", "--out", str(fpath)]) == EXIT_OK
    npath = tmp_path / "norm.json"
    assert main(["norm", "--in", str(fpath), "--which", "LAP",
                 "--out", str(npath)]) == EXIT_OK
    lap = json.load(open(npath))["value"]
    want = np.sqrt(1.0 + 0.1 + bb.ETA_LAP_COEF / 10.0)
    assert abs(lap - want) <= 1e-3 * want
    opath = tmp_path / "orlicz.json"
    assert main(["orlicz", "--in", str(fpath), "--out", str(opath)]) == EXIT_OK
    lam = json.load(open(opath))["orlicz_norm"]
    assert 0.05 < lam < 0.07


def test_cli_zero_norm(tmp_path):
    zpath = tmp_path / "zero.json"
    grid = list(np.linspace(-1.0, 8.0, 32))
    ser.write_json(str(zpath), {"meta": {"name": "zero", "closed_form": None},
                                "grid_s": grid, "values": [0.0] * 32})
    out = tmp_path / "n.json"
    assert main(["norm", "--in", str(zpath), "--which", "L2",
                 "--out", str(out)]) == EXIT_OK
    assert json.load(open(out))["value"] == 0.0


def test_cli_gen_bubble_deterministic(tmp_path):
    p1, p2 = tmp_path / "b1.json", tmp_path / "b2.json"
    args = ["gen-bubble", "--alpha", "24", "--profile", "L",
            "--mollified", "true"]
    assert main(args + ["--out", str(p1)]) == EXIT_OK
    assert main(args + ["--out", str(p2)]) == EXIT_OK
    assert p1.read_bytes() == p2.read_bytes()


def test_cli_lemma_add1_csv(tmp_path):
    out = tmp_path / "row.csv"
    assert main(["lemma-add1", "--alpha", "100", "--out", str(out)]) == EXIT_OK
    header, row = out.read_text().strip().splitlines()
    assert header.split(",")[0] == "alpha"
    vals = row.split(",")
    assert abs(float(vals[1]) - 0.2006) <= 1e-3
    assert abs(float(vals[3]) - 0.5025) <= 1e-3


def test_cli_concentration_json(tmp_path):
    out = tmp_path / "conc.json"
    assert main(["concentration", "--alpha", "40", "--phi", "gaussian",
                 "--out", str(out)]) == EXIT_OK
    d = json.load(open(out))
    assert set(d) == {"alpha", "pairing_lap", "pairing_exp", "split", "phi_at_zero"}


def test_cli_decompose(tmp_path):
    fam = synthesize_family([8, 16, 32], lambda n: [
        bb.BubbleSpec(alpha=float(n), profile=bb.profile_L())])
    fpath = tmp_path / "fam.json"
    ser.write_json(str(fpath), ser.family_to_dict(fam))
    out = tmp_path / "result.json"
    assert main(["decompose", "--in", str(fpath), "--max-profiles", "3",
                 "--stop-frac", "0.1", "--out", str(out)]) == EXIT_OK
    d = json.load(open(out))
    assert len(d["components"]) == 1
    assert d["A_history"][-1] <= 0.1 * d["A_history"][0]


def test_cli_validation_failures(tmp_path):
    missing = tmp_path / "nope.json"
    assert main(["norm", "--in", str(missing), "--which", "L2"]) == EXIT_VALIDATION
    bad = tmp_path / "bad.json"
    bad.write_text('{"grid_s": [0.0, 1.0]}')
    assert main(["norm", "--in", str(bad), "--which", "L2"]) == EXIT_VALIDATION
    assert main(["no-such-command"]) == EXIT_VALIDATION


def test_cli_numerical_failure(tmp_path):
    fpath = tmp_path / "f.json"
    main(["gen-falpha", "--alpha", "30", "--out", str(fpath)])
    # beta far beyond the critical growth overflows the integrand
    assert main(["tm", "--in", str(fpath), "--beta", "1e9"]) == EXIT_NUMERICAL


def test_cli_verify_artifact_deterministic(tmp_path):
    p1, p2 = tmp_path / "v1.json", tmp_path / "v2.json"
    assert main(["verify", "--suite", "falpha", "--seed", "7",
                 "--out", str(p1)]) == EXIT_OK
    assert main(["verify", "--suite", "falpha", "--seed", "7",
                 "--out", str(p2)]) == EXIT_OK
    assert p1.read_bytes() == p2.read_bytes()
    assert json.load(open(p1))["passed"] is True
