import io
import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvgrowth import cli
from mvgrowth.data import ReferenceSeries, Trajectory
from mvgrowth.depth import depth_counts
from mvgrowth.errors import FormatError
from mvgrowth.io import (
    ResultEnvelope,
    format_patient_csv,
    format_reference_csv,
    parse_patient_csv,
    parse_reference_csv,
)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("sim")
    code, out, _ = run("simulate", "--seed", 7, "--n", 200, "--out", d / "demo")
    assert code == 0
    return d / "demo_ref.csv", d / "demo_patient.csv"


# -- CSV ---------------------------------------------------------------------------


def test_parse_reference_example():
    refs = parse_reference_csv("time,x1,x2\n1,5.0,5.0\n1,6.0,4.0\n2,7.0,6.0")
    assert refs.k == 2 and refs.p == 2
    assert [s.shape[0] for s in refs.samples] == [2, 1]
    assert refs.samples[0].tolist() == [[5.0, 5.0], [6.0, 4.0]]


def test_parse_reference_one_dimensional_and_crlf():
    refs = parse_reference_csv("time,x1\r\n3,1.5\r\n3,2.5\r\n\r\n")
    assert refs.p == 1 and refs.samples[0].ravel().tolist() == [1.5, 2.5]


@pytest.mark.parametrize(
    "text, line",
    [
        ("time,x1,x2\n1,5.0,5.0\n1,6.0\n", "line 3"),
        ("time,x1,x2\n1,abc,5.0\n", "line 2"),
        ("time,x1,x2\n1,nan,5.0\n", "line 2"),
        ("t,x1,x2\n1,5.0,5.0\n", "line 1"),
        ("time,x2,x1\n1,5.0,5.0\n", "line 1"),
    ],
)
def test_parse_reference_errors_name_line(text, line):
    with pytest.raises(FormatError, match=line):
        parse_reference_csv(text)


@pytest.mark.parametrize("text", ["", "time,x1\n", "\n\n"])
def test_parse_empty_inputs(text):
    with pytest.raises(FormatError):
        parse_reference_csv(text)


def test_parse_patient():
    traj = parse_patient_csv("time,x1,x2\n3,1,1\n1,2,2\n2,3,3\n")
    assert traj.times == (1.0, 2.0, 3.0)
    assert traj.points[:, 0].tolist() == [2.0, 3.0, 1.0]
    assert parse_patient_csv("time,x1,x2\n4,1,1\n").k == 1
    with pytest.raises(FormatError, match="duplicate time 3"):
        parse_patient_csv("time,x1,x2\n3,1,1\n3,2,2\n")


finite = st.floats(-1e9, 1e9, allow_nan=False, allow_infinity=False)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=20), st.lists(finite, min_size=1, max_size=5, unique=True))
def test_csv_round_trip(points, times):
    times = sorted(times)
    refs = ReferenceSeries(times, [np.array(points) + i for i in range(len(times))])
    back = parse_reference_csv(format_reference_csv(refs))
    assert back.times == refs.times
    for a, b in zip(back.samples, refs.samples):
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=0)
    traj = Trajectory(times, [points[0]] * len(times))
    assert parse_patient_csv(format_patient_csv(traj)) == traj


def test_envelope_round_trip():
    env = ResultEnvelope("profile", {"q": [0.123456789012345, 1.0], "n": 3}, {"ref": "sha256:ab"}, "0.1.0", 4)
    assert ResultEnvelope.from_json(env.to_json()) == env
    with pytest.raises(FormatError):
        ResultEnvelope.from_json("{}")
    with pytest.raises(FormatError):
        ResultEnvelope.from_json("not json")


# -- run() ---------------------------------------------------------------------------


def test_simulate_is_byte_identical(tmp_path):
    for name in ("a", "b"):
        code, out, _ = run("simulate", "--seed", 7, "--n", 50, "--out", tmp_path / name)
        assert code == 0
        assert json.loads(out)["seed"] == 7
    for suffix in ("_ref.csv", "_patient.csv"):
        assert (tmp_path / f"a{suffix}").read_bytes() == (tmp_path / f"b{suffix}").read_bytes()


def test_direction_command(files):
    ref, patient = files
    code, out, _ = run("direction", "--ref", ref, "--patient", patient, "--angles", 500)
    assert code == 0
    env = json.loads(out)
    payload = env["payload"]
    for key in ("direction", "objective", "q", "q_tilde", "angle", "grid_index"):
        assert key in payload
    assert len(payload["q"]) == len(payload["q_tilde"]) == 4
    assert env["seed"] is None  # exact depth, grid search: seed unused
    assert env["inputs"]["ref"].startswith("sha256:")
    assert payload["objective"] == pytest.approx(sum((a - b) ** 2 for a, b in zip(payload["q"], payload["q_tilde"])))


def test_direction_sphere_search_records_seed(files):
    ref, patient = files
    code, out, _ = run("direction", "--ref", ref, "--patient", patient, "--search", "sphere", "--dirs", 100, "--seed", 3)
    assert code == 0
    env = json.loads(out)
    assert env["seed"] == 3 and env["payload"]["search"] == "sphere"


def test_profile_of_deepest_points(tmp_path, files):
    ref, _ = files
    refs = parse_reference_csv(ref.read_text())
    deepest = [s[np.argmax(depth_counts(s))] for _, s in refs]
    pat = tmp_path / "deep.csv"
    pat.write_text(format_patient_csv(Trajectory(refs.times, deepest)))
    code, out, _ = run("profile", "--ref", ref, "--patient", pat)
    assert code == 0
    assert json.loads(out)["payload"]["q"] == [1.0] * 4


def test_depth_and_region_commands(files):
    ref, patient = files
    code, out, _ = run("depth", "--ref", ref)
    assert code == 0
    results = json.loads(out)["payload"]["results"]
    assert len(results) == 4 and all(len(r["counts"]) == 200 for r in results)
    code, out, _ = run("depth", "--ref", ref, "--patient", patient)
    assert code == 0 and json.loads(out)["payload"]["mode"] == "patient"
    code, out, _ = run("region", "--ref", ref, "--p-level", 0.5)
    assert code == 0
    assert all(r["coverage"] >= 0.5 for r in json.loads(out)["payload"]["regions"])


def test_approx_method_records_seed(files):
    ref, _ = files
    code, out, _ = run("depth", "--ref", ref, "--method", "approx", "--dirs", 50, "--seed", 9)
    assert code == 0 and json.loads(out)["seed"] == 9


@pytest.mark.parametrize("chart", cli.CHARTS)
def test_chart_commands(tmp_path, files, chart):
    ref, patient = files
    outs = []
    for name in ("a", "b"):
        code, out, err = run("chart", "--ref", ref, "--patient", patient, "--chart", chart, "--out", tmp_path / name)
        assert code == 0, err
        outs.append(json.loads(out)["payload"]["files"])
    for fa, fb in zip(*outs):
        data = open(fa, "rb").read()
        ET.fromstring(data)
        assert data == open(fb, "rb").read()
    assert len(outs[0]) == (4 if chart == "extremes" else 1)


def test_chart_with_explicit_direction(tmp_path, files):
    ref, patient = files
    code, out, _ = run("chart", "--ref", ref, "--patient", patient, "--chart", "projected", "--direction=-1,0.9", "--out", tmp_path / "p")
    assert code == 0
    assert json.loads(out)["payload"]["direction"][0] > 0


def test_identical_stdout_across_runs(files):
    ref, patient = files
    a = run("profile", "--ref", ref, "--patient", patient)
    b = run("profile", "--ref", ref, "--patient", patient)
    assert a == b


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["depth", "--bogus"],
        ["direction", "--ref", "x.csv"],
        ["depth", "--ref", "missing.csv"],
        ["region", "--ref", "REF", "--p-level", "1.5"],
        ["chart", "--ref", "REF", "--chart", "projected", "--out", "o"],
        ["chart", "--ref", "REF", "--patient", "PAT", "--chart", "projected", "--direction", "a,b", "--out", "o"],
        ["depth", "--ref", "REF", "--method", "exact", "--dirs", "0"],
        ["profile", "--ref", "REF", "--patient", "BAD"],
    ],
)
def test_input_errors_exit_2(argv, files, tmp_path):
    ref, patient = files
    bad = tmp_path / "bad.csv"
    bad.write_text("time,x1\n1,2\n")
    subs = {"REF": ref, "PAT": patient, "BAD": bad}
    code, out, err = run(*[subs.get(a, a) for a in argv])
    assert code == 2
    assert out == ""
    assert err


def test_internal_error_exit_1(monkeypatch, files):
    ref, _ = files

    def boom(args, ctx):
        raise RuntimeError("boom")

    monkeypatch.setitem(cli._COMMANDS, "depth", boom)
    code, out, err = run("depth", "--ref", ref)
    assert code == 1 and out == "" and "boom" in err


def test_json_numbers_keep_precision(files):
    ref, patient = files
    _, out, _ = run("direction", "--ref", ref, "--patient", patient, "--angles", 7)
    payload = json.loads(out)["payload"]
    x = payload["direction"][0]
    assert repr(x) in out
