import io
import json
import subprocess
import sys

import pytest

from kwgauge.cli import EXIT_ASSERT, EXIT_CAP, EXIT_OK, EXIT_VALIDATION, format_report, parse_and_dispatch, Report
from kwgauge.surface import torus


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = parse_and_dispatch(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def torus_files(tmp_path):
    paths = {}
    for m, n in ((3, 3), (2, 2)):
        p = tmp_path / f"torus{m}x{n}.json"
        p.write_text(torus(m, n).to_json())
        paths[(m, n)] = str(p)
    return paths


def test_kw_check_from_file(torus_files):
    code, out, _ = run(["ising", "kw-check", "--lattice", torus_files[3, 3], "--group", "Z2",
                        "--theta", "1,0.4"])
    assert code == EXIT_OK
    assert "factor: 1" in out
    header = [l for l in out.splitlines() if "lhs" in l][0].split()
    assert header == ["class", "lhs", "rhs", "abs_err"]


def test_validate_bad_lattice(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"vertices": 2, "edges": [[0, 1]], "faces": [[[0, 1]]]}))
    code, out, _ = run(["lattice", "validate", str(bad)])
    assert code == EXIT_VALIDATION
    assert "face length < 2" in out


def test_malformed_json_reports_location(tmp_path):
    bad = tmp_path / "broken.json"
    bad.write_text('{"vertices": 2,\n "edges": [[0, 1]\n')
    code, _, err = run(["lattice", "validate", str(bad)])
    assert code == EXIT_VALIDATION
    assert "broken.json:" in err and ":3:" in err


def test_state_dim(torus_files):
    code, out, _ = run(["tv", "state-dim", "--backend", "vect", "--group", "Z2",
                        "--lattice", torus_files[2, 2]])
    assert code == EXIT_OK and out.strip().splitlines()[-1] == "32"


def test_quiet_emits_only_verdict():
    code, out, _ = run(["ising", "kw-check", "--lattice", "torus:2x3", "--group", "Z3",
                        "--theta", "1,0.3,0.3", "--quiet"])
    assert code == EXIT_OK
    assert len(out.strip().splitlines()) == 1 and out.startswith("PASS")


def test_json_is_deterministic_and_has_manifest(torus_files):
    argv = ["ising", "kw-check", "--lattice", torus_files[3, 3], "--group", "Z2", "--theta", "1,0.4", "--json"]
    a, b = run(argv)[1], run(argv)[1]
    assert a == b
    doc = json.loads(a)
    assert doc["fields"]["factor"] == 1
    man = doc["manifest"]
    assert set(man) == {"argv", "inputs", "tolerances", "caps", "versions"}
    assert torus_files[3, 3] in man["inputs"]
    assert doc["columns"] == ["class", "lhs", "rhs", "abs_err"]
    timed = json.loads(run(argv + ["--timing"])[1])
    assert "wall_time_s" in timed["manifest"]


def test_cap_exit_code(monkeypatch):
    monkeypatch.setenv("KWGAUGE_SPIN_CAP", "10")
    code, _, err = run(["ising", "partition", "--lattice", "torus:3x3", "--group", "Z2", "--theta", "1,0.4"])
    assert code == EXIT_CAP and "cap" in err


def test_failed_check_exit_code():
    code, out, _ = run(["tv", "duality-check", "--group", "S3", "--lattice", "sphere_tetra", "--antipode"])
    assert code == EXIT_ASSERT and out.strip().splitlines()[-1].startswith("FAIL")
    code, out, _ = run(["tv", "duality-check", "--group", "S3", "--lattice", "sphere_tetra"])
    assert code == EXIT_OK


def test_bad_inputs_are_validation_errors():
    assert run(["fourier", "--group", "Z3", "--theta", "1,2"])[0] == EXIT_VALIDATION
    assert run(["fourier", "--group", "Z3", "--theta", "1,x,2"])[0] == EXIT_VALIDATION
    assert run(["ising", "partition", "--lattice", "nowhere", "--group", "Z2", "--theta", "1,1"])[0] == EXIT_VALIDATION
    assert run(["no-such-command"])[0] == EXIT_VALIDATION


@pytest.mark.parametrize("argv,needle", [
    (["fourier", "--group", "Z2", "--theta", "1,0.5"], "dual_element"),
    (["admissible", "--group", "Z5", "--theta", "1,0,0.618033988749895,0.618033988749895,0"], "ADMISSIBLE"),
    (["ising", "vector", "--lattice", "torus:2x2", "--group", "Z2", "--theta", "1,0.5"], "cocycle"),
    (["ising", "vector", "--lattice", "torus:2x2", "--group", "S3", "--theta", "1,.5,.5,.2,.2,.5"], "orbits: 8"),
    (["ising", "transfer", "--group", "Z2", "--theta", "1,0", "--n", "3"], "top_multiplicity: 2"),
    (["tqft", "count", "--group", "S3", "--manifold", "T3"], "bundles: 8"),
    (["tqft", "higher", "--group", "Z2", "--complex", "T3", "--r", "1"], "Z: 4"),
    (["tqft", "emdual", "--group", "Z2", "--complex", "genus:2", "--r", "1"], "ratio: 4"),
    (["tqft", "handlebody", "--group", "Z2", "--theta", "1,1"], "value: 16"),
    (["tqft", "loop", "--group", "Z2", "--lattice", "torus:2x2", "--character", "1"], "value: 0"),
    (["tv", "projector-check", "--backend", "rep", "--group", "Z3", "--lattice", "sphere_tetra"], "PASS rank=1"),
    (["tv", "ising-vector", "--group", "Z2", "--lattice", "sphere_tetra", "--theta", "1,0.5"], "support"),
    (["cohomology", "--group", "Z3", "--lattice", "genus:2"], "orders: [3, 81, 3]"),
    (["cohomology", "--group", "Z2", "--complex", "RP2"], "orders: [2, 2, 2]"),
])
def test_subcommands(argv, needle):
    code, out, _ = run(argv)
    assert code == EXIT_OK, out
    assert needle in out


def test_lattice_gen_and_dual(tmp_path):
    out_file = tmp_path / "g2.json"
    code, out, _ = run(["lattice", "gen", "--kind", "genus", "--g", "2", "--out", str(out_file)])
    assert code == EXIT_OK and "euler: -2" in out
    code, out, _ = run(["lattice", "dual", str(out_file)])
    assert code == EXIT_OK and json.loads(out.strip().splitlines()[-1])["vertices"] == 24


def test_theta_file(tmp_path):
    f = tmp_path / "theta.txt"
    f.write_text("# weights\n1 0.4\n")
    code, out, _ = run(["ising", "partition", "--lattice", "torus:2x2", "--group", "Z2", "--theta", str(f)])
    assert code == EXIT_OK


def test_format_report_table_and_json():
    r = Report("demo", {"x": 1 / 3}, ["a", "b"], [[1, 2.5]])
    text = format_report(r)
    assert "x: 0.333333333333" in text
    doc = json.loads(format_report(r, "json"))
    assert doc["rows"] == [[1, 2.5]] and doc["fields"]["x"] == 0.333333333333


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "kwgauge", "tv", "state-dim", "--group", "Z2",
                          "--lattice", "torus:2x2", "--quiet"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "32"
