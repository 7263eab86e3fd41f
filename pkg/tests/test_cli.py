import json
import math

import pytest

from segcap.cli import JobSpec, _fmt_float, main

E2 = "-1,-0.92387953251128674,-0.38268343236508978,0.38268343236508978,0.92387953251128674,1"


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_cap_unit_interval(capsys):
    code, out = run(capsys, "cap", "--endpoints", "0,1")
    assert code == 0
    rep = json.loads(out)
    assert rep["capacity"] == 0.25 and rep["genus"] == 0
    assert {"capacity", "genus", "divisor_indices", "theta_tol", "quadrature_nodes", "diagnostics"} <= set(rep)


def test_cap_e2_true_value(capsys):
    code, out = run(capsys, "cap", "--endpoints", E2)
    rep = json.loads(out)
    assert code == 0
    assert abs(rep["capacity"] - 2 ** -1.25) < 1e-10
    assert rep["divisor_indices"] == [2]


def test_negative_endpoints_without_equals_sign(capsys):
    code, out = run(capsys, "cap", "--endpoints", "-1,-0.6,0.6,1")
    assert code == 0
    assert abs(json.loads(out)["capacity"] - 0.4) < 1e-12


def test_repeated_endpoints_flag(capsys):
    code, out = run(capsys, "cap", "--endpoints", "0,0.3", "--endpoints", "0.5,1")
    assert code == 0 and json.loads(out)["genus"] == 1


def test_odd_endpoint_count(capsys):
    code, out = run(capsys, "cap", "--endpoints", "0,1,2")
    assert code == 2
    err = json.loads(out)
    assert err["error"] == "ODD_ENDPOINT_COUNT" and err["module"] == "segments"


@pytest.mark.parametrize("argv, code", [
    (["cap"], "BAD_ARGUMENTS"),
    (["cap", "--endpoints", "0,1", "--input", "x.json"], "BAD_ARGUMENTS"),
    (["cap", "--endpoints", "0,a"], "NON_NUMERIC_ENDPOINT"),
    (["cap", "--endpoints", "0,1", "--theta-tol", "0"], "BAD_ARGUMENTS"),
    (["cap", "--endpoints", "0,1", "--nodes", "2"], "BAD_ARGUMENTS"),
    (["cap", "--endpoints", "0,1,2,3,4,5", "--divisor", "1"], "BAD_DIVISOR"),
    (["frobnicate"], "BAD_ARGUMENTS"),
    (["periods", "--endpoints", "0,1"], "GENUS_ZERO_NO_PERIODS"),
])
def test_input_errors_exit_2(capsys, argv, code):
    status, out = run(capsys, *argv)
    assert status == 2
    assert json.loads(out)["error"] == code


def test_missing_input_file_is_io_error(capsys, tmp_path):
    status, out = run(capsys, "cap", "--input", str(tmp_path / "missing.json"))
    assert status == 4
    assert json.loads(out)["error"] == "IO_ERROR"


def test_input_file_forms(capsys, tmp_path):
    a = tmp_path / "a.json"
    a.write_text('{"endpoints": [0, 0.3, 0.5, 1]}')
    b = tmp_path / "b.json"
    b.write_text("[0, 0.3, 0.5, 1]")
    _, out_a = run(capsys, "cap", "--input", str(a))
    _, out_b = run(capsys, "cap", "--input", str(b))
    assert out_a == out_b
    c = tmp_path / "c.json"
    c.write_text("{not json")
    status, out = run(capsys, "cap", "--input", str(c))
    assert status == 2 and json.loads(out)["error"] == "BAD_INPUT_FILE"


def test_output_file(capsys, tmp_path):
    path = tmp_path / "rep.json"
    status, out = run(capsys, "cap", "--endpoints", "0,1", "--out", str(path))
    assert status == 0 and out == ""
    assert json.loads(path.read_text())["capacity"] == 0.25


def test_determinism(capsys):
    _, a = run(capsys, "cap", "--endpoints", E2)
    _, b = run(capsys, "cap", "--endpoints", E2)
    assert a == b


def test_seventeen_significant_digits(capsys):
    _, out = run(capsys, "cap", "--endpoints", E2)
    line = next(ln for ln in out.splitlines() if '"capacity"' in ln)
    digits = line.split(":")[1].strip().rstrip(",").lstrip("0.").replace(".", "")
    assert len(digits.split("e")[0]) == 17
    assert _fmt_float(0.25) == "0.25" and _fmt_float(2.0) == "2.0"
    assert float(_fmt_float(math.pi)) == math.pi


def test_green_single_point_classical(capsys):
    code, out = run(capsys, "green", "--endpoints", "-1,1", "--x-range", "2,2", "--resolution", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x,y,G"
    x, y, g = map(float, lines[1].split(","))
    assert (x, y) == (2.0, 0.0)
    assert abs(g - math.log(2 + math.sqrt(3))) < 1e-14


def test_green_on_set_is_zero(capsys):
    code, out = run(capsys, "green", "--endpoints", "0,1", "--x-range", "0,1", "--resolution", "11")
    assert code == 0
    assert all(float(r.split(",")[2]) < 1e-14 for r in out.splitlines()[1:])


def test_green_grid_row_major_and_worker_independent(capsys):
    args = ["green", "--endpoints", E2, "--x-range", "-1.5,1.5", "--y-range", "0,0.5",
            "--resolution", "7,3"]
    _, serial = run(capsys, *args)
    _, parallel = run(capsys, *args, "--workers", "3")
    assert serial == parallel
    rows = [tuple(map(float, r.split(","))) for r in serial.splitlines()[1:]]
    assert len(rows) == 21
    assert [r[1] for r in rows[:7]] == [0.0] * 7
    assert rows[7][1] == 0.25 and rows[1][0] > rows[0][0]


def test_green_grid_matches_oracle(capsys):
    from segcap.oracles import chebyshev_oracle, polynomial_preimage_green
    _, out = run(capsys, "green", "--endpoints", E2, "--x-range", "-2,2", "--y-range", "0.1,1",
                 "--resolution", "9,4")
    S = chebyshev_oracle(2)
    for r in out.splitlines()[1:]:
        x, y, g = map(float, r.split(","))
        assert abs(g - polynomial_preimage_green(S, complex(x, y))) < 1e-8


def test_grid_overflow(capsys):
    status, out = run(capsys, "green", "--endpoints", "0,1", "--resolution", "10000,10000")
    assert status == 2 and json.loads(out)["error"] == "GRID_OVERFLOW"


def test_periods_e3(capsys):
    from segcap.oracles import chebyshev_preimage_set
    E3 = ",".join(repr(v) for v in chebyshev_preimage_set(3).endpoints)
    status, out = run(capsys, "periods", "--endpoints", E3)
    assert status == 0
    rep = json.loads(out)
    im = rep["Pi_imag"]
    assert len(im) == 3
    assert all(abs(im[i][j] - im[j][i]) < 1e-10 for i in range(3) for j in range(3))
    assert abs(im[1][1] - 0.8333333333333) < 1e-9


def test_cap_csv(capsys):
    _, out = run(capsys, "cap", "--endpoints", "0,1", "--format", "csv")
    assert out == "capacity,genus\n0.25,0.0\n"


def test_jobspec_invariants():
    with pytest.raises(Exception):
        JobSpec(command="cap")
    with pytest.raises(Exception):
        JobSpec(command="cap", endpoints=(0.0, 1.0), theta_tol=-1.0)


@pytest.mark.slow
def test_verify_default_passes(capsys):
    status, out = run(capsys, "verify")
    assert status == 0
    assert out.strip().endswith("ALL PASS")


@pytest.mark.slow
def test_verify_divisor_override(capsys):
    status, out = run(capsys, "verify", "--divisor", "3", "--format", "json")
    rep = json.loads(out)
    assert status == 0 and rep["divisor_override"] == [3]
