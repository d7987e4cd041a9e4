"""Command-line interface, exercised in process through main(argv)."""

import importlib.resources
import json
import math

import pytest

from qcyclo.cli import T3_TRUTH, main
from qcyclo.compiler import SixJLabels, compile_sixj, dcr_from_json

from conftest import racah_sixj_squared

DATA = importlib.resources.files("qcyclo") / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestEval:
    def test_reference_row_json(self, capsys):
        code, out, _ = run(capsys, "eval", "--spins", ",".join(["60"] * 6),
                           "--level", "500", "--engine", "dcr-mp",
                           "--bits", "512", "--format", "json")
        assert code == 0
        obj = json.loads(out)
        assert obj["bits"] == 512
        got = obj["amplitude"]["re"]
        assert abs(got - T3_TRUTH[30]) <= 5e-4 * abs(T3_TRUTH[30])
        assert abs(obj["amplitude"]["im"]) < 1e-30
        # the emitted DCR is the compiled object, losslessly embedded
        assert dcr_from_json(json.dumps(obj["dcr"])) \
            == compile_sixj(SixJLabels(*[60] * 6))

    def test_default_bits(self, capsys):
        code, out, _ = run(capsys, "eval", "--spins", "2,2,2,2,2,2",
                           "--level", "5", "--format", "json")
        assert code == 0
        assert json.loads(out)["bits"] == 256

    def test_classical_engine_prints_rational_parts(self, capsys):
        code, out, _ = run(capsys, "eval", "--spins", "2,2,2,2,2,2",
                           "--level", "5", "--engine", "classical")
        assert code == 0
        a_line = next(l for l in out.splitlines() if l.startswith("a "))
        r_line = next(l for l in out.splitlines() if l.startswith("r "))
        amp_line = next(l for l in out.splitlines()
                        if l.startswith("amplitude"))
        from fractions import Fraction
        a = Fraction(a_line.split()[1])
        r = Fraction(r_line.split()[1])
        square, sign = racah_sixj_squared((2,) * 6)
        assert a * a * r == square
        got = float(amp_line.split()[1].split("e")[0] + "e"
                    + amp_line.split()[1].split("e")[1])
        assert (got > 0) - (got < 0) == sign

    def test_exact_engine_parts(self, capsys):
        code, out, _ = run(capsys, "eval", "--spins", "2,2,2,2,2,2",
                           "--level", "5", "--engine", "exact", "--parts",
                           "--format", "json")
        assert code == 0
        obj = json.loads(out)
        assert all(isinstance(c, str) for c in obj["parts"]["a_coeffs"])
        assert len(obj["parts"]["a_coeffs"]) >= 1

    def test_engines_agree(self, capsys):
        vals = {}
        for engine in ("dcr-f64", "dcr-mp", "lse-f64", "lse-mp", "exact"):
            code, out, _ = run(capsys, "eval", "--spins", "2,2,4,3,1,3",
                               "--level", "6", "--engine", engine,
                               "--format", "json")
            assert code == 0
            vals[engine] = json.loads(out)["amplitude"]["re"]
        base = vals["dcr-mp"]
        for engine, v in vals.items():
            assert abs(v - base) <= 1e-9 * abs(base), engine

    def test_inadmissible_parity_exit_2(self, capsys):
        code, _, err = run(capsys, "eval", "--spins", "1,1,1,1,1,1",
                           "--level", "8")
        assert code == 2
        assert "inadmissible input" in err

    def test_pole_exit_2(self, capsys):
        code, _, err = run(capsys, "eval", "--spins", "4,4,4,4,4,4",
                           "--level", "2")
        assert code == 2
        assert "inadmissible input" in err

    def test_bits_rejected_for_double_engine(self, capsys):
        code, _, err = run(capsys, "eval", "--spins", "2,2,2,2,2,2",
                           "--level", "5", "--engine", "dcr-f64",
                           "--bits", "128")
        assert code == 2
        assert "configuration error" in err

    def test_usage_error_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["eval", "--spins", "2,2,2,2,2,2", "--level", "5",
                  "--engine", "nope"])
        assert exc.value.code == 2

    def test_bad_spin_count_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["eval", "--spins", "2,2,2", "--level", "5"])
        assert exc.value.code == 2


class TestCompile:
    def test_round_trip(self, capsys):
        code, out, _ = run(capsys, "compile", "--spins", "2,2,4,3,1,3")
        assert code == 0
        assert dcr_from_json(out) == compile_sixj(SixJLabels(2, 2, 4, 3, 1, 3))

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "dcr.json"
        code, out, _ = run(capsys, "compile", "--spins", "2,2,2,2,2,2",
                           "--output", str(target))
        assert code == 0 and out == ""
        assert dcr_from_json(target.read_text()) \
            == compile_sixj(SixJLabels(*[2] * 6))


class TestSweep:
    def test_single_point_matches_eval(self, capsys):
        theta = math.pi / 7
        code, out, _ = run(capsys, "sweep", "--spins", "2,2,2,2,2,2",
                           "--start", repr(theta), "--stop", repr(theta),
                           "--count", "1", "--format", "csv")
        assert code == 0
        lines = out.splitlines()
        row = lines[1].split(",")
        sweep_val = complex(float(row[3]), float(row[4]))
        code, out, _ = run(capsys, "eval", "--spins", "2,2,2,2,2,2",
                           "--level", "5", "--engine", "dcr-f64",
                           "--format", "json")
        assert code == 0
        want = json.loads(out)["amplitude"]
        assert abs(sweep_val - complex(want["re"], want["im"])) \
            <= 1e-9 * (1 + abs(sweep_val))

    def test_compiles_once_footer(self, capsys):
        code, out, _ = run(capsys, "sweep", "--spins", "2,2,2,2,2,2",
                           "--start", "0.3", "--stop", "1.2", "--count", "8",
                           "--format", "csv")
        assert code == 0
        footer = [l for l in out.splitlines() if l.startswith("#")]
        assert len(footer) == 1
        assert "compiles=1" in footer[0]
        assert "points=8" in footer[0]
        assert float(footer[0].split("proj_us_per_point=")[1]) > 0

    @pytest.mark.parametrize("engine", ("dcr-f64", "dcr-mp"))
    def test_pole_row_isolated(self, capsys, engine):
        # theta = pi/3 pins q at the h = 3 root where the radicand has a
        # pole; the other grid points must come through untouched
        theta = math.pi / 3
        code, out, _ = run(capsys, "sweep", "--spins", "2,2,2,2,2,2",
                           "--start", repr(theta), "--stop", "1.5",
                           "--count", "3", "--engine", engine,
                           "--format", "csv")
        assert code == 0
        rows = [l.split(",") for l in out.splitlines()[1:] if l[:1] != "#"]
        assert [r[5] for r in rows] == ["ERROR", "ok", "ok"]
        assert rows[0][3] == "" and float(rows[1][3]) != 0.0

    def test_real_axis_grid(self, capsys):
        code, out, _ = run(capsys, "sweep", "--spins", "2,2,2,2,2,2",
                           "--start", "1.05", "--stop", "1.25", "--count",
                           "3", "--real-axis", "--format", "json")
        assert code == 0
        pts = json.loads(out)["points"]
        assert [p["status"] for p in pts] == ["ok"] * 3
        assert float(pts[0]["q_im"]) == 0.0


class TestDiag:
    def test_json_fields(self, capsys):
        code, out, _ = run(capsys, "diag", "--spins", "8,8,8,8,8,8",
                           "--level", "20", "--bits", "256",
                           "--format", "json")
        assert code == 0
        obj = json.loads(out)
        for key in ("kappa", "delta_loss", "gamma_eager", "gamma_dcr",
                    "max_term", "abs_sum", "value"):
            assert key in obj
        assert obj["kappa"] >= 1.0
        assert obj["gamma_dcr"] <= obj["gamma_eager"]


class TestTable:
    def test_t1_against_published(self, capsys):
        code, out, _ = run(capsys, "table", "t1", "--format", "json")
        assert code == 0
        rows = json.loads(out)["rows"]
        assert [r["j"] for r in rows] == [50, 100]
        for row in rows:
            assert (abs(float(row["max_term"]) - float(row["ref_max_term"]))
                    <= 0.01 * float(row["ref_max_term"]))
            assert (abs(float(row["delta_loss"]) - float(row["ref_delta_loss"]))
                    <= 0.1)


class TestTv:
    def test_bundled_ball(self, capsys):
        code, out, _ = run(capsys, "tv", "--triangulation",
                           str(DATA / "ball_1tet.json"), "--level", "5")
        assert code == 0
        lines = dict(l.split(None, 1) for l in out.splitlines())
        assert float(lines["value_re"]) != 0.0
        assert lines["colorings"] == "1"

    def test_missing_file_exit_1(self, capsys):
        code, _, err = run(capsys, "tv", "--triangulation",
                           "/nonexistent/tri.json", "--level", "3")
        assert code == 1
        assert "error" in err

    def test_malformed_file_exit_1(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"num_vertices": 1}')
        code, _, err = run(capsys, "tv", "--triangulation", str(bad),
                           "--level", "3")
        assert code == 1
        assert "internal error" in err and "missing" in err

    def test_no_weights_flag(self, capsys):
        path = str(DATA / "ball_1tet.json")
        code, out, _ = run(capsys, "tv", "--triangulation", path,
                           "--level", "5", "--format", "json")
        weighted = json.loads(out)["value_re"]
        code, out, _ = run(capsys, "tv", "--triangulation", path,
                           "--level", "5", "--no-weights", "--format", "json")
        bare = json.loads(out)["value_re"]
        assert code == 0
        assert abs(float(weighted)) != pytest.approx(abs(float(bare)))
