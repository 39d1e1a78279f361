# ABOUTME: Tests for the command-line entry point
# ABOUTME: Exit codes, output files and summary lines for every subcommand

import json

from app.main import run


def _write_curve(path, values_of_t):
    lines = ["t,E"]
    for i in range(200):
        t = 40.0 * i / 199
        lines.append(f"{t!r},{values_of_t(t)!r}")
    path.write_text("\n".join(lines) + "\n")


class TestExitCodes:
    """Usage errors exit 1, numerical failures 2, undetermined 3"""

    def test_help_exits_zero(self, capsys):
        """--help prints usage and succeeds"""
        assert run(["--help"]) == 0
        assert "regime" in capsys.readouterr().out

    def test_unknown_flag(self, capsys):
        """Unknown flags are rejected before any computation"""
        assert run(["regime", "--system", "decay", "--t-final", "1", "--h", "0.1", "--bogus"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_missing_required_flag(self):
        """regime needs --t-final and --h"""
        assert run(["regime", "--system", "decay"]) == 1

    def test_unknown_system(self, capsys):
        """Unknown systems list the valid names"""
        assert run(["regime", "--system", "duffing", "--t-final", "1", "--h", "0.1"]) == 1
        assert "decay" in capsys.readouterr().err

    def test_epsilon_zero_rejected(self, capsys):
        """The bound needs eps > 0"""
        code = run([
            "bound-check", "--system", "decay", "--method", "rk4",
            "--t-final", "20", "--h0", "0.05", "--epsilon", "0",
        ])

        assert code == 1
        assert "any ε > 0" in capsys.readouterr().err

    def test_blow_up_exits_two(self, capsys):
        """Overflowing integrations are numerical failures"""
        code = run(["integrate", "--system", "expand", "--method", "euler", "--t-final", "2000", "--h", "1"])

        assert code == 2
        assert "blew up" in capsys.readouterr().err

    def test_bad_x0(self):
        """--x0 must match the system dimension"""
        assert run(["integrate", "--system", "vdp", "--t-final", "1", "--h", "0.1", "--x0", "1,2,3"]) == 1
        assert run(["integrate", "--system", "vdp", "--t-final", "1", "--h", "0.1", "--x0", "a,b"]) == 1

    def test_json_needs_a_file_for_csv(self):
        """stdout cannot carry both CSV and JSON"""
        assert run(["integrate", "--system", "decay", "--t-final", "1", "--h", "0.1", "--json"]) == 1

    def test_svg_needs_out(self):
        """Charts are written next to --out"""
        assert run(["regime", "--system", "decay", "--t-final", "5", "--h", "0.01", "--svg"]) == 1


class TestCommands:
    """Tests for each subcommand"""

    def test_list_systems_table(self, capsys):
        """Table lists every system with its regime"""
        assert run(["list-systems"]) == 0
        out = capsys.readouterr().out

        for name in ("decay", "vdp", "torus4", "lorenz", "zero"):
            assert name in out
        assert "fixed-point" in out

    def test_list_systems_json(self, capsys):
        """JSON lists dimension, x0 and Jacobian check errors"""
        assert run(["list-systems", "--json", "--seed", "3"]) == 0
        payload = json.loads(capsys.readouterr().out)

        vdp = next(s for s in payload["systems"] if s["name"] == "vdp")
        assert vdp["dimension"] == 2
        assert vdp["default_x0"] == [0.5, 0.0]
        assert vdp["jacobian_error"] < 1e-5

    def test_regime_decay(self, capsys):
        """decay is Constant"""
        assert run(["regime", "--system", "decay", "--t-final", "40", "--h", "0.01"]) == 0

        assert capsys.readouterr().out.startswith("class=Constant")

    def test_classify_linear_csv(self, tmp_path, capsys):
        """E(t) = t samples classify as Linear"""
        path = tmp_path / "linear.csv"
        _write_curve(path, lambda t: t)

        assert run(["classify", "--in", str(path)]) == 0
        assert capsys.readouterr().out.startswith("class=Linear")

    def test_classify_undetermined_exits_three(self, tmp_path, capsys):
        """Quadratic growth matches no class"""
        path = tmp_path / "quadratic.csv"
        _write_curve(path, lambda t: t * t)

        assert run(["classify", "--in", str(path)]) == 3
        assert capsys.readouterr().out.startswith("class=Undetermined")

    def test_condition_writes_csv_sidecar_and_svg(self, tmp_path, capsys):
        """condition emits t,E,logE, a JSON report and a chart"""
        out = tmp_path / "curve.csv"
        code = run([
            "condition", "--system", "rotation", "--t-final", "20", "--h", "0.01",
            "--out", str(out), "--svg",
        ])

        assert code == 0
        assert out.read_text().splitlines()[0] == "t,E,logE"
        sidecar = json.loads((tmp_path / "curve.json").read_text())
        assert sidecar["growth"]["class"] == "Linear"
        assert sidecar["system"] == "rotation"
        assert (tmp_path / "curve.svg").read_text().startswith("<svg")
        assert capsys.readouterr().out.startswith("class=Linear")

        assert run(["classify", "--in", str(out)]) == 0

    def test_integrate_is_deterministic(self, tmp_path):
        """Same argv gives byte-identical files"""
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        argv = ["integrate", "--system", "vdp", "--t-final", "5", "--h", "0.01"]

        assert run(argv + ["--out", str(first)]) == 0
        assert run(argv + ["--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()
        assert len(first.read_text().splitlines()) == 502

    def test_integrate_reference(self, tmp_path, capsys):
        """--reference writes the certified solution at query times"""
        out = tmp_path / "ref.csv"
        code = run([
            "integrate", "--system", "decay", "--t-final", "1", "--h", "0.1",
            "--reference", "--queries", "11", "--out", str(out),
        ])

        assert code == 0
        assert out.read_text().splitlines()[-1] == "1,0.36787944117144233"
        assert "kind=exact" in capsys.readouterr().out

    def test_convergence(self, tmp_path, capsys):
        """convergence writes h,max_error,observed_order"""
        out = tmp_path / "conv.csv"
        code = run([
            "convergence", "--system", "decay", "--method", "rk4",
            "--t-final", "1", "--h0", "0.1", "--levels", "4", "--out", str(out), "--json",
        ])

        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "h,max_error,observed_order"
        assert len(lines) == 5
        captured = capsys.readouterr().out
        payload = json.loads(captured[captured.index("{"):])
        assert all(3.7 <= p <= 4.3 for p in payload["observed_orders"])

    def test_bound_check_decay(self, tmp_path):
        """rk4 on decay verifies the bound and writes h,K plus JSON"""
        out = tmp_path / "bound.csv"
        code = run([
            "bound-check", "--system", "decay", "--method", "rk4",
            "--t-final", "20", "--h0", "0.05", "--epsilon", "0.01", "--out", str(out),
        ])

        assert code == 0
        assert out.read_text().splitlines()[0] == "h,K"
        report = json.loads((tmp_path / "bound.json").read_text())
        assert report["verified"] is True
        assert report["study"]["system"] == "decay"


class TestOutputFiles:
    """Unwritable paths are usage errors, not tracebacks"""

    def test_unwritable_out(self, tmp_path, capsys):
        """A missing directory for --out exits 1"""
        out = tmp_path / "missing" / "x.csv"
        code = run(["integrate", "--system", "decay", "--t-final", "1", "--h", "0.1", "--out", str(out)])

        assert code == 1
        assert "Cannot write" in capsys.readouterr().err

    def test_unwritable_svg(self, tmp_path):
        """Chart writes fail the same way"""
        out = tmp_path / "dir.csv"
        (tmp_path / "dir.svg").mkdir()
        code = run(["integrate", "--system", "decay", "--t-final", "1", "--h", "0.1", "--out", str(out), "--svg"])

        assert code == 1

    def test_missing_input(self, tmp_path):
        """classify on a missing file exits 1"""
        assert run(["classify", "--in", str(tmp_path / "nope.csv")]) == 1

    def test_convergence_error_curve(self, tmp_path):
        """--errors writes t,error for the finest level next to --out"""
        out = tmp_path / "conv.csv"
        code = run([
            "convergence", "--system", "decay", "--method", "euler",
            "--t-final", "1", "--h0", "0.1", "--levels", "3", "--out", str(out), "--errors",
        ])

        assert code == 0
        lines = (tmp_path / "conv.errors.csv").read_text().splitlines()
        assert lines[0] == "t,error"
        assert lines[1].startswith("0,0")
        assert 0.0 < float(lines[-1].split(",")[1]) < 0.01

    def test_error_curve_needs_out(self):
        """--errors cannot go to stdout"""
        code = run([
            "convergence", "--system", "decay", "--t-final", "1", "--h0", "0.1", "--errors",
        ])
        assert code == 1
