"""
Tests for the command-line interface
"""

import csv
import io
import json
import logging
import math
import tempfile
from pathlib import Path
from unittest import mock

import pytest

from qdslim import __version__
from qdslim.cli import QdslimCLI
from qdslim.cli import main


def run(args):
    return QdslimCLI().run_with_args(args)


def result_of(capsys):
    return json.loads(capsys.readouterr().out)["result"]


def rows_of(capsys):
    return list(csv.DictReader(io.StringIO(capsys.readouterr().out)))


class TestCLIBasics:
    """Test global flags and exit codes"""

    def test_version(self, capsys):
        """--version prints the package version and exits 0"""
        assert run(["--version"]) == 0
        assert __version__ in capsys.readouterr().out

    def test_missing_command(self):
        """A missing subcommand is a usage error"""
        assert run([]) == 2

    def test_bad_number_list(self):
        """Malformed number lists are usage errors"""
        assert run(["gibbs", "beta", "--spectrum", "ho", "--E", "abc"]) == 2

    def test_unexpected_error(self, capsys):
        """main maps unexpected exceptions to exit code 1"""
        with mock.patch.object(QdslimCLI, "run_with_args", side_effect=RuntimeError("boom")):
            assert main(["bounds"]) == 1
        assert "Unexpected error: boom" in capsys.readouterr().err

    def test_keyboard_interrupt(self, capsys):
        """Ctrl-C exits with code 1"""
        with mock.patch.object(QdslimCLI, "run_with_args", side_effect=KeyboardInterrupt):
            assert main([]) == 1
        assert "cancelled" in capsys.readouterr().err


class TestBoundsCommand:
    """Test bound evaluation"""

    def test_closed(self, capsys):
        """bounds closed --alpha 0.5 --E 1 --dt 0.04 gives 0.8"""
        assert run(["bounds", "closed", "--alpha", "0.5", "--E", "1", "--dt", "0.04"]) == 0
        result = result_of(capsys)
        assert math.isclose(result["bound"], 0.8)
        assert math.isclose(result["divergences"]["bures_distance"], math.sqrt(0.8))

    def test_vn_alias(self, capsys):
        """bounds vn is the same bound"""
        assert run(["bounds", "vn", "--alpha", "0.5", "--E", "1", "--dt", "0.04"]) == 0
        assert math.isclose(result_of(capsys)["bound"], 0.8)

    def test_open(self, capsys):
        """bounds open --alpha 1 --a 0 --b 0 --c 0 --E 2 gives 8"""
        args = ["bounds", "open", "--alpha", "1", "--a", "0", "--b", "0", "--c", "0", "--E", "2"]
        assert run(args) == 0
        result = result_of(capsys)
        assert math.isclose(result["omega"], 8.0)
        assert math.isclose(result["bound"], 8.0)

    def test_speedlimit(self, capsys):
        """Schrodinger speed limit at theta = pi/2"""
        args = ["bounds", "speedlimit", "--case", "schrodinger", "--alpha", "0.5"]
        assert run(args + ["--theta", "1.5707963", "--E", "1"]) == 0
        assert math.isclose(result_of(capsys)["bound"], 0.5, rel_tol=1e-6)

    def test_pure_outside_window(self, capsys):
        """A dt beyond the pure-state window is a computational failure"""
        assert run(["bounds", "pure", "--alpha", "0.5", "--E", "1", "--dt", "1"]) == 1
        assert "max admissible dt" in capsys.readouterr().err

    def test_purity(self, capsys):
        """Purity minimal time"""
        args = ["bounds", "purity", "--alpha", "1", "--E", "2", "--c", "0"]
        assert run(args + ["--p-start", "1", "--p-fin", "0.2"]) == 0
        assert math.isclose(result_of(capsys)["minimal_time"], 0.1)

    def test_divergences(self, capsys):
        """Divergence bounds from a trace bound"""
        assert run(["bounds", "divergences", "--trace-bound", "1"]) == 0
        assert math.isclose(result_of(capsys)["bures_angle"], math.pi / 3.0)

    def test_bad_alpha(self, capsys):
        """alpha outside (0, 1] exits with code 1"""
        assert run(["bounds", "closed", "--alpha", "1.5", "--E", "1", "--dt", "0.1"]) == 1
        assert "alpha" in capsys.readouterr().err


class TestGibbsCommand:
    """Test Gibbs sweeps"""

    def test_beta_csv(self, capsys):
        """gibbs beta on the oscillator at E = 1 gives ln 3"""
        assert run(["gibbs", "beta", "--spectrum", "ho", "--E", "1,2"]) == 0
        rows = rows_of(capsys)
        assert len(rows) == 2
        assert math.isclose(float(rows[0]["beta"]), math.log(3.0), rel_tol=1e-10)

    def test_entropy_csv(self, capsys):
        """gibbs entropy lists S(gamma(E))"""
        assert run(["gibbs", "entropy", "--spectrum", "number", "--E", "1"]) == 0
        rows = rows_of(capsys)
        assert math.isclose(float(rows[0]["entropy"]), 2.0 * math.log(2.0), rel_tol=1e-9)

    def test_infeasible_energy(self, capsys):
        """E at the ground energy exits with code 1"""
        assert run(["gibbs", "beta", "--spectrum", "ho", "--E", "0.5"]) == 1
        assert "ground energy" in capsys.readouterr().err

    def test_unknown_spectrum(self, capsys):
        """Unknown spectra exit with code 1 and a suggestion"""
        assert run(["gibbs", "beta", "--spectrum", "numbr", "--E", "1"]) == 1

    def test_eta(self, capsys):
        """gibbs eta reports eta close to 1 for the oscillator"""
        assert run(["gibbs", "eta", "--spectrum", "ho", "--cutoff", "4000"]) == 0
        assert math.isclose(result_of(capsys)["eta"], 1.0, rel_tol=2e-2)

    def test_asymptotics(self, capsys):
        """gibbs asymptotics emits one row per energy"""
        args = ["gibbs", "asymptotics", "--spectrum", "ho", "--E-grid", "10,100", "--eta", "1"]
        assert run(args) == 0
        rows = rows_of(capsys)
        assert [float(row["E"]) for row in rows] == [10.0, 100.0]


class TestVerifyCommand:
    """Test campaign runs from the command line"""

    def test_attenuator(self, capsys):
        """A small attenuator campaign passes with exit code 0"""
        args = ["verify", "attenuator", "--seed", "1", "--dim", "8", "--samples", "8"]
        assert run(args + ["--alpha", "0.5", "--E", "1", "--t-grid", "0,0.5"]) == 0
        captured = capsys.readouterr()
        document = json.loads(captured.out)
        assert document["seed"] == 1
        assert document["result"]["passed"] is True
        assert "CAMPAIGN ATTENUATOR" in captured.err

    def test_seed_required(self):
        """--seed is mandatory"""
        assert run(["verify", "attenuator"]) == 2

    def test_unknown_campaign(self):
        """Unknown campaigns exit with code 1"""
        assert run(["verify", "lasers", "--seed", "0"]) == 1


class TestFiguresCommand:
    """Test figure data series"""

    def test_g_alpha(self, capsys):
        """g-alpha tabulates one row per grid point"""
        assert run(["figures", "g-alpha", "--points", "4"]) == 0
        rows = rows_of(capsys)
        assert [float(row["alpha"]) for row in rows] == [0.25, 0.5, 0.75, 1.0]
        assert math.isclose(float(rows[1]["g"]), 2.0)

    def test_bound_compare(self, capsys):
        """bound-compare keeps the pure-state curve below the density-operator curve"""
        assert run(["figures", "bound-compare", "--points", "5", "--t13-constant", "1"]) == 0
        rows = rows_of(capsys)
        assert len(rows) == 5
        for row in rows:
            assert float(row["pure_state_bound"]) <= float(row["density_operator_bound"])
            assert "t13_bound" in row

    def test_beta_asymptotics(self, capsys):
        """beta-asymptotics compares beta with eta/E"""
        args = ["figures", "beta-asymptotics", "--spectrum", "ho", "--E-grid", "100", "--eta", "1"]
        assert run(args) == 0
        row = rows_of(capsys)[0]
        assert math.isclose(float(row["beta_E_over_eta"]), 1.0, rel_tol=1e-3)


class TestCapacityCommand:
    """Test capacity subcommands"""

    def test_bound_fixed_t(self, capsys):
        """capacity bound at a given t"""
        args = ["capacity", "bound", "--which", "c_one", "--E", "1", "--epsilon", "0.1"]
        assert run(args + ["--t", "2"]) == 0
        result = result_of(capsys)
        assert result["t_minimized"] is False
        assert result["params"]["t"] == 2.0

    def test_bound_minimized(self, capsys):
        """Without --t the bound is minimized over t"""
        args = ["capacity", "bound", "--which", "eac", "--E", "4", "--epsilon", "0.1"]
        assert run(args) == 0
        result = result_of(capsys)
        assert result["t_minimized"] is True
        assert 0.0 < result["params"]["t"] <= 5.0

    def test_t_out_of_range(self, capsys):
        """t beyond 1/(2 eps) exits with code 1"""
        args = ["capacity", "bound", "--E", "1", "--epsilon", "0.1", "--t", "6"]
        assert run(args) == 1

    def test_holevo(self, capsys):
        """Two orthogonal Fock states carry log 2"""
        assert run(["capacity", "holevo", "--dim", "4", "--levels", "0,1", "--t", "0.5"]) == 0
        result = result_of(capsys)
        assert math.isclose(result["chi"], math.log(2.0))
        assert result["chi_after_attenuator"] < result["chi"]


class TestOutputFlag:
    """Test --output"""

    def test_writes_file(self, capsys):
        """--output writes the report and confirms on stderr"""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "closed.json"
            args = ["--output", str(path), "bounds", "closed", "--alpha", "1", "--E", "1"]
            assert run(args + ["--dt", "0.5"]) == 0
            captured = capsys.readouterr()
            assert captured.out == ""
            assert "✓" in captured.err
            assert json.loads(path.read_text())["result"]["bound"] == 1.0

    @pytest.mark.parametrize("flag,level", [("-v", "INFO"), ("-vv", "DEBUG")])
    def test_verbosity(self, flag, level):
        """-v and -vv raise the log level"""
        with mock.patch("logging.basicConfig") as configure:
            run([flag, "bounds", "divergences", "--trace-bound", "0.1"])
        assert configure.call_args.kwargs["level"] == getattr(logging, level)
