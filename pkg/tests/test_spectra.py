"""
Tests for spectrum name resolution and spectrum files
"""

import math
import os
import tempfile
from pathlib import Path

import numpy as np
import pytest

from qdslim.errors import SpectrumFormatError
from qdslim.gibbs import solve_beta
from qdslim.spectra import SpectrumCatalog
from qdslim.spectra import parse_tail_header
from qdslim.spectra import read_spectrum_file
from qdslim.spectra import resolve_spectrum


class TestResolve:
    """Test spectrum names"""

    def test_builtin_names(self):
        """Built-in names resolve to closed-form spectra"""
        assert resolve_spectrum("ho").eigenvalue(0) == 0.5
        assert resolve_spectrum("Box").eigenvalue(1) == 4.0

    def test_weyl_arguments(self):
        """weyl:n,volume sets the dimension and volume"""
        spectrum = resolve_spectrum("weyl:1,1")
        assert math.isclose(spectrum.eigenvalue(0), math.pi**2)
        assert spectrum.params == {"n": 1, "volume": 1.0}

    def test_weyl_bad_arguments(self):
        """Non-numeric weyl arguments are rejected"""
        with pytest.raises(SpectrumFormatError):
            resolve_spectrum("weyl:three")

    def test_unknown_name_suggests(self):
        """Unknown names come with suggestions"""
        with pytest.raises(SpectrumFormatError) as info:
            resolve_spectrum("numb")
        assert "did you mean number" in str(info.value)

    def test_search_order(self):
        """Exact matches win over prefix matches"""
        catalog = SpectrumCatalog()
        assert catalog.search("ho") == ["ho"]
        assert catalog.search("w") == ["weyl"]
        assert catalog.search("") == []


class TestSpectrumFile:
    """Test spectrum file parsing"""

    def write(self, tmpdir, text):
        path = Path(tmpdir) / "levels.txt"
        path.write_text(text)
        return path

    def test_values_and_comments(self):
        """Comments and blank lines are skipped"""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = self.write(tmpdir, "# levels\n0.5\n\n1.5  # first excited\n2.5\n")
            spectrum = read_spectrum_file(path)
            assert spectrum.size == 3
            assert spectrum.tail is None
            assert spectrum.name == "file:levels.txt"

    def test_decreasing_values_report_line(self):
        """Errors carry the file and line number"""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = self.write(tmpdir, "1.0\n0.5\n")
            with pytest.raises(SpectrumFormatError) as info:
                read_spectrum_file(path)
            assert ":2:" in str(info.value)

    def test_negative_value(self):
        """Eigenvalues must be nonnegative"""
        with tempfile.TemporaryDirectory() as tmpdir:
            with pytest.raises(SpectrumFormatError):
                read_spectrum_file(self.write(tmpdir, "-1\n"))

    def test_tail_header_after_values(self):
        """The tail header must come first"""
        with tempfile.TemporaryDirectory() as tmpdir:
            with pytest.raises(SpectrumFormatError):
                read_spectrum_file(self.write(tmpdir, "0.5\ntail: power 1 1\n"))

    def test_file_with_tail_solves_like_oscillator(self):
        """A listed oscillator with a linear tail reproduces beta = ln 3"""
        with tempfile.TemporaryDirectory() as tmpdir:
            levels = "\n".join(str(i + 0.5) for i in range(200))
            path = self.write(tmpdir, "tail: power 1 1\n" + levels + "\n")
            spectrum = resolve_spectrum(f"file:{path}")
            assert spectrum.tail is not None
            assert math.isclose(solve_beta(spectrum, 1.0).beta, math.log(3.0), rel_tol=1e-10)

    def test_catalog_cache_tracks_mtime(self):
        """A rewritten file is parsed again"""
        catalog = SpectrumCatalog()
        with tempfile.TemporaryDirectory() as tmpdir:
            path = self.write(tmpdir, "0\n1\n")
            first = catalog.load_file(path)
            assert catalog.load_file(path) is first
            path.write_text("0\n1\n2\n")
            stat = path.stat()
            os.utime(path, (stat.st_atime, stat.st_mtime + 10))
            assert catalog.load_file(path).size == 3

    def test_missing_file(self):
        """Unreadable files raise SpectrumFormatError"""
        with pytest.raises(SpectrumFormatError):
            resolve_spectrum("file:/nonexistent/levels.txt")


class TestTailHeader:
    """Test tail header parsing"""

    def test_power(self):
        """power p coeff is taken literally"""
        tail = parse_tail_header("power 2 0.5", np.array([1.0]))
        assert (tail.coeff, tail.power) == (0.5, 2.0)

    def test_poly_fits_lower_envelope(self):
        """poly d takes the smallest ratio over the second half of the list"""
        values = np.array([(i + 1.0) ** 2 for i in range(10)])
        tail = parse_tail_header("poly 2", values)
        assert math.isclose(tail.coeff, 1.0)

    def test_garbage(self):
        """Unknown headers are rejected"""
        with pytest.raises(SpectrumFormatError):
            parse_tail_header("exponential 3", np.array([1.0]))
