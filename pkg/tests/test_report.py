"""
Tests for report rendering and writing
"""

import json
import math
import tempfile
from pathlib import Path

import numpy as np

from qdslim import __version__
from qdslim.entropy import ContinuityMode
from qdslim.report import ReportWriter
from qdslim.report import sanitize


class TestSanitize:
    """Test conversion to plain JSON types"""

    def test_numpy_and_enums(self):
        """numpy scalars, arrays and enums become plain values"""
        value = sanitize({"a": np.float64(1.5), "b": np.arange(3), "c": ContinuityMode.ASYMPTOTIC})
        assert value == {"a": 1.5, "b": [0, 1, 2], "c": "asymptotic"}
        assert type(value["a"]) is float

    def test_non_finite(self):
        """inf and nan become strings"""
        assert sanitize([math.inf, -math.inf, math.nan]) == ["inf", "-inf", "nan"]


class TestReportWriter:
    """Test JSON and CSV emission"""

    def test_json_envelope(self):
        """JSON reports carry version, seed, tolerances and diagnostics"""
        rendered = ReportWriter().render_json({"bound": 0.8}, seed=3, diagnostics={"x": 1})
        document = json.loads(rendered)
        assert document["version"] == __version__
        assert document["seed"] == 3
        assert document["result"] == {"bound": 0.8}
        assert document["diagnostics"] == {"x": 1}
        assert "certify" in document["tolerances"]

    def test_json_is_stable(self):
        """Keys are sorted so equal payloads render identically"""
        writer = ReportWriter()
        assert writer.render_json({"b": 1, "a": 2}) == writer.render_json({"a": 2, "b": 1})

    def test_csv_cells(self):
        """Floats keep full precision and None renders empty"""
        text = ReportWriter().render_csv(["E", "ratio"], [[0.1, None], [2.0, math.inf]])
        assert text == "E,ratio\n0.1,\n2.0,inf\n"

    def test_write_to_file(self):
        """Reports go to --output when given"""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "out" / "report.json"
            success, message = ReportWriter(str(path)).write_json({"bound": 1.0})
            assert success
            assert str(path) in message
            assert json.loads(path.read_text())["result"]["bound"] == 1.0

    def test_write_to_stdout(self, capsys):
        """Without a path the report goes to stdout"""
        success, _ = ReportWriter().write_csv(["x"], [[1]])
        assert success
        assert capsys.readouterr().out == "x\n1\n"

    def test_unwritable_path(self):
        """Write failures are reported, not raised"""
        with tempfile.TemporaryDirectory() as tmpdir:
            blocker = Path(tmpdir) / "file"
            blocker.write_text("")
            success, message = ReportWriter(str(blocker / "report.json")).write("{}")
            assert not success
            assert "Error writing" in message
