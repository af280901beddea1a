"""
Report emission: JSON objects for single evaluations, CSV for series.
Every JSON report is wrapped in an envelope carrying the package version,
the seed, the numeric tolerances and any truncation diagnostics.
"""

import csv
import io
import json
import math
import sys
from enum import Enum
from pathlib import Path
from typing import Any
from typing import Dict
from typing import Iterable
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np

from . import __version__
from . import config


def sanitize(value: Any) -> Any:
    """
    Convert a payload into plain JSON types.
    Non-finite floats become the strings "inf", "-inf" and "nan".
    """
    if isinstance(value, dict):
        return {str(key): sanitize(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [sanitize(item) for item in value]
    if isinstance(value, np.ndarray):
        return [sanitize(item) for item in value.tolist()]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if math.isnan(number):
            return "nan"
        if math.isinf(number):
            return "inf" if number > 0 else "-inf"
        return number
    if isinstance(value, Path):
        return str(value)
    return value


def envelope(
    payload: Dict[str, Any],
    seed: Optional[int] = None,
    diagnostics: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """Wrap a result with version, seed, tolerances and diagnostics."""
    return {
        "version": __version__,
        "seed": seed,
        "tolerances": config.tolerances(),
        "diagnostics": dict(diagnostics or {}),
        "result": payload,
    }


class ReportWriter:
    """Writes JSON and CSV reports to a file or to stdout."""

    def __init__(self, output_path: Optional[str] = None):
        """
        Initialize the writer.
        Args:
            output_path: File to write; None writes to stdout
        """
        self.output_path = Path(output_path) if output_path else None

    def render_json(
        self,
        payload: Dict[str, Any],
        seed: Optional[int] = None,
        diagnostics: Optional[Dict[str, Any]] = None,
    ) -> str:
        document = sanitize(envelope(payload, seed, diagnostics))
        return json.dumps(document, sort_keys=True, indent=2, allow_nan=False) + "\n"

    def render_csv(self, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_cell(cell) for cell in row])
        return buffer.getvalue()

    def write(self, content: str) -> Tuple[bool, str]:
        """
        Emit rendered content.
        Args:
            content: Rendered JSON or CSV text
        Returns:
            Tuple of (success: bool, message: str)
        """
        if self.output_path is None:
            sys.stdout.write(content)
            sys.stdout.flush()
            return True, "Report written to stdout"
        try:
            self.output_path.parent.mkdir(parents=True, exist_ok=True)
            self.output_path.write_text(content)
        except OSError as e:
            return False, f"Error writing {self.output_path}: {e}"
        return True, f"Report written to {self.output_path}"

    def write_json(
        self,
        payload: Dict[str, Any],
        seed: Optional[int] = None,
        diagnostics: Optional[Dict[str, Any]] = None,
    ) -> Tuple[bool, str]:
        return self.write(self.render_json(payload, seed, diagnostics))

    def write_csv(self, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Tuple[bool, str]:
        return self.write(self.render_csv(header, rows))


def _csv_cell(cell: Any) -> Any:
    cell = sanitize(cell)
    if cell is None:
        return ""
    if isinstance(cell, float):
        return repr(cell)
    return cell
