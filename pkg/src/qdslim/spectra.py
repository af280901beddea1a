"""
Spectrum catalog: resolves spectrum names given on the command line
(ho, box, number, weyl:n,vol, file:path) to Spectrum objects.
Spectrum files are parsed once and cached by path and modification time.
"""

import logging
import threading
from pathlib import Path
from typing import Dict
from typing import List
from typing import Optional
from typing import Tuple

import numpy as np

from .errors import SpectrumFormatError
from .gibbs import BUILTIN_SPECTRA
from .gibbs import Spectrum
from .gibbs import TailModel
from .gibbs import builtin_spectrum

logger = logging.getLogger(__name__)

SPECTRUM_DESCRIPTIONS = {
    "ho": "harmonic oscillator, lambda_i = i + 1/2",
    "number": "number operator, lambda_i = i",
    "box": "particle in a box, lambda_i = i^2 (i >= 1)",
    "weyl": "Weyl law in n dimensions, weyl:n,volume",
    "file": "eigenvalues from a text file, file:path",
}


def parse_tail_header(text: str, values: np.ndarray) -> TailModel:
    """
    Parse a `tail:` header into a growth law for the levels beyond the file.
    Args:
        text: Header body, "power <p> <coeff>" or "poly <degree>"
        values: Listed eigenvalues, used to fit the poly coefficient
    Returns:
        TailModel with lambda_i >= coeff * (i + 1) ** p
    """
    parts = text.split()
    try:
        if parts and parts[0] == "power" and len(parts) == 3:
            power, coeff = float(parts[1]), float(parts[2])
        elif parts and parts[0] == "poly" and len(parts) == 2:
            power = float(parts[1])
            half = values[values.size // 2 :]
            index = np.arange(values.size - half.size, values.size, dtype=float)
            coeff = float(np.min(half / (index + 1.0) ** power))
        else:
            raise SpectrumFormatError(f"unrecognized tail header: {text!r}")
    except ValueError as e:
        raise SpectrumFormatError(f"malformed tail header {text!r}: {e}") from e
    if power <= 0 or coeff <= 0:
        raise SpectrumFormatError(f"tail law needs positive power and coefficient, got {text!r}")
    return TailModel(coeff, 1.0, power)


def read_spectrum_file(path: Path) -> Spectrum:
    """Parse a spectrum file: one nonnegative value per line, `#` comments, optional tail header."""
    header: Optional[str] = None
    values: List[float] = []
    try:
        lines = path.read_text().splitlines()
    except OSError as e:
        raise SpectrumFormatError(f"cannot read spectrum file {path}: {e}") from e

    for number, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("tail:"):
            if values or header is not None:
                raise SpectrumFormatError(f"{path}:{number}: tail header must precede the values")
            header = line[len("tail:") :].strip()
            continue
        try:
            value = float(line)
        except ValueError:
            raise SpectrumFormatError(f"{path}:{number}: not a number: {line!r}") from None
        if not np.isfinite(value) or value < 0:
            raise SpectrumFormatError(
                f"{path}:{number}: eigenvalue must be nonnegative, got {value}"
            )
        if values and value < values[-1]:
            raise SpectrumFormatError(f"{path}:{number}: eigenvalues must be nondecreasing")
        values.append(value)

    if not values:
        raise SpectrumFormatError(f"{path}: no eigenvalues found")
    data = np.asarray(values)
    tail = parse_tail_header(header, data) if header is not None else None
    logger.debug("loaded %d eigenvalues from %s (tail=%s)", data.size, path, tail)
    return Spectrum(f"file:{path.name}", values=data, tail=tail, params={"path": str(path)})


class SpectrumCatalog:
    """Resolves and caches spectra by name."""

    def __init__(self):
        """Initialize the catalog."""
        self._files: Dict[Path, Tuple[float, Spectrum]] = {}
        self._lock = threading.Lock()

    def names(self) -> List[str]:
        return sorted(SPECTRUM_DESCRIPTIONS)

    def search(self, query: str) -> List[str]:
        """
        Catalog names matching a query (case-insensitive).
        Exact matches win, then prefix matches, then substring matches.
        """
        query_lower = query.strip().lower()
        if not query_lower:
            return []
        names = self.names()
        if query_lower in names:
            return [query_lower]
        results = [name for name in names if name.startswith(query_lower)]
        results += [name for name in names if query_lower in name and name not in results]
        return results

    def load_file(self, path: Path) -> Spectrum:
        """Load a spectrum file, reusing the parsed copy while the file is unchanged."""
        resolved = path.expanduser().resolve()
        try:
            mtime = resolved.stat().st_mtime
        except OSError as e:
            raise SpectrumFormatError(f"cannot read spectrum file {path}: {e}") from e
        with self._lock:
            cached = self._files.get(resolved)
            if cached is not None and cached[0] == mtime:
                return cached[1]
        spectrum = read_spectrum_file(resolved)
        with self._lock:
            self._files[resolved] = (mtime, spectrum)
        return spectrum

    def resolve(self, name: str) -> Spectrum:
        """
        Resolve a spectrum name.
        Args:
            name: ho, box, number, weyl[:n[,volume]] or file:path
        Returns:
            Spectrum
        """
        kind, _, argument = name.strip().partition(":")
        kind = kind.lower()
        if kind == "file":
            if not argument:
                raise SpectrumFormatError("file: needs a path")
            return self.load_file(Path(argument))
        if kind == "weyl":
            params: Dict[str, float] = {}
            if argument:
                fields = argument.split(",")
                try:
                    params["n"] = int(fields[0])
                    if len(fields) > 1:
                        params["volume"] = float(fields[1])
                except ValueError:
                    raise SpectrumFormatError(f"weyl expects weyl:n,volume, got {name!r}") from None
            return builtin_spectrum("weyl", **params)
        if kind in BUILTIN_SPECTRA and not argument:
            return builtin_spectrum(kind)

        suggestions = self.search(kind)
        hint = f"; did you mean {', '.join(suggestions)}?" if suggestions else ""
        raise SpectrumFormatError(f"unknown spectrum {name!r}{hint}")


_default_catalog = SpectrumCatalog()


def resolve_spectrum(name: str) -> Spectrum:
    """Resolve a spectrum name through the shared catalog."""
    return _default_catalog.resolve(name)
