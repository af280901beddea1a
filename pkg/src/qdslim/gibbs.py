"""
Spectra, partition functions, maximum-entropy (Gibbs) states and the
high-energy asymptotics of the inverse temperature.

A Spectrum is either a closed-form eigenvalue law lambda_i = a (i + shift)^p,
or a finite list (from a matrix or a file) with an optional declared growth law
for the levels beyond the list. Partition sums are shifted by the ground energy,
Z = e^{-beta lambda_0} sum_i e^{-beta (lambda_i - lambda_0)}, so large beta never
underflows.
"""

import logging
import math
from dataclasses import dataclass
from dataclasses import field
from typing import Any
from typing import Dict
from typing import List
from typing import NamedTuple
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np
from scipy import optimize
from scipy import special

from . import config
from .channels import DensityMatrix
from .errors import BudgetExceededError
from .errors import ConvergenceError
from .errors import InfeasibleEnergyError
from .errors import InvalidParameterError
from .errors import SpectrumFormatError
from .errors import TruncationError
from .operators import HermitianOperator

logger = logging.getLogger(__name__)


class TailModel(NamedTuple):
    """Growth law lambda_i >= coeff * (i + shift) ** power for the levels it covers."""

    coeff: float
    shift: float
    power: float

    def value(self, index: np.ndarray) -> np.ndarray:
        return self.coeff * (index + self.shift) ** self.power

    def _log_integral(self, beta: float, start: int, order: float) -> float:
        """
        log of int_{start-1}^inf lambda(x)^k e^{-beta lambda(x)} dx for k = order - 1/p,
        i.e. (1/p) (beta a)^{-1/p} beta^{-k} Gamma(order, z) with z = beta lambda(start - 1).
        """
        p = self.power
        x0 = max(start - 1 + self.shift, 0.0)
        z = beta * self.coeff * x0**p
        upper = special.gammaincc(order, z)
        if upper <= 0.0:
            return -math.inf
        k = order - 1.0 / p
        return (
            -math.log(p)
            - math.log(beta * self.coeff) / p
            - k * math.log(beta)
            + special.gammaln(order)
            + math.log(upper)
        )

    def partition_tail(self, beta: float, start: int, ground: float) -> float:
        """Bound on sum_{i >= start} e^{-beta (lambda_i - ground)}."""
        log_bound = self._log_integral(beta, start, 1.0 / self.power)
        return math.exp(min(log_bound + beta * ground, 700.0))

    def moment_tail(self, beta: float, start: int, ground: float) -> float:
        """
        Bound on sum_{i >= start} lambda_i e^{-beta (lambda_i - ground)}; valid once
        lambda(start - 1) >= 1/beta, where the summand decreases.
        """
        x0 = max(start - 1 + self.shift, 0.0)
        if beta * self.coeff * x0**self.power < 1.0:
            return math.inf
        log_bound = self._log_integral(beta, start, 1.0 + 1.0 / self.power)
        return math.exp(min(log_bound + beta * ground, 700.0))


class Spectrum:
    """
    Ordered eigenvalue source.
    Closed-form spectra are infinite; list-backed spectra are finite and may carry
    a tail model for the levels beyond the list.
    """

    def __init__(
        self,
        name: str,
        law: Optional[TailModel] = None,
        values: Optional[np.ndarray] = None,
        tail: Optional[TailModel] = None,
        params: Optional[Dict[str, Any]] = None,
    ):
        if (law is None) == (values is None):
            raise InvalidParameterError(
                "a spectrum needs exactly one of a closed-form law or values"
            )
        if values is not None:
            values = np.asarray(values, dtype=float).reshape(-1)
            if values.size == 0:
                raise SpectrumFormatError("spectrum has no eigenvalues")
            if not np.all(np.isfinite(values)):
                raise SpectrumFormatError("spectrum contains non-finite eigenvalues")
            if np.any(np.diff(values) < 0):
                raise SpectrumFormatError("eigenvalues must be nondecreasing")
            values.setflags(write=False)
        self.name = name
        self.law = law
        self.values = values
        self.tail = law if law is not None else tail
        self.params = dict(params or {})

    @classmethod
    def from_values(
        cls, values: Sequence[float], tail: Optional[TailModel] = None, name: str = "values"
    ) -> "Spectrum":
        return cls(name, values=np.sort(np.asarray(values, dtype=float)), tail=tail)

    @property
    def finite(self) -> bool:
        return self.values is not None

    @property
    def size(self) -> Optional[int]:
        return None if self.values is None else int(self.values.size)

    def eigenvalues(self, start: int, stop: int) -> np.ndarray:
        """Eigenvalues with indices in [start, stop), truncated at the end of a finite list."""
        if self.values is not None:
            return self.values[start:stop]
        assert self.law is not None
        return self.law.value(np.arange(start, stop, dtype=float))

    def eigenvalue(self, index: int) -> float:
        found = self.eigenvalues(index, index + 1)
        if found.size == 0:
            raise IndexError(f"spectrum {self.name} has no eigenvalue {index}")
        return float(found[0])

    @property
    def min_eigenvalue(self) -> float:
        return self.eigenvalue(0)

    def values_below(self, cutoff: float) -> np.ndarray:
        """All eigenvalues <= cutoff."""
        if self.values is not None:
            count = int(np.searchsorted(self.values, cutoff, side="right"))
        else:
            assert self.law is not None
            if cutoff < self.law.value(np.zeros(1))[0]:
                return np.empty(0)
            count = int((cutoff / self.law.coeff) ** (1.0 / self.law.power) - self.law.shift) + 2
        if count > config.PAIR_BUDGET:
            raise BudgetExceededError(
                f"{count} eigenvalues below {cutoff:g} exceed the budget {config.PAIR_BUDGET}"
            )
        chunk = self.eigenvalues(0, max(count, 0))
        return chunk[chunk <= cutoff]

    def describe(self) -> Dict[str, Any]:
        info: Dict[str, Any] = {"name": self.name, "params": dict(self.params)}
        if self.values is not None:
            info["size"] = int(self.values.size)
        if self.tail is not None:
            info["tail"] = {
                "coeff": self.tail.coeff,
                "shift": self.tail.shift,
                "power": self.tail.power,
            }
        return info

    def __repr__(self) -> str:
        return f"Spectrum({self.name!r})"


BUILTIN_SPECTRA = ("ho", "box", "number", "weyl")


def weyl_constant(n: int, volume: float) -> float:
    """4 pi^2 / (C_n vol)^{2/n}, with C_n = pi^{n/2} / Gamma(n/2 + 1) the unit-ball volume."""
    ball = math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)
    return 4.0 * math.pi**2 / (ball * volume) ** (2.0 / n)


def builtin_spectrum(name: str, **params: float) -> Spectrum:
    """
    Closed-form spectra.
    Args:
        name: ho (i + 1/2), box (i^2, i >= 1), number (i), or weyl (Weyl law in n dimensions)
        params: n and volume for weyl
    Returns:
        Infinite Spectrum
    """
    if name == "ho":
        return Spectrum("ho", law=TailModel(1.0, 0.5, 1.0))
    if name == "number":
        return Spectrum("number", law=TailModel(1.0, 0.0, 1.0))
    if name == "box":
        return Spectrum("box", law=TailModel(1.0, 1.0, 2.0))
    if name == "weyl":
        n = int(params.get("n", 3))
        volume = float(params.get("volume", 1.0))
        if n < 1 or volume <= 0:
            raise InvalidParameterError(
                f"weyl needs n >= 1 and volume > 0, got n={n}, volume={volume}"
            )
        law = TailModel(weyl_constant(n, volume), 1.0, 2.0 / n)
        return Spectrum("weyl", law=law, params={"n": n, "volume": volume})
    raise SpectrumFormatError(
        f"unknown spectrum {name!r}; choose from {', '.join(BUILTIN_SPECTRA)}"
    )


class GibbsSums(NamedTuple):
    """Shifted moments sum_i lambda_i^k e^{-beta (lambda_i - ground)} for k = 0, 1, 2."""

    ground: float
    s0: float
    s1: float
    s2: float
    terms: int
    tail0: float
    tail1: float

    @property
    def mean(self) -> float:
        return self.s1 / self.s0

    @property
    def variance(self) -> float:
        return max(self.s2 / self.s0 - self.mean**2, 0.0)

    def log_z(self, beta: float) -> float:
        return -beta * self.ground + math.log(self.s0)


def _gibbs_sums(spec: Spectrum, beta: float) -> GibbsSums:
    if not beta > 0:
        raise InvalidParameterError(f"beta must be positive, got {beta}")
    ground = spec.min_eigenvalue
    s0 = s1 = s2 = 0.0
    start = 0
    tail0 = tail1 = 0.0
    while True:
        chunk = spec.eigenvalues(start, start + config.SUM_CHUNK)
        if chunk.size:
            weights = np.exp(-beta * (chunk - ground))
            s0 += float(np.sum(weights))
            s1 += float(np.dot(weights, chunk))
            s2 += float(np.dot(weights, chunk * chunk))
            start += int(chunk.size)
        if spec.finite and start >= (spec.size or 0):
            if spec.tail is not None:
                tail0 = spec.tail.partition_tail(beta, start, ground)
                tail1 = spec.tail.moment_tail(beta, start, ground)
                if tail0 > config.PARTITION_TAIL * s0:
                    raise ConvergenceError(
                        f"spectrum {spec.name} ends at {start} levels with relative tail "
                        f"{tail0 / s0:.3g}; list more eigenvalues"
                    )
            break
        last = float(weights[-1])
        if last <= 1e-16 * s0 and last * float(chunk[-1]) <= 1e-16 * max(s1, 1e-300):
            assert spec.tail is not None
            tail0 = spec.tail.partition_tail(beta, start, ground)
            tail1 = spec.tail.moment_tail(beta, start, ground)
            if tail0 <= config.PARTITION_TAIL * s0 and tail1 <= config.PARTITION_TAIL * max(s1, s0):
                break
        if start >= config.TERM_BUDGET:
            raise ConvergenceError(
                f"partition sum for {spec.name} at beta={beta:g} needs more than "
                f"{config.TERM_BUDGET} terms"
            )
    return GibbsSums(ground, s0, s1, s2, start, tail0, tail1)


class PartitionResult(NamedTuple):
    log_z: float
    terms: int
    tail: float  # bound on the omitted part, relative to Z


def partition_function(spec: Spectrum, beta: float) -> PartitionResult:
    """
    log Z(beta) = log sum_i e^{-beta lambda_i} with a certified tail.
    Args:
        spec: Spectrum satisfying the Gibbs hypothesis
        beta: Inverse temperature (> 0)
    Returns:
        (log_z, terms summed, tail bound relative to Z)
    """
    sums = _gibbs_sums(spec, beta)
    return PartitionResult(sums.log_z(beta), sums.terms, sums.tail0 / sums.s0)


def mean_energy(spec: Spectrum, beta: float) -> float:
    """Gibbs mean energy U(beta) = tr(H e^{-beta H}) / Z."""
    return _gibbs_sums(spec, beta).mean


@dataclass(frozen=True)
class GibbsSolution:
    E: float
    beta: float
    log_z: float
    entropy: float
    truncation_terms: int
    tail_bound: float

    def as_dict(self) -> Dict[str, float]:
        return {
            "E": self.E,
            "beta": self.beta,
            "log_Z": self.log_z,
            "entropy": self.entropy,
            "terms": self.truncation_terms,
            "tail": self.tail_bound,
        }


def _bracket_beta(spec: Spectrum, E: float) -> Tuple[float, float]:
    guess = 1.0 / (E - spec.min_eigenvalue)
    low = high = guess
    for _ in range(200):
        if mean_energy(spec, low) > E:
            break
        low /= 4.0
    else:
        raise ConvergenceError(f"could not bracket beta from below for E={E}")
    for _ in range(200):
        if mean_energy(spec, high) < E:
            break
        high *= 4.0
    else:
        raise ConvergenceError(f"could not bracket beta from above for E={E}")
    logger.debug("beta bracket for E=%g: [%g, %g]", E, low, high)
    return low, high


def solve_beta(spec: Spectrum, E: float) -> GibbsSolution:
    """
    Inverse temperature solving tr(e^{-beta H}(H - E)) = 0.
    Bracketed root on log beta, then Newton polish with dU/dbeta = -Var(H).
    Args:
        spec: Spectrum
        E: Energy, strictly above the ground energy
    Returns:
        GibbsSolution with entropy log Z + beta E
    """
    ground = spec.min_eigenvalue
    if not E > ground:
        raise InfeasibleEnergyError(f"E = {E} must exceed the ground energy {ground}")
    if spec.finite and spec.tail is None and E >= float(np.mean(spec.values)):
        raise InfeasibleEnergyError(
            f"E = {E} is not below the infinite-temperature energy "
            f"{float(np.mean(spec.values)):.6g}"
        )
    low, high = _bracket_beta(spec, E)
    root = optimize.brentq(
        lambda log_beta: mean_energy(spec, math.exp(log_beta)) - E,
        math.log(low),
        math.log(high),
        xtol=1e-14,
    )
    beta = math.exp(root)
    sums = _gibbs_sums(spec, beta)
    for _ in range(3):
        residual = sums.mean - E
        if residual == 0.0 or sums.variance == 0.0:
            break
        polished = beta + residual / sums.variance
        if not low <= polished <= high:
            break
        candidate = _gibbs_sums(spec, polished)
        if abs(candidate.mean - E) >= abs(residual):
            break
        beta, sums = polished, candidate
    residual = abs(sums.mean - E)
    if residual > config.BETA_RESIDUAL * max(1.0, E):
        raise ConvergenceError(f"beta residual {residual:.3g} above tolerance at E={E}")
    log_z = sums.log_z(beta)
    return GibbsSolution(
        E=E,
        beta=beta,
        log_z=log_z,
        entropy=log_z + beta * E,
        truncation_terms=sums.terms,
        tail_bound=sums.tail0 / sums.s0,
    )


def gibbs_entropy(spec: Spectrum, E: float) -> float:
    """S(gamma(E)) = log Z(beta(E)) + beta(E) E."""
    return solve_beta(spec, E).entropy


def gibbs_state(
    op: HermitianOperator, E: float, reference: Optional[Spectrum] = None
) -> DensityMatrix:
    """
    Gibbs state e^{-beta H}/Z of a truncated Hamiltonian at mean energy E.
    Without a reference, beta is solved on the truncation and the top level may
    hold at most GIBBS_WEIGHT of the population.
    Args:
        op: Hamiltonian on the truncation
        E: Mean energy
        reference: Untruncated spectrum; when given, beta is solved on it and the
            truncation must carry at least 1 - GIBBS_WEIGHT of Z
    Returns:
        DensityMatrix
    Raises:
        TruncationError: the truncation cannot hold the state; required_dim says
            how far to enlarge it
    """
    values, vectors = op.eigh()
    solution = solve_beta(reference or Spectrum.from_values(values, name="operator"), E)
    beta = solution.beta
    weights = np.exp(-beta * (values - values[0]))
    if reference is not None:
        log_z_trunc = -beta * values[0] + math.log(float(np.sum(weights)))
        carried = math.exp(log_z_trunc - solution.log_z)
        if carried < 1.0 - config.GIBBS_WEIGHT:
            levels = reference.eigenvalues(0, solution.truncation_terms)
            partial = np.cumsum(np.exp(-beta * levels - solution.log_z))
            required = int(np.searchsorted(partial, 1.0 - config.GIBBS_WEIGHT)) + 1
            raise TruncationError(
                f"truncation carries only {carried:.12f} of the Gibbs weight at E={E}",
                required,
            )
    else:
        top = float(weights[-1] / np.sum(weights))
        if top > config.GIBBS_WEIGHT:
            required = _required_dim(values, beta, top)
            raise TruncationError(
                f"top level holds {top:.3g} of the Gibbs weight at E={E}",
                required,
            )
    probabilities = weights / np.sum(weights)
    return DensityMatrix((vectors * probabilities) @ vectors.conj().T)


def _required_dim(values: np.ndarray, beta: float, top: float) -> int:
    # Extends the mean level spacing until the top population drops below GIBBS_WEIGHT.
    dim = int(values.size)
    decay = beta * float(values[-1] - values[0]) / max(dim - 1, 1)
    if decay <= 0.0:
        return 2 * dim
    extra = math.log(top / config.GIBBS_WEIGHT) / decay
    return dim + max(1, int(math.ceil(extra)))


def n_updown(spec: Spectrum, Lambda: float) -> Tuple[float, float]:
    """
    Pair sums over ordered eigenvalue pairs with lambda + lambda' <= Lambda:
    N_up = sum lambda^2 and N_down = sum lambda lambda'.
    """
    if not math.isfinite(Lambda):
        raise InvalidParameterError("cutoff must be finite")
    values = spec.values_below(Lambda - spec.min_eigenvalue)
    if values.size == 0:
        return 0.0, 0.0
    prefix = np.concatenate(([0.0], np.cumsum(values)))
    partners = np.searchsorted(values, Lambda - values, side="right")
    n_up = float(np.dot(values * values, partners))
    n_down = float(np.dot(values, prefix[partners]))
    return n_up, n_down


@dataclass(frozen=True)
class AsymptoticsReport:
    cutoffs: List[float]
    xi_estimates: List[float]
    level_counts: List[int]
    xi: Optional[float]
    eta: Optional[float]
    residual: float
    kappa_estimate: Optional[float] = None
    diagnostic: str = ""

    def as_dict(self) -> Dict[str, Any]:
        return {
            "cutoffs": list(self.cutoffs),
            "xi_estimates": list(self.xi_estimates),
            "level_counts": list(self.level_counts),
            "xi": self.xi,
            "eta": self.eta,
            "fit_residual": self.residual,
            "kappa_estimate": self.kappa_estimate,
            "diagnostic": self.diagnostic,
        }


def estimate_eta(spec: Spectrum, cutoffs: Sequence[float]) -> AsymptoticsReport:
    """
    Extrapolate xi = lim N_up/N_down and eta = 1/(xi - 1).
    The ratio sequence is fitted as r = xi + c/n, with n the number of levels that
    can appear in a pair below the cutoff.
    Args:
        spec: Spectrum
        cutoffs: At least three increasing cutoffs
    Returns:
        AsymptoticsReport; eta is None when the fit residual exceeds ETA_RESIDUAL
    """
    grid = [float(c) for c in cutoffs]
    if len(grid) < 3:
        raise InvalidParameterError("estimate_eta needs at least three cutoffs")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidParameterError("cutoffs must be strictly increasing")
    ratios: List[float] = []
    counts: List[int] = []
    for cutoff in grid:
        n_up, n_down = n_updown(spec, cutoff)
        if n_down <= 0.0:
            raise InvalidParameterError(f"no eigenvalue pair below cutoff {cutoff:g}")
        ratios.append(n_up / n_down)
        counts.append(int(spec.values_below(cutoff - spec.min_eigenvalue).size))
    design = np.column_stack([np.ones(len(grid)), 1.0 / np.asarray(counts, dtype=float)])
    coefficients = np.linalg.lstsq(design, np.asarray(ratios), rcond=None)[0]
    xi = float(coefficients[0])
    fitted = design @ coefficients
    residual = float(np.sqrt(np.mean(((np.asarray(ratios) - fitted) / fitted) ** 2)))
    logger.debug("eta fit for %s: xi=%.8g residual=%.3g", spec.name, xi, residual)
    if residual > config.ETA_RESIDUAL:
        return AsymptoticsReport(
            grid,
            ratios,
            counts,
            None,
            None,
            residual,
            diagnostic=f"ratio sequence does not settle (residual {residual:.3g})",
        )
    if xi <= 1.0:
        return AsymptoticsReport(
            grid,
            ratios,
            counts,
            float(xi),
            None,
            residual,
            diagnostic="extrapolated xi <= 1, no positive eta",
        )
    return AsymptoticsReport(grid, ratios, counts, float(xi), 1.0 / (float(xi) - 1.0), residual)


@dataclass(frozen=True)
class AsymptoticsTable:
    """beta(E), Z and S(gamma(E)) against their (1 + o(1)) laws on an energy grid."""

    eta: float
    rows: List[Dict[str, Optional[float]]] = field(default_factory=list)

    @property
    def kappa_estimate(self) -> Tuple[float, float]:
        """(E, kappa) at the largest tabulated energy; a finite-E estimate, not a limit."""
        last = self.rows[-1]
        return float(last["E"]), float(last["kappa"])  # type: ignore[arg-type]


def asymptotics_check(spec: Spectrum, E_list: Sequence[float], eta: float) -> AsymptoticsTable:
    """
    Tabulate beta E / eta, log Z - eta ln E, kappa = Z / E^eta and S / (eta ln E).
    Args:
        spec: Spectrum
        E_list: Energies above the ground energy
        eta: Asymptotic exponent (known or from estimate_eta)
    Returns:
        AsymptoticsTable with one row per energy
    """
    if not eta > 0:
        raise InvalidParameterError(f"eta must be positive, got {eta}")
    rows = []
    for E in E_list:
        solution = solve_beta(spec, float(E))
        log_e = math.log(E)
        offset = solution.log_z - eta * log_e
        rows.append(
            {
                "E": float(E),
                "beta": solution.beta,
                "beta_E_over_eta": solution.beta * E / eta,
                "log_Z": solution.log_z,
                "log_Z_minus_eta_log_E": offset,
                "kappa": math.exp(offset),
                "entropy": solution.entropy,
                "entropy_ratio": solution.entropy / (eta * log_e) if log_e > 0 else None,
            }
        )
    return AsymptoticsTable(eta=eta, rows=rows)
