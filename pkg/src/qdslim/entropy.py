"""
Entropies and energy-constrained entropy continuity bounds.

All logarithms are natural. Eigenvalues below EIG_CLIP are treated as zero,
with the convention 0 log 0 = 0.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any
from typing import Dict
from typing import Optional
from typing import Tuple

import numpy as np
from scipy import special

from . import config
from .bounds import BoundReport
from .bounds import attenuator_coefficient
from .errors import DomainError
from .errors import InvalidParameterError
from .errors import TimeWindowError
from .gibbs import Spectrum
from .gibbs import gibbs_entropy
from .metrics import schatten_norm
from .operators import as_matrix
from .operators import partial_trace

logger = logging.getLogger(__name__)


def _spectrum_of(rho: Any) -> np.ndarray:
    matrix = as_matrix(rho)
    values = np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T))
    values[values < config.EIG_CLIP] = 0.0
    return values


def von_neumann(rho: Any) -> float:
    """S(rho) = -tr(rho log rho)."""
    values = _spectrum_of(rho)
    return max(float(-np.sum(special.xlogy(values, values))), 0.0)


def _factor(rho_ab: Any, dims: Tuple[int, int]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    joint = as_matrix(rho_ab)
    return joint, partial_trace(joint, dims, keep=0), partial_trace(joint, dims, keep=1)


def conditional(rho_ab: Any, dims: Tuple[int, int]) -> float:
    """H(A|B) = S(rho_AB) - S(rho_B), with A the first tensor factor."""
    joint, _, reduced_b = _factor(rho_ab, dims)
    return von_neumann(joint) - von_neumann(reduced_b)


def mutual_information(rho_ab: Any, dims: Tuple[int, int]) -> float:
    """I(A;B) = S(A) + S(B) - S(AB), clamped at zero against roundoff."""
    joint, reduced_a, reduced_b = _factor(rho_ab, dims)
    value = von_neumann(reduced_a) + von_neumann(reduced_b) - von_neumann(joint)
    return max(value, 0.0)


def relative(rho: Any, sigma: Any) -> float:
    """
    Relative entropy D(rho || sigma) = tr(rho (log rho - log sigma)).
    Returns +inf when rho has weight above SUPPORT_TOL outside the support of sigma.
    """
    left, right = as_matrix(rho), as_matrix(sigma)
    values, vectors = np.linalg.eigh(0.5 * (right + right.conj().T))
    support = values > config.SUPPORT_TOL
    rotated = vectors.conj().T @ left @ vectors
    diagonal = np.real(np.diag(rotated))
    outside = float(np.sum(diagonal[~support]))
    if outside > config.SUPPORT_TOL:
        return math.inf
    cross = float(np.dot(diagonal[support], np.log(values[support])))
    return max(-von_neumann(left) - cross, 0.0)


def _power_sum(rho: Any, q: float) -> float:
    if not q > 1:
        raise DomainError(f"entropy order q must exceed 1, got {q}", q)
    return float(np.sum(_spectrum_of(rho) ** q))


def tsallis_q(rho: Any, q: float) -> float:
    """T_q(rho) = (1 - tr rho^q) / (q - 1)."""
    return (1.0 - _power_sum(rho, q)) / (q - 1.0)


def renyi_q(rho: Any, q: float) -> float:
    """S_q(rho) = log(tr rho^q) / (1 - q)."""
    return math.log(_power_sum(rho, q)) / (1.0 - q)


def check_tsallis_lipschitz(rho: Any, sigma: Any, q: float) -> BoundReport:
    """|T_q(rho) - T_q(sigma)| <= q/(q-1) ||rho - sigma||_q."""
    distance = schatten_norm(as_matrix(rho) - as_matrix(sigma), q)
    observed = abs(tsallis_q(rho, q) - tsallis_q(sigma, q))
    return BoundReport(
        bound_value=q / (q - 1.0) * distance,
        observed_value=observed,
        params={"q": q, "schatten_distance": distance},
        formula_id="tsallis_lipschitz",
        tolerance=config.SANDWICH_TOL,
    )


def check_renyi_lipschitz(rho: Any, sigma: Any, q: float, delta_floor: float) -> BoundReport:
    """
    |S_q(rho) - S_q(sigma)| <= q/((q-1)(delta - eps)) ||rho - sigma||_q, under
    ||rho||_q >= delta and eps = ||rho - sigma||_q < delta.
    The report is inapplicable when the hypotheses fail on the inputs.
    """
    if not q > 1:
        raise DomainError(f"entropy order q must exceed 1, got {q}", q)
    norm_rho = schatten_norm(rho, q)
    distance = schatten_norm(as_matrix(rho) - as_matrix(sigma), q)
    params = {"q": q, "delta": delta_floor, "norm_rho": norm_rho, "schatten_distance": distance}
    if not (0.0 < delta_floor <= norm_rho and distance < delta_floor):
        return BoundReport(
            bound_value=math.inf,
            observed_value=None,
            params=params,
            formula_id="renyi_lipschitz",
            applicable=False,
        )
    bound = q / ((q - 1.0) * (delta_floor - distance)) * distance
    return BoundReport(
        bound_value=bound,
        observed_value=abs(renyi_q(rho, q) - renyi_q(sigma, q)),
        params=params,
        formula_id="renyi_lipschitz",
        tolerance=config.SANDWICH_TOL,
    )


def h_of(x: float) -> float:
    """Binary entropy h(x) = -x log x - (1-x) log(1-x) on [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary entropy needs x in [0, 1], got {x}", x)
    return float(-special.xlogy(x, x) - special.xlogy(1.0 - x, 1.0 - x))


def g_of(x: float) -> float:
    """g(x) = (x+1) log(x+1) - x log x for x >= 0."""
    if not x >= 0.0:
        raise DomainError(f"g needs x >= 0, got {x}", x)
    return float((x + 1.0) * math.log1p(x) - special.xlogy(x, x))


def r_eps(epsilon: float, t: float) -> float:
    """r_eps(t) = (1 + t/2) / (1 - eps t) on 0 < t <= 1/(2 eps)."""
    if not 0.0 < epsilon:
        raise DomainError(f"epsilon must be positive, got {epsilon}", epsilon)
    if not 0.0 < t <= 1.0 / (2.0 * epsilon):
        raise DomainError(f"t must lie in (0, 1/(2 eps)] = (0, {1.0 / (2.0 * epsilon):.6g}]", t)
    return (1.0 + 0.5 * t) / (1.0 - epsilon * t)


class ContinuityMode(Enum):
    EXACT_GIBBS = "exact_gibbs"
    ASYMPTOTIC = "asymptotic"


class ContinuityKind(Enum):
    VN_SIMPLE = "vn_simple"
    VN_TWO_EPS = "vn_two_eps"
    CONDITIONAL = "conditional"


@dataclass(frozen=True)
class ContinuityParams:
    E: float
    epsilon: float
    eta: float
    epsilon_prime: Optional[float] = None
    mode: ContinuityMode = ContinuityMode.ASYMPTOTIC
    spectrum: Optional[Spectrum] = None

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon <= 1.0:
            raise InvalidParameterError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        if self.epsilon_prime is not None and not self.epsilon < self.epsilon_prime <= 1.0:
            raise InvalidParameterError(
                f"need epsilon < epsilon' <= 1, got {self.epsilon} and {self.epsilon_prime}"
            )
        if not self.E > 0:
            raise InvalidParameterError(f"E must be positive, got {self.E}")
        if not self.eta > 0:
            raise InvalidParameterError(f"eta must be positive, got {self.eta}")
        if self.mode is ContinuityMode.EXACT_GIBBS and self.spectrum is None:
            raise InvalidParameterError("exact_gibbs mode needs a spectrum")

    @property
    def delta(self) -> Optional[float]:
        """(eps' - eps) / (1 + eps')."""
        if self.epsilon_prime is None:
            return None
        return (self.epsilon_prime - self.epsilon) / (1.0 + self.epsilon_prime)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "E": self.E,
            "epsilon": self.epsilon,
            "epsilon_prime": self.epsilon_prime,
            "delta": self.delta,
            "eta": self.eta,
            "mode": self.mode.value,
            "spectrum": self.spectrum.name if self.spectrum is not None else None,
        }


@dataclass(frozen=True)
class ContinuityBound:
    """Both forms of an entropy-type continuity bound; value is the one selected by mode."""

    value: float
    exact_gibbs: Optional[float]
    asymptotic: float
    mode: ContinuityMode
    label: str

    def as_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "exact_gibbs": self.exact_gibbs,
            "asymptotic": self.asymptotic,
            "mode": self.mode.value,
            "label": self.label,
        }


def _entropy_factor(params: ContinuityParams, energy: float) -> Tuple[Optional[float], float]:
    """(S(gamma(energy)) if a spectrum is known, eta log(energy))."""
    exact = gibbs_entropy(params.spectrum, energy) if params.spectrum is not None else None
    return exact, params.eta * math.log(energy)


def _combine(
    params: ContinuityParams,
    label: str,
    weight: float,
    energy: float,
    offset: float,
) -> ContinuityBound:
    exact_factor, asymptotic_factor = _entropy_factor(params, energy)
    exact = None if exact_factor is None else weight * exact_factor + offset
    asymptotic = weight * asymptotic_factor + offset
    value = exact if params.mode is ContinuityMode.EXACT_GIBBS else asymptotic
    assert value is not None
    return ContinuityBound(value, exact, asymptotic, params.mode, label)


def entropy_continuity_bound(params: ContinuityParams, which: ContinuityKind) -> ContinuityBound:
    """
    Energy-constrained continuity bound for |S(rho) - S(sigma)| or |H(A|B)_rho - H(A|B)_sigma|
    under (1/2)||rho - sigma||_1 <= eps.
    The asymptotic form replaces S(gamma(x)) by eta log x; its (1 + o(1)) factor is not
    controlled at finite E, so only the exact_gibbs form is a bound.
    Args:
        params: Energy, distances, eta and mode
        which: vn_simple, vn_two_eps or conditional
    Returns:
        ContinuityBound carrying both forms
    """
    eps = params.epsilon
    if which is ContinuityKind.VN_SIMPLE:
        return _combine(
            params, "2 eps S(gamma(E/eps)) + h(eps)", 2.0 * eps, params.E / eps, h_of(eps)
        )
    delta = params.delta
    eps_prime = params.epsilon_prime
    if delta is None or eps_prime is None:
        raise InvalidParameterError(f"{which.value} needs epsilon_prime")
    if which is ContinuityKind.VN_TWO_EPS:
        return _combine(
            params,
            "(eps' + 2 delta) S(gamma(E/delta)) + h(eps') + h(delta)",
            eps_prime + 2.0 * delta,
            params.E / delta,
            h_of(eps_prime) + h_of(delta),
        )
    return _combine(
        params,
        "2 (eps' + 4 delta) S(gamma(E/delta)) + (1 + eps') h(eps'/(1 + eps')) + 2 h(delta)",
        2.0 * (eps_prime + 4.0 * delta),
        params.E / delta,
        (1.0 + eps_prime) * h_of(eps_prime / (1.0 + eps_prime)) + 2.0 * h_of(delta),
    )


def tsallis_rate_bound(q: float, omega: float, alpha: float, dt: float) -> float:
    """|T_q(rho_t) - T_q(rho_s)| <= q/(q-1) omega |t-s|^alpha along a semigroup trajectory."""
    if not q > 1:
        raise DomainError(f"entropy order q must exceed 1, got {q}", q)
    return q / (q - 1.0) * omega * abs(dt) ** alpha


def renyi_rate_bound(q: float, omega: float, alpha: float, t: float, delta: float) -> float:
    """
    |S_q(rho_t) - S_q(rho)| <= q omega t^alpha / ((q-1)(delta - omega t^alpha)) while
    omega t^alpha < delta <= ||rho||_q.
    """
    if not q > 1:
        raise DomainError(f"entropy order q must exceed 1, got {q}", q)
    distance = omega * abs(t) ** alpha
    if distance >= delta:
        raise TimeWindowError(
            f"omega t^alpha = {distance:.6g} must stay below delta = {delta}",
            (delta / omega) ** (1.0 / alpha),
        )
    return q * distance / ((q - 1.0) * (delta - distance))


def attenuator_entropy_window(alpha: float, E: float, epsilon: float) -> float:
    """Largest t with attenuator_bound(alpha, E, t) <= 2 epsilon."""
    if not 0.0 < epsilon <= 1.0:
        raise InvalidParameterError(f"epsilon must lie in (0, 1], got {epsilon}")
    return (2.0 * epsilon / attenuator_coefficient(alpha, E)) ** (1.0 / alpha)
