"""
Analytic convergence bounds and quantum speed limits as pure formulas, and the
BoundReport record that pairs a bound with an observed quantity.

Conventions: dt is |t - s| >= 0, E is the energy parameter of the constraint
tr(S^{2 alpha} rho) <= E^{2 alpha}, and all logarithms are natural.
"""

import logging
import math
import sys
from dataclasses import dataclass
from dataclasses import field
from enum import Enum
from typing import Any
from typing import Dict
from typing import NamedTuple
from typing import Optional
from typing import Tuple

from scipy import optimize

from . import config
from .errors import DomainError
from .errors import InvalidParameterError
from .errors import TimeWindowError

logger = logging.getLogger(__name__)

# Largest trace distance between two states, hence between two channels.
MAX_DISTANCE = 2.0


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}", alpha)


def _check_nonnegative(**values: float) -> None:
    for name, value in values.items():
        if not value >= 0.0:
            raise InvalidParameterError(f"{name} must be nonnegative, got {value}")


@dataclass(frozen=True)
class BoundConstants:
    alpha: float
    zeta: float
    g: float


def constants(alpha: float) -> BoundConstants:
    """
    Prefactors zeta_alpha and g_alpha of the Hoelder-type rate bounds.
    zeta_1 = 1 is the continuous limit of the closed form.
    """
    _check_alpha(alpha)
    if alpha == 1.0:
        return BoundConstants(alpha=1.0, zeta=1.0, g=1.0)
    ratio = 2.0 * alpha / (1.0 - alpha)
    zeta = ratio ** (1.0 - alpha) + 2.0 * ratio ** (-alpha)
    g = zeta * (1.0 - alpha) ** ((1.0 - alpha) / 2.0) * alpha ** (alpha / 2.0)
    return BoundConstants(alpha=alpha, zeta=zeta, g=g)


def _rate(dt: float, alpha: float) -> float:
    _check_nonnegative(dt=dt)
    return dt**alpha


def closed_schrodinger_bound(alpha: float, energy_norm: float, dt: float) -> float:
    """||phi(t) - phi(s)|| <= g_alpha ||H|^alpha phi_0|| dt^alpha."""
    _check_nonnegative(energy_norm=energy_norm)
    return constants(alpha).g * energy_norm * _rate(dt, alpha)


def nonautonomous_bound(
    alpha: float, energy_norm: float, dt: float, potential_integral: float
) -> float:
    """Autonomous bound plus the caller-supplied integral of ||V(r)|| over [s, t]."""
    _check_nonnegative(potential_integral=potential_integral)
    return closed_schrodinger_bound(alpha, energy_norm, dt) + potential_integral


def closed_vn_bound(alpha: float, E: float, dt: float) -> float:
    """Energy-constrained diamond distance of closed evolution, 2 g_alpha E^alpha dt^alpha."""
    _check_nonnegative(E=E)
    return 2.0 * constants(alpha).g * E**alpha * _rate(dt, alpha)


def pure_state_window(alpha: float, E: float) -> float:
    """
    Largest dt for which the pure-state bound applies: dt^alpha <= 1/(sqrt(2) g_alpha)
    and g_alpha E^alpha dt^alpha <= sqrt(2).
    """
    _check_nonnegative(E=E)
    g = constants(alpha).g
    window = (1.0 / (math.sqrt(2.0) * g)) ** (1.0 / alpha)
    if E > 0:
        window = min(window, (math.sqrt(2.0) / (g * E**alpha)) ** (1.0 / alpha))
    return window


def pure_state_bound(alpha: float, E: float, dt: float) -> float:
    """
    Trace distance between the evolved versions of a pure state,
    2 g E^a dt^a sqrt(1 - g^2 E^{2a} dt^{2a} / 4).
    """
    window = pure_state_window(alpha, E)
    if dt > window * (1.0 + 1e-12):
        raise TimeWindowError(f"dt={dt} lies outside the pure-state window", window)
    x = constants(alpha).g * E**alpha * _rate(dt, alpha)
    return 2.0 * x * math.sqrt(max(1.0 - x * x / 4.0, 0.0))


def transferred_vn_bound(alpha: float, a: float, b: float, E: float, dt: float) -> float:
    """
    Closed-evolution bound under the constraint S when |H| is S-bounded,
    ||H phi|| <= a ||S phi|| + b ||phi||: 2 g_alpha sqrt(a E^{2 alpha} + b) dt^alpha.
    """
    _check_nonnegative(a=a, b=b, E=E)
    return 2.0 * constants(alpha).g * math.sqrt(a * E ** (2 * alpha) + b) * _rate(dt, alpha)


class OmegaCase(Enum):
    """Case (1): K relatively H-bounded. Case (2): H relatively K-bounded."""

    OMEGA_H = "omega_H"
    OMEGA_K = "omega_K"


@dataclass(frozen=True)
class OpenSystemParams:
    """
    Parameters of the open-system rate omega.
    c=None selects the c that minimizes omega.
    """

    alpha: float
    a: float
    b: float
    E: float
    case: OmegaCase = OmegaCase.OMEGA_H
    c: Optional[float] = None

    def __post_init__(self) -> None:
        _check_alpha(self.alpha)
        _check_nonnegative(a=self.a, b=self.b, E=self.E)
        if self.c is not None:
            _check_nonnegative(c=self.c)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "a": self.a,
            "b": self.b,
            "E": self.E,
            "case": self.case.value,
            "c": "auto" if self.c is None else self.c,
        }


def _energy_coefficient(alpha: float, case: OmegaCase) -> float:
    if case is OmegaCase.OMEGA_H:
        return (1.0 - alpha) ** ((1.0 - alpha) / 2.0) * alpha ** (alpha / 2.0)
    return (1.0 - alpha) ** (1.0 - alpha) * alpha**alpha


def _omega_branches(params: OpenSystemParams, c: float) -> Tuple[float, float]:
    alpha = params.alpha
    energy = (1.0 + 3.0 * params.a) * _energy_coefficient(alpha, params.case) * params.E**alpha
    if params.b == 0.0:
        decreasing = energy
    elif c == 0.0:
        if alpha < 1.0:
            raise DomainError("c = 0 requires alpha = 1 or b = 0", c)
        decreasing = 3.0 * params.b + energy
    else:
        decreasing = 3.0 * params.b * c ** (alpha - 1.0) + energy
    return 2.0 * c**alpha, decreasing


def omega_at(params: OpenSystemParams, c: float) -> float:
    """omega(alpha, a, b, c, E) at a fixed c."""
    increasing, decreasing = _omega_branches(params, c)
    return 4.0 * constants(params.alpha).zeta * max(increasing, decreasing)


def optimal_c(params: OpenSystemParams) -> float:
    """
    c minimizing omega. The increasing branch 2c^alpha meets the decreasing branch
    at a single crossing, which is located in log c within OMEGA_C_RANGE.
    """
    if params.alpha == 1.0 or params.b == 0.0:
        return 0.0
    low, high = (math.log(v) for v in config.OMEGA_C_RANGE)

    def gap(log_c: float) -> float:
        increasing, decreasing = _omega_branches(params, math.exp(log_c))
        return increasing - decreasing

    if gap(low) >= 0.0:
        return math.exp(low)
    if gap(high) <= 0.0:
        return math.exp(high)
    root = optimize.brentq(gap, low, high, xtol=config.OMEGA_C_RTOL, rtol=4 * sys.float_info.epsilon)
    logger.debug("omega crossing at c=%.12g", math.exp(root))
    return math.exp(root)


def omega(params: OpenSystemParams) -> float:
    """Open-system rate omega_H or omega_K; c=None uses optimal_c."""
    c = optimal_c(params) if params.c is None else params.c
    return omega_at(params, c)


def open_system_bound(params: OpenSystemParams, dt: float) -> float:
    """omega dt^alpha."""
    return omega(params) * _rate(dt, params.alpha)


def attenuator_coefficient(alpha: float, E: float) -> float:
    """
    4 zeta_alpha (1-alpha)^{1-alpha} alpha^alpha E^alpha.
    Applies to the attenuator with S=N and to the amplifier with S=M.
    """
    _check_nonnegative(E=E)
    return omega(OpenSystemParams(alpha=alpha, a=0.0, b=0.0, E=E, case=OmegaCase.OMEGA_K, c=0.0))


def attenuator_bound(alpha: float, E: float, dt: float) -> float:
    return attenuator_coefficient(alpha, E) * _rate(dt, alpha)


def amplifier_number_bound(alpha: float, E: float, dt: float) -> float:
    """Amplifier under the constraint S = N: 4 zeta (1-a)^{1-a} a^a sqrt(2E^{2a} + 2) dt^a."""
    _check_nonnegative(E=E)
    coefficient = _energy_coefficient(alpha, OmegaCase.OMEGA_K)
    return (
        4.0
        * constants(alpha).zeta
        * coefficient
        * math.sqrt(2.0 * E ** (2 * alpha) + 2.0)
        * _rate(dt, alpha)
    )


class SpeedLimitCase(Enum):
    SCHRODINGER = "schrodinger"
    VON_NEUMANN = "von_neumann"
    OPEN = "open"


def speed_limits(
    alpha: float,
    E: float,
    theta: float,
    case: SpeedLimitCase,
    params: Optional[OpenSystemParams] = None,
) -> float:
    """
    Minimal time to reach angle theta.
    Args:
        alpha: Hoelder exponent in (0, 1]
        E: Energy parameter (unused for the open case, which takes it from params)
        theta: Vector angle in [0, pi] (schrodinger) or Bures angle in [0, pi/2]
        case: Which dynamics
        params: Open-system parameters, required for the open case
    Returns:
        Lower bound on the evolution time
    """
    _check_alpha(alpha)
    limit = math.pi if case is SpeedLimitCase.SCHRODINGER else math.pi / 2.0
    if not 0.0 <= theta <= limit * (1.0 + 1e-12):
        raise DomainError(f"theta must lie in [0, {limit:.6g}] for {case.value}", theta)
    cosine = math.cos(min(theta, limit))
    if case is SpeedLimitCase.SCHRODINGER:
        if E <= 0:
            raise InvalidParameterError(f"E must be positive, got {E}")
        g = constants(alpha).g
        return ((2.0 - 2.0 * cosine) / g**2) ** (1.0 / (2.0 * alpha)) / E
    if case is SpeedLimitCase.VON_NEUMANN:
        if E <= 0:
            raise InvalidParameterError(f"E must be positive, got {E}")
        g = constants(alpha).g
        return ((1.0 - cosine) / g) ** (1.0 / alpha) / E
    if params is None:
        raise InvalidParameterError("the open speed limit needs OpenSystemParams")
    return ((2.0 - 2.0 * cosine) / omega(params)) ** (1.0 / params.alpha)


def purity_bounds(params: OpenSystemParams, dt: float) -> float:
    """Bound 2 omega dt^alpha on the change of purity between times s and t."""
    return 2.0 * open_system_bound(params, dt)


def purity_time(params: OpenSystemParams, p_start: float, p_fin: float) -> float:
    """Minimal time (|p_start - p_fin| / omega)^{1/alpha} to change the purity."""
    for name, value in (("p_start", p_start), ("p_fin", p_fin)):
        if not 0.0 < value <= 1.0:
            raise DomainError(f"{name} must lie in (0, 1], got {value}", value)
    return (abs(p_start - p_fin) / omega(params)) ** (1.0 / params.alpha)


class DivergenceBounds(NamedTuple):
    """Bounds implied by a trace-distance bound tau between two states."""

    trace_distance: float
    bures_distance: float
    bures_angle: float
    tsallis_half: float
    renyi_half: float


def divergence_bounds(trace_bound: float) -> DivergenceBounds:
    """
    Translate tau >= ||rho - sigma||_1 into bounds on the Bures distance and angle
    and the order-1/2 Tsallis and Renyi divergences.
    tau = 2 g E^a dt^a gives the closed-system list, tau = omega dt^a the open one.
    """
    _check_nonnegative(trace_bound=trace_bound)
    half = 1.0 - trace_bound / 2.0
    renyi = -2.0 * math.log(half) if half > 0.0 else math.inf
    return DivergenceBounds(
        trace_distance=trace_bound,
        bures_distance=math.sqrt(trace_bound),
        bures_angle=math.acos(max(half, -1.0)),
        tsallis_half=trace_bound,
        renyi_half=renyi,
    )


@dataclass(frozen=True)
class BoundReport:
    """An evaluated bound, the observed quantity it should dominate, and provenance."""

    bound_value: float
    observed_value: Optional[float]
    params: Dict[str, Any]
    formula_id: str
    tolerance: float = config.CERTIFY_TOL
    applicable: bool = True
    details: Dict[str, float] = field(default_factory=dict)
    margin_override: Optional[float] = None

    @property
    def margin(self) -> Optional[float]:
        if self.margin_override is not None:
            return self.margin_override
        if self.observed_value is None:
            return None
        return self.bound_value - self.observed_value

    @property
    def passed(self) -> bool:
        margin = self.margin
        return self.applicable and (margin is None or margin >= -self.tolerance)

    @property
    def vacuous(self) -> bool:
        return self.bound_value > MAX_DISTANCE

    @property
    def status(self) -> str:
        if not self.applicable:
            return "inapplicable"
        return "pass" if self.passed else "fail"

    def as_dict(self) -> Dict[str, Any]:
        return {
            "formula": self.formula_id,
            "bound": self.bound_value,
            "observed": self.observed_value,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "status": self.status,
            "vacuous": self.vacuous,
            "details": dict(self.details),
            "params": dict(self.params),
        }


def certify(
    bound_value: float,
    observed_value: float,
    params: Dict[str, Any],
    formula_id: str = "custom",
    tolerance: float = config.CERTIFY_TOL,
) -> BoundReport:
    """
    Compare a bound with an observation.
    Returns:
        BoundReport that passes when bound - observed >= -tolerance
    """
    if not (math.isfinite(bound_value) and math.isfinite(observed_value)):
        raise InvalidParameterError("bound and observed values must be finite")
    return BoundReport(
        bound_value=float(bound_value),
        observed_value=float(observed_value),
        params=dict(params),
        formula_id=formula_id,
        tolerance=tolerance,
    )
