"""
Holevo quantity of discrete ensembles and continuity bounds for
energy-constrained classical capacities and quantum mutual information.

The capacities themselves (product-state C1, classical C, entanglement-assisted
C_ea) are never evaluated; only the bounds on their differences are.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np

from . import config
from .channels import ChannelFamily
from .channels import DensityMatrix
from .entropy import ContinuityBound
from .entropy import ContinuityMode
from .entropy import g_of
from .entropy import h_of
from .entropy import r_eps
from .entropy import von_neumann
from .errors import InvalidParameterError
from .errors import ShapeMismatchError
from .gibbs import Spectrum
from .gibbs import gibbs_entropy
from .metrics import EnergyConstraint
from .metrics import sample_admissible_states
from .operators import HermitianOperator

logger = logging.getLogger(__name__)

CAPACITY_SYMBOLS = {
    "c_one": "C1(Phi, H_A, E), product-state classical capacity",
    "c_full": "C(Phi, H_A, E), classical capacity",
    "eac": "C_ea(Phi, H_A, E), entanglement-assisted classical capacity",
}


class DiscreteEnsemble:
    """Finitely many states with probability weights."""

    def __init__(self, weights: Sequence[float], states: Sequence[DensityMatrix]):
        probabilities = np.asarray(weights, dtype=float)
        if probabilities.ndim != 1 or probabilities.size != len(states) or not states:
            raise ShapeMismatchError("an ensemble needs one weight per state")
        if np.any(probabilities < 0) or abs(probabilities.sum() - 1.0) > config.HERMITIAN_TOL:
            raise InvalidParameterError("ensemble weights must be a probability vector")
        dims = {state.dim for state in states}
        if len(dims) != 1:
            raise ShapeMismatchError(f"ensemble states have different dimensions {sorted(dims)}")
        self.weights = probabilities
        self.states = list(states)

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def barycenter(self) -> DensityMatrix:
        """sum_i p_i rho_i."""
        total = sum(p * state.matrix for p, state in zip(self.weights, self.states))
        return DensityMatrix(total)

    def __len__(self) -> int:
        return len(self.states)


def holevo_quantity(mu: DiscreteEnsemble) -> float:
    """chi(mu) = S(barycenter) - sum_i p_i S(rho_i), clamped at zero against roundoff."""
    average = sum(p * von_neumann(state) for p, state in zip(mu.weights, mu.states))
    return max(von_neumann(mu.barycenter()) - float(average), 0.0)


def pushforward(mu: DiscreteEnsemble, channel: ChannelFamily, t: float) -> DiscreteEnsemble:
    """Map every member of the ensemble through the channel at time t; weights are unchanged."""
    if channel.dim != mu.dim:
        raise ShapeMismatchError(f"channel dim {channel.dim} does not match ensemble dim {mu.dim}")
    return DiscreteEnsemble(mu.weights, [channel.apply(state, t) for state in mu.states])


class CapacityKind(Enum):
    C_ONE = "c_one"
    C_FULL = "c_full"
    EAC = "eac"
    QMI = "qmi"
    HOLEVO_CHI = "holevo_chi"


@dataclass(frozen=True)
class CapacityBoundParams:
    E: float
    epsilon: float
    t: float
    eta: float
    k_of_E: float = 1.0
    n: int = 1
    mode: ContinuityMode = ContinuityMode.ASYMPTOTIC
    spectrum: Optional[Spectrum] = None

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 1.0:
            raise InvalidParameterError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not 0.0 < self.t <= 1.0 / (2.0 * self.epsilon):
            raise InvalidParameterError(
                f"t must lie in (0, 1/(2 eps)] = (0, {1.0 / (2.0 * self.epsilon):.6g}], "
                f"got {self.t}"
            )
        if not self.E > 0 or not self.eta > 0:
            raise InvalidParameterError("E and eta must be positive")
        if self.k_of_E < 0:
            raise InvalidParameterError(f"k(E) must be nonnegative, got {self.k_of_E}")
        if self.n < 1:
            raise InvalidParameterError(f"n must be a positive integer, got {self.n}")
        if self.mode is ContinuityMode.EXACT_GIBBS and self.spectrum is None:
            raise InvalidParameterError("exact_gibbs mode needs a spectrum")

    def as_dict(self) -> Dict[str, Any]:
        return {
            "E": self.E,
            "epsilon": self.epsilon,
            "t": self.t,
            "eta": self.eta,
            "k_of_E": self.k_of_E,
            "n": self.n,
            "mode": self.mode.value,
            "spectrum": self.spectrum.name if self.spectrum is not None else None,
        }


# (multiplier of the entropy term, multiplier of h(eps t), output energy uses k(E), scales with n)
_FORMS = {
    CapacityKind.C_ONE: (1.0, 2.0, True, False),
    CapacityKind.C_FULL: (2.0, 4.0, True, False),
    CapacityKind.EAC: (2.0, 4.0, False, False),
    CapacityKind.QMI: (2.0, 4.0, False, True),
    CapacityKind.HOLEVO_CHI: (1.0, 2.0, False, False),
}


def capacity_continuity(params: CapacityBoundParams, which: CapacityKind) -> ContinuityBound:
    """
    m eps (2t + r_eps(t)) S(gamma(x)) + 2 g(eps r_eps(t)) + j h(eps t), with
    x = k(E) E/(eps t) for C1 and C and x = E/(eps t) otherwise; the QMI form is
    multiplied by n. The asymptotic form uses eta log x in place of S(gamma(x)).
    """
    eps, t = params.epsilon, params.t
    entropy_weight, h_weight, uses_k, per_copy = _FORMS[which]
    r = r_eps(eps, t)
    energy = (params.k_of_E if uses_k else 1.0) * params.E / (eps * t)
    if not energy > 0:
        raise InvalidParameterError("output energy k(E) E must be positive")
    weight = entropy_weight * eps * (2.0 * t + r)
    offset = 2.0 * g_of(eps * r) + h_weight * h_of(eps * t)
    copies = params.n if per_copy else 1

    asymptotic = copies * (weight * params.eta * math.log(energy) + offset)
    exact = None
    if params.spectrum is not None:
        exact = copies * (weight * gibbs_entropy(params.spectrum, energy) + offset)
    value = exact if params.mode is ContinuityMode.EXACT_GIBBS else asymptotic
    assert value is not None
    label = CAPACITY_SYMBOLS.get(which.value, which.value)
    return ContinuityBound(value, exact, asymptotic, params.mode, label)


def optimal_t(
    params: CapacityBoundParams, which: CapacityKind, points: int = 200
) -> Tuple[float, ContinuityBound]:
    """
    Grid minimization of the bound over t in (0, 1/(2 eps)].
    Args:
        params: Bound parameters; params.t is ignored
        which: Bound form
        points: Grid size; t_k = k/(2 eps points)
    Returns:
        (t, bound) at the smallest grid value
    """
    if points < 1:
        raise InvalidParameterError(f"points must be positive, got {points}")
    t_max = 1.0 / (2.0 * params.epsilon)
    grid = [t_max * k / points for k in range(1, points + 1)]
    results = config.parallel_map(
        lambda t: capacity_continuity(dataclasses.replace(params, t=t), which), grid
    )
    best = int(np.argmin([result.value for result in results]))
    return grid[best], results[best]


@dataclass(frozen=True)
class EnergyFactorEstimate:
    """Empirical sup of tr(H_B Phi(rho)) / E; a lower estimate of k(E)."""

    k_estimate: float
    samples_used: int
    witness_index: int
    witness_family: str
    label: str = "empirical lower estimate of k(E)"

    def as_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


def energy_factor_probe(
    channel: ChannelFamily,
    constraint_op_in: HermitianOperator,
    constraint_op_out: HermitianOperator,
    E: float,
    t: float,
    samples: int = 200,
    seed: int = 0,
) -> EnergyFactorEstimate:
    """
    Largest observed output energy ratio over sampled inputs with tr(H_A rho) <= E.
    Args:
        channel: Channel family, applied at time t
        constraint_op_in: H_A
        constraint_op_out: H_B, on the channel's output dimension
        E: Input energy
        t: Channel time
        samples: Random draws
        seed: Base seed
    Returns:
        EnergyFactorEstimate
    """
    if constraint_op_out.dim != channel.dim or constraint_op_in.dim != channel.dim:
        raise ShapeMismatchError("constraint operators must match the channel dimension")
    constraint = EnergyConstraint(constraint_op_in, E, alpha=0.5)
    pool = sample_admissible_states(constraint, samples, ancilla_dim=1, seed=seed)

    def ratio(state: np.ndarray) -> float:
        output = channel.map_stack(state[np.newaxis], t)[0]
        return float(np.real(np.trace(constraint_op_out.matrix @ output))) / E

    ratios: List[float] = config.parallel_map(lambda sample: ratio(sample.state), pool)
    best = int(np.argmax(ratios))
    logger.debug("energy factor estimate: k >= %.6g from %d states", ratios[best], len(pool))
    return EnergyFactorEstimate(
        k_estimate=float(ratios[best]),
        samples_used=len(pool),
        witness_index=pool[best].index,
        witness_family=pool[best].family,
    )
