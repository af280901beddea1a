"""
Distances and divergences between states, and a sampling estimator that
lower-bounds the energy-constrained diamond distance between two channels.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any
from typing import Dict
from typing import List
from typing import NamedTuple
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np
from scipy import optimize

from . import config
from .bounds import BoundReport
from .channels import ChannelFamily
from .channels import DensityMatrix
from .errors import DomainError
from .errors import InfeasibleConstraintError
from .errors import InvalidParameterError
from .errors import ShapeMismatchError
from .errors import TruncationError
from .operators import HermitianOperator
from .operators import as_matrix
from .operators import coherent_state
from .operators import operator_power
from .operators import partial_trace

logger = logging.getLogger(__name__)


def _same_dim(rho: Any, sigma: Any) -> Tuple[np.ndarray, np.ndarray]:
    left, right = as_matrix(rho), as_matrix(sigma)
    if left.shape != right.shape:
        raise ShapeMismatchError(f"shape mismatch: {left.shape} vs {right.shape}")
    return left, right


def trace_norm(A: Any) -> float:
    """Sum of singular values; sum of |eigenvalues| when A is Hermitian."""
    matrix = as_matrix(A)
    if matrix.shape[0] != matrix.shape[1]:
        raise ShapeMismatchError(f"trace norm needs a square matrix, got {matrix.shape}")
    if np.allclose(matrix, matrix.conj().T, atol=config.HERMITIAN_TOL, rtol=0.0):
        return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T)))))
    return float(np.sum(np.linalg.svd(matrix, compute_uv=False)))


def schatten_norm(A: Any, q: float) -> float:
    """Schatten q-norm (sum of singular values to the q) ** (1/q)."""
    if q < 1:
        raise DomainError(f"Schatten norms need q >= 1, got {q}", q)
    singular = np.linalg.svd(as_matrix(A), compute_uv=False)
    return float(np.sum(singular**q) ** (1.0 / q))


def sqrt_psd(matrix: Any) -> np.ndarray:
    """Square root of a PSD matrix; roundoff negatives are clipped to zero."""
    data = as_matrix(matrix)
    values, vectors = np.linalg.eigh(0.5 * (data + data.conj().T))
    if values[0] < -config.PSD_TOL:
        raise DomainError(
            f"matrix is not positive semi-definite ({values[0]:.3g})", float(values[0])
        )
    roots = np.sqrt(np.clip(values, 0.0, None))
    return (vectors * roots) @ vectors.conj().T


def fidelity(rho: Any, sigma: Any) -> float:
    """Root fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)), clipped to [0, 1]."""
    left, right = _same_dim(rho, sigma)
    root = sqrt_psd(left)
    inner = root @ right @ root
    inner = 0.5 * (inner + inner.conj().T)
    values = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    return float(min(max(np.sum(np.sqrt(values)), 0.0), 1.0))


class Bures(NamedTuple):
    angle: float
    distance: float


def bures(rho: Any, sigma: Any) -> Bures:
    """Bures angle arccos F and distance sqrt(2(1 - F))."""
    f = fidelity(rho, sigma)
    return Bures(angle=math.acos(f), distance=math.sqrt(max(2.0 * (1.0 - f), 0.0)))


class HalfDivergences(NamedTuple):
    tsallis_half: float
    renyi_half: float
    bhattacharyya: float


def divergences_half(rho: Any, sigma: Any) -> HalfDivergences:
    """
    Order-1/2 divergences from the Bhattacharyya overlap A = tr(sqrt(rho) sqrt(sigma)).
    Tsallis-1/2 = 2(1 - A) and Renyi-1/2 = -2 ln A, which is +inf for A = 0.
    """
    left, right = _same_dim(rho, sigma)
    overlap = float(np.real(np.trace(sqrt_psd(left) @ sqrt_psd(right))))
    overlap = min(max(overlap, 0.0), 1.0)
    renyi = -2.0 * math.log(overlap) if overlap > config.EIG_CLIP else math.inf
    return HalfDivergences(
        tsallis_half=2.0 * (1.0 - overlap), renyi_half=renyi, bhattacharyya=overlap
    )


def check_fvg_ps(rho: Any, sigma: Any) -> BoundReport:
    """
    Fuchs-van de Graaf sandwich 2(1 - F) <= ||rho - sigma||_1 <= 2 sqrt(1 - F^2)
    and the Powers-Stormer inequality Tsallis-1/2 <= ||rho - sigma||_1.
    The report margin is the smallest of the three slacks.
    """
    left, right = _same_dim(rho, sigma)
    distance = trace_norm(left - right)
    f = fidelity(left, right)
    upper = 2.0 * math.sqrt(max(1.0 - f * f, 0.0))
    slacks = {
        "fvg_lower": distance - 2.0 * (1.0 - f),
        "fvg_upper": upper - distance,
        "powers_stormer": distance - divergences_half(left, right).tsallis_half,
    }
    return BoundReport(
        bound_value=upper,
        observed_value=distance,
        params={"dim": int(left.shape[0]), "fidelity": f},
        formula_id="fvg_powers_stormer",
        tolerance=config.SANDWICH_TOL,
        details=slacks,
        margin_override=min(slacks.values()),
    )


@dataclass(frozen=True, eq=False)
class EnergyConstraint:
    """Admissible inputs: tr(S^{2 alpha} rho_H) <= E^{2 alpha}."""

    constraint_op: HermitianOperator
    energy: float
    alpha: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha}", self.alpha)
        if self.constraint_op.min_eigenvalue < -config.PSD_TOL:
            raise DomainError("constraint operator must be positive semi-definite")
        bottom = max(self.constraint_op.min_eigenvalue, 0.0)
        if not self.energy > bottom:
            raise InfeasibleConstraintError(
                f"E = {self.energy} is not above the bottom {bottom:.6g} of the constraint spectrum"
            )

    @property
    def dim(self) -> int:
        return self.constraint_op.dim

    @property
    def budget(self) -> float:
        return self.energy ** (2.0 * self.alpha)

    @cached_property
    def level_energies(self) -> np.ndarray:
        """s_i^{2 alpha} for the ascending eigenvalues s_i of S."""
        return np.clip(self.constraint_op.eigenvalues, 0.0, None) ** (2.0 * self.alpha)

    @cached_property
    def powered(self) -> HermitianOperator:
        return operator_power(self.constraint_op, 2.0 * self.alpha)

    def reduced_energy(self, joint: Any, ancilla_dim: int = 1) -> float:
        matrix = as_matrix(joint)
        if ancilla_dim > 1:
            matrix = partial_trace(matrix, (self.dim, ancilla_dim), keep=0)
        return float(np.real(np.trace(self.powered.matrix @ matrix)))

    def is_admissible(self, joint: Any, ancilla_dim: int = 1) -> bool:
        slack = config.HERMITIAN_TOL * max(1.0, self.budget)
        return self.reduced_energy(joint, ancilla_dim) <= self.budget + slack

    def describe(self) -> Dict[str, Any]:
        return {"E": self.energy, "alpha": self.alpha, "dim": self.dim}


class AdmissibleSample(NamedTuple):
    """A joint system (x) ancilla state that satisfies an energy constraint."""

    index: int
    family: str
    state: np.ndarray


@dataclass(frozen=True)
class EcdEstimate:
    """Certified lower bound on an energy-constrained diamond distance."""

    lower_bound: float
    witness_state: DensityMatrix
    witness_index: int
    witness_family: str
    samples_used: int
    ancilla_dim: int


SAMPLE_FAMILIES = ("mixture", "superposition", "schmidt", "coherent")


def _is_number_operator(op: HermitianOperator) -> bool:
    return bool(np.allclose(op.matrix, np.diag(np.arange(op.dim, dtype=float)), atol=1e-12))


def _low_levels(constraint: EnergyConstraint, ancilla_dim: int) -> int:
    wanted = max(2 * math.ceil(constraint.energy), ancilla_dim + 1, 2)
    return min(constraint.dim, wanted)


def _shift_weights(
    weights: np.ndarray, energies: np.ndarray, target: float
) -> Tuple[np.ndarray, Optional[int], float]:
    """
    Choose an anchor level and mixing fraction lam so that moving lam of the weight
    onto the anchor puts the mean energy on `target`.
    """
    current = float(np.dot(weights, energies))
    if current > target:
        anchor = 0
    elif current < target and energies[-1] > target:
        anchor = int(np.argmax(energies))
    else:
        return weights, None, 0.0
    rest = weights.copy()
    rest[anchor] = 0.0
    mass = rest.sum()
    if mass <= 0.0:
        return weights, None, 0.0
    rest_energy = float(np.dot(rest, energies)) / mass
    if rest_energy == energies[anchor]:
        return weights, None, 0.0
    lam = min(max((rest_energy - target) / (rest_energy - energies[anchor]), 0.0), 1.0)
    return rest / mass, anchor, lam


def _to_shell(
    amplitudes: np.ndarray, energies: np.ndarray, target: float, ancilla: np.ndarray
) -> np.ndarray:
    """
    Move a pure state (rows: S levels, columns: ancilla) onto the energy shell.
    The anchor row is replaced by sqrt(lam) anchor (x) ancilla, which keeps the
    reduced energy linear in lam.
    """
    weights = np.sum(np.abs(amplitudes) ** 2, axis=1)
    rest_weights, anchor, lam = _shift_weights(weights, energies, target)
    if anchor is None:
        return amplitudes
    rest = amplitudes.copy()
    rest[anchor, :] = 0.0
    rest /= np.linalg.norm(rest)
    shifted = math.sqrt(1.0 - lam) * rest
    shifted[anchor, :] += math.sqrt(lam) * ancilla
    return shifted


def _draw_sample(
    constraint: EnergyConstraint, index: int, seed: int, ancilla_dim: int
) -> Optional[AdmissibleSample]:
    rng = np.random.default_rng([seed, index])
    family = SAMPLE_FAMILIES[index % len(SAMPLE_FAMILIES)]
    levels = _low_levels(constraint, ancilla_dim)
    energies = constraint.level_energies[:levels]
    vectors = constraint.constraint_op.eigh()[1][:, :levels]
    target = constraint.budget * (1.0 - 1e-9)
    dim = constraint.dim

    if family == "coherent" and not _is_number_operator(constraint.constraint_op):
        family = "schmidt"

    if family == "mixture":
        weights = rng.dirichlet(np.ones(levels))
        rest, anchor, lam = _shift_weights(weights, energies, target)
        if anchor is not None:
            weights = (1.0 - lam) * rest
            weights[anchor] += lam
        system = (vectors * weights) @ vectors.conj().T
        ancilla = np.zeros((ancilla_dim, ancilla_dim))
        ancilla[0, 0] = 1.0
        state = np.kron(system, ancilla)
    elif family == "coherent":
        pure = _coherent_on_shell(constraint, rng, ancilla_dim)
        if pure is None:
            return None
        state = np.outer(pure, pure.conj())
    else:
        columns = 1 if family == "superposition" else min(ancilla_dim, levels)
        schmidt = rng.dirichlet(np.ones(columns))
        gaussian = rng.normal(size=(levels, columns)) + 1j * rng.normal(size=(levels, columns))
        frame, _ = np.linalg.qr(gaussian)
        amplitudes = np.zeros((levels, ancilla_dim), dtype=complex)
        amplitudes[:, :columns] = frame[:, :columns] * np.sqrt(schmidt)
        direction = np.zeros(ancilla_dim, dtype=complex)
        if family == "superposition":
            direction[0] = 1.0
        else:
            direction = rng.normal(size=ancilla_dim) + 1j * rng.normal(size=ancilla_dim)
            direction /= np.linalg.norm(direction)
        amplitudes = _to_shell(amplitudes, energies, target, direction)
        joint = (vectors @ amplitudes).reshape(dim * ancilla_dim)
        joint /= np.linalg.norm(joint)
        state = np.outer(joint, joint.conj())

    if not constraint.is_admissible(state, ancilla_dim):
        return None
    return AdmissibleSample(index=index, family=family, state=state)


def _coherent_on_shell(
    constraint: EnergyConstraint, rng: np.random.Generator, ancilla_dim: int
) -> Optional[np.ndarray]:
    """Coherent state with random phase whose constrained energy is a random fraction of E^{2a}."""
    dim = constraint.dim
    target = constraint.budget * rng.uniform(0.5, 1.0) * (1.0 - 1e-9)
    diagonal = constraint.level_energies

    def excess(radius: float) -> float:
        amplitudes = coherent_state(radius, dim).amplitudes
        return float(np.dot(np.abs(amplitudes) ** 2, diagonal)) - target

    phase = np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
    try:
        for scale in (1.5, 3.0, 6.0):
            high = math.sqrt(scale * constraint.energy + 1.0)
            if excess(high) > 0.0:
                break
        else:
            return None
        radius = optimize.brentq(excess, 0.0, high, xtol=1e-12)
        vector = coherent_state(radius * phase, dim)
    except TruncationError:
        return None
    ancilla = np.zeros(ancilla_dim, dtype=complex)
    ancilla[0] = 1.0
    return np.kron(vector.amplitudes, ancilla)


def _eigenstate_samples(
    constraint: EnergyConstraint, ancilla_dim: int, start: int
) -> List[AdmissibleSample]:
    """Admissible eigenvectors of S among the low levels, as product states."""
    levels = _low_levels(constraint, ancilla_dim)
    vectors = constraint.constraint_op.eigh()[1]
    ancilla = np.zeros(ancilla_dim, dtype=complex)
    ancilla[0] = 1.0
    samples = []
    for level in range(levels):
        if constraint.level_energies[level] > constraint.budget:
            break
        joint = np.kron(vectors[:, level], ancilla)
        samples.append(
            AdmissibleSample(
                index=start + level, family="eigenstate", state=np.outer(joint, joint.conj())
            )
        )
    return samples


def sample_admissible_states(
    constraint: EnergyConstraint, samples: int, ancilla_dim: int = 4, seed: int = 0
) -> List[AdmissibleSample]:
    """
    Seed-deterministic admissible states on system (x) ancilla.
    Sample i uses the generator default_rng([seed, i]); families rotate through
    Dirichlet mixtures over low S-levels, pure superpositions, Schmidt-entangled
    states and (for S = N) coherent states, followed by the admissible S-eigenstates.
    Args:
        constraint: Energy constraint
        samples: Number of random draws
        ancilla_dim: Ancilla dimension (>= 1)
        seed: Base seed
    Returns:
        Admissible samples in index order
    """
    if samples < 1:
        raise InvalidParameterError(f"samples must be positive, got {samples}")
    if ancilla_dim < 1:
        raise InvalidParameterError(f"ancilla_dim must be positive, got {ancilla_dim}")
    drawn = config.parallel_map(
        lambda index: _draw_sample(constraint, index, seed, ancilla_dim), range(samples)
    )
    accepted = [sample for sample in drawn if sample is not None]
    accepted.extend(_eigenstate_samples(constraint, ancilla_dim, samples))
    if not accepted:
        raise InfeasibleConstraintError(
            f"no admissible state found for E = {constraint.energy} on dim {constraint.dim}"
        )
    logger.debug("accepted %d of %d sampled states", len(accepted), samples)
    return accepted


def _output_distance(
    channel_a: ChannelFamily,
    t: float,
    channel_b: ChannelFamily,
    s: float,
    state: np.ndarray,
    ancilla_dim: int,
) -> float:
    if channel_a is channel_b and t == s:
        return 0.0
    difference = channel_a.apply_extended(state, t, ancilla_dim) - channel_b.apply_extended(
        state, s, ancilla_dim
    )
    return trace_norm(0.5 * (difference + difference.conj().T))


def ecd_lower_bound(
    channel_a: ChannelFamily,
    t: float,
    channel_b: ChannelFamily,
    s: float,
    constraint: EnergyConstraint,
    samples: int = 200,
    ancilla_dim: int = 4,
    seed: int = 0,
    candidates: Optional[Sequence[AdmissibleSample]] = None,
) -> EcdEstimate:
    """
    Lower bound on ||Lambda^A_t - Lambda^B_s|| in the alpha-energy-constrained diamond norm.
    Args:
        channel_a: First channel family, evaluated at t
        t: Time for channel_a
        channel_b: Second channel family, evaluated at s
        s: Time for channel_b
        constraint: Energy constraint on the reduced input state
        samples: Random draws
        ancilla_dim: Ancilla dimension (the supremum over ancillas is not taken)
        seed: Base seed; results are deterministic for a fixed seed
        candidates: Extra joint states; inadmissible ones are skipped
    Returns:
        EcdEstimate whose lower_bound is achieved by witness_state
    """
    if channel_a.dim != channel_b.dim or channel_a.dim != constraint.dim:
        raise ShapeMismatchError("channels and constraint must share one dimension")
    pool = list(sample_admissible_states(constraint, samples, ancilla_dim, seed))
    if candidates:
        offset = max(sample.index for sample in pool) + 1
        for position, extra in enumerate(candidates):
            if extra.state.shape == pool[0].state.shape and constraint.is_admissible(
                extra.state, ancilla_dim
            ):
                pool.append(
                    AdmissibleSample(offset + position, f"candidate:{extra.family}", extra.state)
                )

    distances = config.parallel_map(
        lambda sample: _output_distance(channel_a, t, channel_b, s, sample.state, ancilla_dim),
        pool,
    )
    # first maximal entry wins, independent of scheduling
    best = int(np.argmax(np.asarray(distances)))
    winner = pool[best]
    lower = min(float(distances[best]), 2.0)
    return EcdEstimate(
        lower_bound=lower,
        witness_state=DensityMatrix(winner.state),
        witness_index=winner.index,
        witness_family=winner.family,
        samples_used=len(pool),
        ancilla_dim=ancilla_dim,
    )
