"""
Quantum dynamical semigroups on truncated spaces.
Closed (von Neumann) evolution, the attenuator Kraus family and general
Lindblad generators with named presets, all realized as CPTP maps on dense
matrices. Superoperators use the column-stacking convention
vec(A X B) = (B^T kron A) vec(X).
"""

import logging
import math
import threading
from dataclasses import dataclass
from dataclasses import field
from enum import Enum
from functools import cached_property
from typing import Any
from typing import Callable
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

import numpy as np
from scipy import linalg
from scipy import optimize
from scipy import special
from scipy.sparse.linalg import expm_multiply

from . import config
from .errors import DimensionLimitError
from .errors import DomainError
from .errors import InvalidDimensionError
from .errors import InvalidParameterError
from .errors import ShapeMismatchError
from .errors import TruncationError
from .errors import UnknownPresetError
from .operators import HermitianOperator
from .operators import StateVector
from .operators import absolute
from .operators import as_matrix
from .operators import build_fock
from .operators import spectral_function

logger = logging.getLogger(__name__)

# Liouvillian propagators are materialized and cached up to this dim**2;
# larger generators act on vectors through expm_multiply.
PROPAGATOR_CACHE_LIMIT = 1600
PROPAGATOR_CACHE_ENTRIES = 64


class DensityMatrix:
    """Positive semi-definite unit-trace matrix. Immutable."""

    def __init__(self, matrix: Any, *, tol: float = config.TRACE_TOL):
        """
        Initialize the state.
        Args:
            matrix: Square array
            tol: Accepted deviation for hermiticity, trace and negative eigenvalues
        """
        data = np.array(as_matrix(matrix), dtype=complex)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise ShapeMismatchError(f"density matrix must be square, got shape {data.shape}")
        if data.shape[0] < 1:
            raise InvalidDimensionError("density matrix dimension must be positive")
        skew = float(np.max(np.abs(data - data.conj().T)))
        if skew > max(tol, config.HERMITIAN_TOL):
            raise DomainError(f"density matrix is not Hermitian (deviation {skew:.3g})", skew)
        data = 0.5 * (data + data.conj().T)
        trace = float(np.real(np.trace(data)))
        if abs(trace - 1.0) > tol:
            raise DomainError(f"density matrix trace is {trace:.15g}", trace)
        values = np.linalg.eigvalsh(data)
        if values[0] < -max(tol, config.PSD_TOL):
            raise DomainError(f"density matrix has eigenvalue {values[0]:.3g}", float(values[0]))
        data.setflags(write=False)
        values.setflags(write=False)
        self._matrix = data
        self._eigenvalues = values

    @classmethod
    def from_vector(
        cls, vector: Union[StateVector, Sequence[complex], np.ndarray]
    ) -> "DensityMatrix":
        """Pure state |v><v|."""
        if not isinstance(vector, StateVector):
            vector = StateVector.normalized(vector)
        return cls(vector.projector())

    @classmethod
    def from_probabilities(cls, probabilities: Sequence[float]) -> "DensityMatrix":
        """Diagonal state in the computational basis."""
        p = np.asarray(probabilities, dtype=float)
        return cls(np.diag(p / p.sum()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim) / dim)

    @classmethod
    def basis(cls, dim: int, index: int) -> "DensityMatrix":
        return cls.from_vector(StateVector.basis(dim, index))

    @classmethod
    def random(
        cls, dim: int, rng: np.random.Generator, rank: Optional[int] = None
    ) -> "DensityMatrix":
        """Ginibre-distributed random state of the given rank (full rank by default)."""
        rank = dim if rank is None else rank
        g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
        rho = g @ g.conj().T
        return cls(rho / np.real(np.trace(rho)))

    @classmethod
    def from_channel_output(cls, matrix: Any) -> "DensityMatrix":
        """Accept a channel output at the advertised truncation tolerance."""
        return cls(matrix, tol=config.CHANNEL_TOL)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return int(self._matrix.shape[0])

    @property
    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues with roundoff negatives clipped to zero."""
        return np.clip(self._eigenvalues, 0.0, None)

    def purity(self) -> float:
        return float(np.real(np.vdot(self._matrix, self._matrix)))

    def expectation(self, op: Any) -> float:
        return float(np.real(np.trace(as_matrix(op) @ self._matrix)))

    def tensor(self, other: "DensityMatrix") -> "DensityMatrix":
        return DensityMatrix(np.kron(self._matrix, other.matrix))

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


class BoundedBy(Enum):
    """Which part of the generator is relatively bounded by the other."""

    H_BOUNDS_K = "H_bounds_K"
    K_BOUNDS_H = "K_bounds_H"


@dataclass(frozen=True, eq=False)
class LindbladModel:
    """
    Generator -i[H, .] + sum_l (L . L* - 1/2 {L*L, .}) with the relative-bound
    data needed by the open-system convergence bound.
    """

    name: str
    hamiltonian: HermitianOperator
    lindblad_ops: Tuple[np.ndarray, ...]
    rel_bound_a: float = 0.0
    rel_bound_b: float = 0.0
    bounded_by: BoundedBy = BoundedBy.H_BOUNDS_K
    constraint: Optional[HermitianOperator] = None
    rel_bounds_fitted: bool = False
    params: Dict[str, float] = field(default_factory=dict)
    notes: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        dim = self.hamiltonian.dim
        ops = tuple(np.array(op, dtype=complex) for op in self.lindblad_ops)
        for op in ops:
            if op.shape != (dim, dim):
                raise ShapeMismatchError(
                    f"Lindblad operator shape {op.shape} does not match dim {dim}"
                )
            op.setflags(write=False)
        object.__setattr__(self, "lindblad_ops", ops)
        if self.rel_bound_a < 0 or self.rel_bound_b < 0:
            raise InvalidParameterError("relative bounds a, b must be nonnegative")
        top = float(self.dissipator.eigenvalues[-1])
        if top > config.PSD_TOL * max(1.0, self.dissipator.norm()):
            raise DomainError(
                f"dissipator is not negative semi-definite (eigenvalue {top:.3g})", top
            )

    @property
    def dim(self) -> int:
        return self.hamiltonian.dim

    @cached_property
    def dissipator(self) -> HermitianOperator:
        """K = -1/2 sum_l L_l* L_l."""
        total = np.zeros((self.dim, self.dim), dtype=complex)
        for op in self.lindblad_ops:
            total += op.conj().T @ op
        return HermitianOperator(-0.5 * total, check=False)

    @cached_property
    def constraint_op(self) -> HermitianOperator:
        """Operator S whose energy constrains the admissible inputs."""
        if self.constraint is not None:
            return self.constraint
        if self.bounded_by is BoundedBy.H_BOUNDS_K:
            return absolute(self.hamiltonian)
        return absolute(self.dissipator)

    @cached_property
    def superoperator(self) -> np.ndarray:
        return lindblad_superoperator(self)

    def describe(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "dim": self.dim,
            "params": dict(self.params),
            "rel_bound_a": self.rel_bound_a,
            "rel_bound_b": self.rel_bound_b,
            "rel_bounds_fitted": self.rel_bounds_fitted,
            "bounded_by": self.bounded_by.value,
            "notes": list(self.notes),
        }


def lindblad_superoperator(model: LindbladModel) -> np.ndarray:
    """
    Column-stacked superoperator of the Lindblad generator.
    Args:
        model: Lindblad model
    Returns:
        dim**2 x dim**2 matrix S with vec(L(rho)) = S vec(rho)
    """
    dim = model.dim
    size = dim * dim
    if size > config.SUPEROPERATOR_HARD_LIMIT:
        raise DimensionLimitError(
            f"superoperator size {size} exceeds the hard limit {config.SUPEROPERATOR_HARD_LIMIT}"
        )
    if size > config.SUPEROPERATOR_SOFT_LIMIT:
        logger.warning(
            "superoperator size %d exceeds the documented limit %d",
            size,
            config.SUPEROPERATOR_SOFT_LIMIT,
        )
    eye = np.eye(dim)
    h = model.hamiltonian.matrix
    generator = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for op in model.lindblad_ops:
        gain = op.conj().T @ op
        generator += np.kron(op.conj(), op) - 0.5 * (np.kron(eye, gain) + np.kron(gain.T, eye))
    return generator


def _vec_stack(stack: np.ndarray) -> np.ndarray:
    """Column-stack each matrix of a (k, d, d) stack into the columns of a (d*d, k) array."""
    k, d, _ = stack.shape
    return stack.transpose(0, 2, 1).reshape(k, d * d).T


def _unvec_stack(columns: np.ndarray, dim: int) -> np.ndarray:
    k = columns.shape[1]
    return columns.T.reshape(k, dim, dim).transpose(0, 2, 1)


def _kraus_coefficients(dim: int, t: float, level: int) -> np.ndarray:
    """
    Nonzero entries of the attenuator Kraus operator K_l, which maps |n> to
    sqrt(C(n,l) (1-e^-t)^l e^-t(n-l)) |n-l> for n = l..dim-1.
    """
    n = np.arange(level, dim, dtype=float)
    log_binom = special.gammaln(n + 1) - special.gammaln(level + 1) - special.gammaln(n - level + 1)
    log_weight = log_binom + level * math.log(-math.expm1(-t)) - t * (n - level)
    return np.exp(0.5 * log_weight)


def kraus_operators(dim: int, t: float, l_max: int) -> List[np.ndarray]:
    """
    Attenuator Kraus operators K_l = sqrt((1-e^-t)^l / l!) e^{-tN/2} a^l for l <= l_max.
    Args:
        dim: Truncation dimension
        t: Time (>= 0)
        l_max: Largest photon-loss order kept
    Returns:
        Dense Kraus matrices
    """
    if t < 0:
        raise InvalidParameterError(f"time must be nonnegative, got {t}")
    if t == 0:
        return [np.eye(dim, dtype=complex)]
    ops = []
    for level in range(min(l_max, dim - 1) + 1):
        op = np.zeros((dim, dim), dtype=complex)
        columns = np.arange(level, dim)
        op[columns - level, columns] = _kraus_coefficients(dim, t, level)
        ops.append(op)
    return ops


def kraus_completeness_defect(ops: Sequence[np.ndarray], support: int) -> float:
    """
    Spectral norm of sum_l K_l* K_l - I on the first `support` levels.
    """
    total = sum(op.conj().T @ op for op in ops)
    block = total[:support, :support] - np.eye(support)
    return float(np.linalg.norm(block, 2))


def _support_level(rho: DensityMatrix) -> int:
    """Highest Fock level carrying more than SUPPORT_TOL population."""
    populations = np.real(np.diag(rho.matrix))
    occupied = np.nonzero(populations > config.SUPPORT_TOL)[0]
    return int(occupied[-1]) if occupied.size else 0


def _attenuate_stack(stack: np.ndarray, t: float, l_max: int) -> np.ndarray:
    """Banded Kraus sum sum_l K_l X K_l* applied to each matrix X of a stack."""
    if t == 0:
        return stack.copy()
    dim = stack.shape[-1]
    out = np.zeros_like(stack)
    for level in range(min(l_max, dim - 1) + 1):
        coeff = _kraus_coefficients(dim, t, level)
        weights = np.outer(coeff, coeff)
        out[:, : dim - level, : dim - level] += weights * stack[:, level:, level:]
    return out


def attenuator_apply(
    rho: DensityMatrix, t: float, l_max: Union[int, str] = "auto"
) -> DensityMatrix:
    """
    Quantum-limited attenuator at time t via its Kraus series.
    Args:
        rho: Input state on a Fock truncation
        t: Time (>= 0)
        l_max: Highest loss order, or "auto" to cover the support of rho exactly
    Returns:
        Output state
    """
    if t < 0:
        raise InvalidParameterError(f"time must be nonnegative, got {t}")
    top = _support_level(rho)
    if l_max == "auto":
        order = top
    else:
        order = int(l_max)
        if order < 1:
            raise InvalidParameterError(f"l_max must be positive, got {l_max}")
        if top > rho.dim - order:
            raise TruncationError(
                f"state occupies level {top}, too close to the edge for l_max={order}",
                top + order,
            )
        defect = kraus_completeness_defect(kraus_operators(rho.dim, t, order), top + 1)
        if defect > config.KRAUS_DEFECT:
            logger.warning("Kraus completeness defect %.3g at l_max=%d", defect, order)
    out = _attenuate_stack(rho.matrix[np.newaxis], t, order)[0]
    return DensityMatrix.from_channel_output(out)


def evolve_von_neumann(rho: DensityMatrix, H: HermitianOperator, t: float) -> DensityMatrix:
    """Unitary conjugation e^{-itH} rho e^{itH}."""
    if rho.dim != H.dim:
        raise ShapeMismatchError(f"state dim {rho.dim} does not match Hamiltonian dim {H.dim}")
    unitary = _unitary(H, t)
    return DensityMatrix.from_channel_output(unitary @ rho.matrix @ unitary.conj().T)


def _unitary(H: HermitianOperator, t: float) -> np.ndarray:
    values, vectors = H.eigh()
    return (vectors * np.exp(-1j * t * values)) @ vectors.conj().T


def evolve_lindblad(rho: DensityMatrix, model: LindbladModel, t: float) -> DensityMatrix:
    """Exponentiated Lindblad generator applied to rho."""
    if rho.dim != model.dim:
        raise ShapeMismatchError(f"state dim {rho.dim} does not match model dim {model.dim}")
    return ChannelFamily.liouvillian(model).apply(rho, t)


class ChannelKind(Enum):
    UNITARY = "unitary"
    KRAUS_ATTENUATOR = "kraus_attenuator"
    LIOUVILLIAN = "liouvillian"


class ChannelFamily:
    """
    Time-parametrized CPTP map t -> Lambda_t on a truncation.
    Build instances with the unitary/attenuator/liouvillian constructors.
    """

    def __init__(
        self,
        kind: ChannelKind,
        dim: int,
        hamiltonian: Optional[HermitianOperator] = None,
        model: Optional[LindbladModel] = None,
    ):
        self.kind = kind
        self.dim = dim
        self.hamiltonian = hamiltonian
        self.model = model
        self._propagators: Dict[float, np.ndarray] = {}
        self._lock = threading.Lock()

    @classmethod
    def unitary(cls, H: HermitianOperator) -> "ChannelFamily":
        return cls(ChannelKind.UNITARY, H.dim, hamiltonian=H)

    @classmethod
    def identity(cls, dim: int) -> "ChannelFamily":
        return cls.unitary(HermitianOperator.zeros(dim))

    @classmethod
    def attenuator(cls, dim: int) -> "ChannelFamily":
        return cls(ChannelKind.KRAUS_ATTENUATOR, dim)

    @classmethod
    def liouvillian(cls, model: LindbladModel) -> "ChannelFamily":
        return cls(ChannelKind.LIOUVILLIAN, model.dim, model=model)

    def describe(self) -> Dict[str, Any]:
        info: Dict[str, Any] = {"kind": self.kind.value, "dim": self.dim}
        if self.model is not None:
            info["model"] = self.model.describe()
        return info

    def _generator(self) -> np.ndarray:
        assert self.model is not None
        with self._lock:
            return self.model.superoperator

    def _propagator(self, t: float) -> np.ndarray:
        # Shared by parallel_map workers; oldest entries are evicted first.
        with self._lock:
            cached = self._propagators.get(t)
            if cached is None:
                assert self.model is not None
                cached = linalg.expm(t * self.model.superoperator)
                if len(self._propagators) >= PROPAGATOR_CACHE_ENTRIES:
                    self._propagators.pop(next(iter(self._propagators)))
                self._propagators[t] = cached
            return cached

    def map_stack(self, stack: np.ndarray, t: float) -> np.ndarray:
        """
        Apply Lambda_t to every matrix of a (k, dim, dim) stack.
        The map is linear, so the matrices need not be states.
        """
        if t < 0:
            raise InvalidParameterError(f"time must be nonnegative, got {t}")
        if stack.shape[-1] != self.dim:
            raise ShapeMismatchError(
                f"input dim {stack.shape[-1]} does not match channel dim {self.dim}"
            )
        if self.kind is ChannelKind.UNITARY:
            assert self.hamiltonian is not None
            unitary = _unitary(self.hamiltonian, t)
            return unitary @ stack @ unitary.conj().T
        if self.kind is ChannelKind.KRAUS_ATTENUATOR:
            return _attenuate_stack(stack, t, self.dim - 1)
        if t == 0:
            return stack.copy()
        assert self.model is not None
        columns = _vec_stack(stack)
        if self.dim * self.dim <= PROPAGATOR_CACHE_LIMIT:
            evolved = self._propagator(t) @ columns
        else:
            evolved = expm_multiply(t * self._generator(), columns)
        return _unvec_stack(evolved, self.dim)

    def apply(self, rho: DensityMatrix, t: float) -> DensityMatrix:
        """Lambda_t(rho)."""
        if self.kind is ChannelKind.KRAUS_ATTENUATOR:
            return attenuator_apply(rho, t)
        out = self.map_stack(rho.matrix[np.newaxis], t)[0]
        return DensityMatrix.from_channel_output(out)

    def apply_extended(self, joint: Any, t: float, ancilla_dim: int) -> np.ndarray:
        """
        (Lambda_t (x) id)(joint) for a matrix on system (x) ancilla, system first.
        Returns the raw output matrix.
        """
        data = as_matrix(joint)
        size = self.dim * ancilla_dim
        if data.shape != (size, size):
            raise ShapeMismatchError(
                f"joint shape {data.shape} does not match {self.dim} x {ancilla_dim}"
            )
        blocks = data.reshape(self.dim, ancilla_dim, self.dim, ancilla_dim).transpose(1, 3, 0, 2)
        stack = blocks.reshape(ancilla_dim * ancilla_dim, self.dim, self.dim)
        mapped = self.map_stack(stack, t).reshape(ancilla_dim, ancilla_dim, self.dim, self.dim)
        return mapped.transpose(2, 0, 3, 1).reshape(size, size)


def fit_relative_bound(
    target: HermitianOperator, reference: HermitianOperator
) -> Tuple[float, float]:
    """
    Nonnegative (a, b) with ||T phi|| <= a ||R phi|| + b ||phi|| on the eigenbasis of R.
    Least-squares fit followed by raising b until every eigenvector satisfies the bound.
    """
    _, vectors = reference.eigh()
    x = np.linalg.norm(reference.matrix @ vectors, axis=0)
    y = np.linalg.norm(target.matrix @ vectors, axis=0)
    design = np.column_stack([x, np.ones_like(x)])
    (a, b), _ = optimize.nnls(design, y)
    b = max(b, float(np.max(y - a * x)), 0.0)
    return float(a), float(b)


def _require_positive(**rates: float) -> None:
    for name, value in rates.items():
        if not value > 0:
            raise InvalidParameterError(f"{name} must be positive, got {value}")


def attenuator_model(dim: int) -> LindbladModel:
    fock = build_fock(dim)
    return LindbladModel(
        name="attenuator",
        hamiltonian=HermitianOperator.zeros(dim),
        lindblad_ops=(fock.ladder.lower,),
        bounded_by=BoundedBy.K_BOUNDS_H,
        constraint=fock.number,
    )


def amplifier_model(dim: int) -> LindbladModel:
    fock = build_fock(dim)
    return LindbladModel(
        name="amplifier",
        hamiltonian=HermitianOperator.zeros(dim),
        lindblad_ops=(fock.ladder.raising,),
        bounded_by=BoundedBy.K_BOUNDS_H,
        constraint=fock.shifted_number,
        notes=(
            "K = -(1/2) a a* on the truncation, whose last level is cut to zero",
            "constraint S = M = N + I, the untruncated a a*",
        ),
    )


def damped_pumped_model(
    dim: int, gamma_down: float = 1.0, gamma_up: float = 1.0, zeta: float = 1.0
) -> LindbladModel:
    """Oscillator H = zeta N with loss sqrt(gamma_down) a and gain sqrt(gamma_up) a*."""
    _require_positive(gamma_down=gamma_down, gamma_up=gamma_up, zeta=zeta)
    fock = build_fock(dim)
    hamiltonian = zeta * fock.number
    ops = (math.sqrt(gamma_down) * fock.ladder.lower, math.sqrt(gamma_up) * fock.ladder.raising)
    draft = LindbladModel("damped_pumped", hamiltonian, ops, rel_bound_a=0.0, rel_bound_b=0.0)
    a, b = fit_relative_bound(draft.dissipator, hamiltonian)
    return LindbladModel(
        name="damped_pumped",
        hamiltonian=hamiltonian,
        lindblad_ops=ops,
        rel_bound_a=a,
        rel_bound_b=b,
        bounded_by=BoundedBy.H_BOUNDS_K,
        rel_bounds_fitted=True,
        params={"gamma_down": gamma_down, "gamma_up": gamma_up, "zeta": zeta},
    )


def brownian_model(
    dim: int, gamma1: float = 1.0, beta1: float = 0.0, gamma2: float = 0.0, beta2: float = 1.0
) -> LindbladModel:
    """
    Quantum Brownian motion with H = -d^2/dx^2 + x^2 = 2N + 1 and
    L_j = gamma_j x + beta_j d/dx on the truncation.
    """
    coefficients = [gamma1, beta1, gamma2, beta2]
    if not all(math.isfinite(c) for c in coefficients):
        raise InvalidParameterError("Brownian coefficients must be finite")
    if all(c == 0 for c in coefficients):
        raise InvalidParameterError("at least one Brownian coefficient must be nonzero")
    fock = build_fock(dim)
    hamiltonian = 2.0 * fock.oscillator
    x = fock.position.matrix
    d = fock.derivative
    ops = (gamma1 * x + beta1 * d, gamma2 * x + beta2 * d)
    draft = LindbladModel("brownian", hamiltonian, ops)
    a, b = fit_relative_bound(draft.dissipator, hamiltonian)
    return LindbladModel(
        name="brownian",
        hamiltonian=hamiltonian,
        lindblad_ops=ops,
        rel_bound_a=a,
        rel_bound_b=b,
        bounded_by=BoundedBy.H_BOUNDS_K,
        rel_bounds_fitted=True,
        params={"gamma1": gamma1, "beta1": beta1, "gamma2": gamma2, "beta2": beta2},
    )


def jaynes_cummings_model(
    dim: int,
    nu: float = 1.0,
    delta: float = 0.5,
    omega: float = 0.5,
    eta: float = 0.1,
    gamma: float = 0.2,
) -> LindbladModel:
    """
    Two-level ion in a harmonic trap on Fock(dim) (x) C^2:
    H = nu N + delta/2 sigma_z - omega/2 sin(eta (a + a*)) (sigma_+ + sigma_-),
    with spontaneous emission L = sqrt(gamma) sigma_-.
    """
    _require_positive(nu=nu, gamma=gamma)
    fock = build_fock(dim)
    a = fock.ladder.lower
    quadrature = HermitianOperator(a + a.conj().T, check=False)
    sine = spectral_function(quadrature, lambda x: math.sin(eta * x)).matrix
    sigma_z = np.diag([1.0, -1.0])
    sigma_plus = np.array([[0.0, 1.0], [0.0, 0.0]])
    sigma_minus = sigma_plus.T
    eye2 = np.eye(2)
    matrix = (
        nu * np.kron(fock.number.matrix, eye2)
        + 0.5 * delta * np.kron(np.eye(dim), sigma_z)
        - 0.5 * omega * np.kron(sine, sigma_plus + sigma_minus)
    )
    hamiltonian = HermitianOperator(matrix)
    jump = math.sqrt(gamma) * np.kron(np.eye(dim), sigma_minus)
    return LindbladModel(
        name="jaynes_cummings",
        hamiltonian=hamiltonian,
        lindblad_ops=(jump,),
        rel_bound_a=0.0,
        rel_bound_b=0.5 * gamma,
        bounded_by=BoundedBy.H_BOUNDS_K,
        params={"nu": nu, "delta": delta, "omega": omega, "eta": eta, "gamma": gamma},
        notes=(
            "bounded dissipator: a = 0, b = ||K|| = gamma/2",
            "constraint S = |H|, including the spin and coupling terms",
            "adjoint jump sqrt(gamma) sigma_+ is the Heisenberg-picture partner of L",
        ),
    )


PRESETS: Dict[str, Callable[..., LindbladModel]] = {
    "attenuator": attenuator_model,
    "amplifier": amplifier_model,
    "damped_pumped": damped_pumped_model,
    "brownian": brownian_model,
    "jaynes_cummings": jaynes_cummings_model,
}


def preset(name: str, dim: int, **params: float) -> LindbladModel:
    """
    Named Lindblad model on a truncation.
    Args:
        name: One of PRESETS
        dim: Fock truncation (Jaynes-Cummings acts on dim x 2)
        params: Preset-specific rates
    Returns:
        LindbladModel with relative bounds populated
    """
    builder = PRESETS.get(name)
    if builder is None:
        raise UnknownPresetError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    try:
        return builder(dim, **params)
    except TypeError as e:
        raise InvalidParameterError(f"bad parameters for preset {name!r}: {e}") from e
