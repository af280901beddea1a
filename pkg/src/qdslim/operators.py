"""
Finite truncations of the operators used throughout qdslim: Fock-space ladder
operators, the number operator, the oscillator Hamiltonian, constraint operators,
and spectral calculus on dense Hermitian matrices.
"""

import logging
import math
from typing import Any
from typing import Callable
from typing import NamedTuple
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np
from scipy import special

from . import config
from .errors import DomainError
from .errors import InvalidDimensionError
from .errors import ShapeMismatchError
from .errors import TruncationError

logger = logging.getLogger(__name__)


def as_matrix(obj: Any) -> np.ndarray:
    """Return the dense matrix behind an operator, state or raw array."""
    matrix = getattr(obj, "matrix", obj)
    return np.asarray(matrix)


class HermitianOperator:
    """
    Dense self-adjoint matrix on a truncated space with a lazily cached
    eigendecomposition. Instances are immutable.
    """

    def __init__(self, matrix: Any, *, check: bool = True):
        """
        Initialize the operator.
        Args:
            matrix: Square array, Hermitian to within HERMITIAN_TOL elementwise
            check: Validate hermiticity before symmetrizing
        """
        data = np.array(as_matrix(matrix), dtype=complex)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise ShapeMismatchError(f"operator must be square, got shape {data.shape}")
        if data.shape[0] < 1:
            raise InvalidDimensionError("operator dimension must be positive")
        if check:
            deviation = np.max(np.abs(data - data.conj().T)) if data.size else 0.0
            if deviation > config.HERMITIAN_TOL * max(1.0, np.max(np.abs(data))):
                raise DomainError(f"matrix is not Hermitian (deviation {deviation:.3g})", deviation)
        data = 0.5 * (data + data.conj().T)
        data.setflags(write=False)
        self._matrix = data
        self._eig: Optional[Tuple[np.ndarray, np.ndarray]] = None
        if self.dim > config.OPERATOR_SOFT_LIMIT:
            logger.warning(
                "operator dim %d exceeds the documented limit %d",
                self.dim,
                config.OPERATOR_SOFT_LIMIT,
            )

    @classmethod
    def diagonal(cls, values: Sequence[float]) -> "HermitianOperator":
        """Diagonal operator with the given real entries."""
        return cls(np.diag(np.asarray(values, dtype=float)), check=False)

    @classmethod
    def zeros(cls, dim: int) -> "HermitianOperator":
        """Zero operator."""
        return cls(np.zeros((dim, dim), dtype=complex), check=False)

    @classmethod
    def random(cls, dim: int, rng: np.random.Generator) -> "HermitianOperator":
        """GUE-like random Hermitian matrix with spectrum of order one."""
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        return cls((g + g.conj().T) / (2.0 * math.sqrt(dim)), check=False)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return int(self._matrix.shape[0])

    def eigh(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Eigenvalues in ascending order and orthonormal eigenvectors as columns.
        Ties keep their original order (stable sort).
        """
        cached = self._eig
        if cached is None:
            values, vectors = np.linalg.eigh(self._matrix)
            order = np.argsort(values, kind="stable")
            values = values[order]
            vectors = vectors[:, order]
            values.setflags(write=False)
            vectors.setflags(write=False)
            cached = (values, vectors)
            # single assignment so concurrent readers see either None or the full pair
            self._eig = cached
        return cached

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.eigh()[0]

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    def norm(self) -> float:
        """Operator norm (largest absolute eigenvalue)."""
        return float(np.max(np.abs(self.eigenvalues)))

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        _check_same_dim(self.dim, other.dim)
        return HermitianOperator(self._matrix + other.matrix, check=False)

    def __mul__(self, scalar: float) -> "HermitianOperator":
        return HermitianOperator(float(scalar) * self._matrix, check=False)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"HermitianOperator(dim={self.dim})"


class LadderPair(NamedTuple):
    """Truncated annihilation (lower) and creation (raising) operators."""

    dim: int
    lower: np.ndarray
    raising: np.ndarray


class StateVector:
    """Unit vector on a truncated space."""

    def __init__(self, amplitudes: Any):
        data = np.array(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(data)
        if abs(norm - 1.0) > config.HERMITIAN_TOL:
            raise DomainError(f"state vector must have unit norm, got {norm:.15g}", float(norm))
        data.setflags(write=False)
        self._amplitudes = data

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        vector = np.zeros(dim, dtype=complex)
        vector[index] = 1.0
        return cls(vector)

    @classmethod
    def normalized(cls, amplitudes: Any) -> "StateVector":
        data = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(data / np.linalg.norm(data))

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    @property
    def dim(self) -> int:
        return int(self._amplitudes.shape[0])

    def projector(self) -> np.ndarray:
        return np.outer(self._amplitudes, self._amplitudes.conj())


class FockOperators(NamedTuple):
    """Ladder pair, number operator and oscillator Hamiltonian on one truncation."""

    ladder: LadderPair
    number: HermitianOperator
    oscillator: HermitianOperator

    @property
    def dim(self) -> int:
        return self.ladder.dim

    @property
    def shifted_number(self) -> HermitianOperator:
        """M = aa* = N + 1 on the span of the first dim Fock states."""
        return HermitianOperator.diagonal(np.arange(1, self.dim + 1, dtype=float))

    @property
    def position(self) -> HermitianOperator:
        """Dimensionless position quadrature x = (a + a*)/sqrt(2)."""
        a = self.ladder.lower
        return HermitianOperator((a + a.conj().T) / math.sqrt(2.0), check=False)

    @property
    def derivative(self) -> np.ndarray:
        """Derivative d/dx = (a - a*)/sqrt(2); anti-Hermitian, so a raw matrix."""
        a = self.ladder.lower
        return (a - a.conj().T) / math.sqrt(2.0)


def _check_dim(dim: int) -> None:
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f"truncation dimension must be an integer >= 2, got {dim}")


def _check_same_dim(left: int, right: int) -> None:
    if left != right:
        raise ShapeMismatchError(f"dimension mismatch: {left} vs {right}")


def build_fock(dim: int) -> FockOperators:
    """
    Build the truncated ladder operators, N = a*a and H_osc = N + 1/2.
    Args:
        dim: Number of Fock levels kept (>= 2)
    Returns:
        FockOperators, which unpacks as (ladder, number, oscillator)
    """
    _check_dim(dim)
    lower = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)
    raising = lower.conj().T.copy()
    lower.setflags(write=False)
    raising.setflags(write=False)
    levels = np.arange(dim, dtype=float)
    return FockOperators(
        ladder=LadderPair(dim=dim, lower=lower, raising=raising),
        number=HermitianOperator.diagonal(levels),
        oscillator=HermitianOperator.diagonal(levels + 0.5),
    )


def _coherent_tail(mean: float, dim: int) -> float:
    """Poisson mass beyond the truncation, P(n >= dim)."""
    if mean == 0.0:
        return 0.0
    return float(special.gammainc(dim, mean))


def coherent_state(alpha: complex, dim: int) -> StateVector:
    """
    Truncated coherent state |alpha>, renormalized after truncation.
    Args:
        alpha: Complex displacement
        dim: Truncation dimension
    Returns:
        StateVector with a|alpha> = alpha|alpha> up to the truncation edge
    """
    _check_dim(dim)
    alpha = complex(alpha)
    mean = abs(alpha) ** 2
    leak = _coherent_tail(mean, dim)
    if leak > config.COHERENT_LEAK:
        required = dim
        while _coherent_tail(mean, required) > config.COHERENT_LEAK:
            required += max(1, required // 8)
        raise TruncationError(f"coherent state leaks {leak:.3g} beyond dim {dim}", required)

    n = np.arange(dim)
    if alpha == 0:
        amplitudes = np.zeros(dim, dtype=complex)
        amplitudes[0] = 1.0
        return StateVector(amplitudes)
    log_mod = -0.5 * mean + n * math.log(abs(alpha)) - 0.5 * special.gammaln(n + 1)
    amplitudes = np.exp(log_mod) * np.exp(1j * n * np.angle(alpha))
    logger.debug("coherent state alpha=%s dim=%d leak=%.3g", alpha, dim, leak)
    return StateVector.normalized(amplitudes)


def spectral_function(op: HermitianOperator, f: Callable[[float], float]) -> HermitianOperator:
    """
    Apply a real function through the eigendecomposition, V diag(f(lambda)) V*.
    Args:
        op: Hermitian operator
        f: Real scalar function, evaluated once per eigenvalue
    Returns:
        The operator f(op)
    """
    values, vectors = op.eigh()
    mapped = np.empty_like(values)
    for index, value in enumerate(values):
        result = float(f(float(value)))
        if not math.isfinite(result):
            raise DomainError(f"f is not finite at eigenvalue {value!r}", float(value))
        mapped[index] = result
    return HermitianOperator((vectors * mapped) @ vectors.conj().T, check=False)


def operator_power(op: HermitianOperator, power: float) -> HermitianOperator:
    """
    op**power; fractional powers require op to be positive semi-definite.
    Eigenvalues within -PSD_TOL of zero are clipped before a fractional power.
    """
    if float(power).is_integer():
        return HermitianOperator(np.linalg.matrix_power(op.matrix, int(power)), check=False)
    if op.min_eigenvalue < -config.PSD_TOL:
        raise DomainError(
            f"fractional power {power} of an operator with eigenvalue {op.min_eigenvalue:.3g}",
            op.min_eigenvalue,
        )
    return spectral_function(op, lambda x: max(x, 0.0) ** power)


def absolute(op: HermitianOperator) -> HermitianOperator:
    """Operator modulus |op|."""
    return spectral_function(op, abs)


def expected_energy(rho: Any, op: HermitianOperator, power: float = 1.0) -> float:
    """
    Regularized trace tr(op**power rho) on the truncation.
    Args:
        rho: DensityMatrix or matrix on the same dimension as op
        op: Constraint operator
        power: Exponent 2*alpha
    Returns:
        Nonnegative real energy for PSD op
    """
    matrix = as_matrix(rho)
    _check_same_dim(op.dim, matrix.shape[0])
    powered = operator_power(op, power)
    return float(np.real(np.trace(powered.matrix @ matrix)))


def partial_trace(matrix: Any, dims: Tuple[int, int], keep: int) -> np.ndarray:
    """
    Partial trace over a bipartition in row-major (A first) index order.
    Args:
        matrix: Operator on A (x) B
        dims: (dim_A, dim_B)
        keep: 0 keeps A, 1 keeps B
    Returns:
        Reduced operator
    """
    data = as_matrix(matrix)
    dim_a, dim_b = int(dims[0]), int(dims[1])
    if dim_a < 1 or dim_b < 1 or dim_a * dim_b != data.shape[0]:
        raise InvalidDimensionError(f"dims {dims} do not factor dimension {data.shape[0]}")
    blocks = data.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == 0:
        return np.einsum("ijkj->ik", blocks)
    if keep == 1:
        return np.einsum("ijil->jl", blocks)
    raise InvalidDimensionError(f"keep must be 0 or 1, got {keep}")
