"""
Tests for entropies, Lipschitz checks and entropy continuity bounds
"""

import math

import numpy as np
import pytest

from qdslim.channels import DensityMatrix
from qdslim.entropy import ContinuityKind
from qdslim.entropy import ContinuityMode
from qdslim.entropy import ContinuityParams
from qdslim.entropy import attenuator_entropy_window
from qdslim.entropy import check_renyi_lipschitz
from qdslim.entropy import check_tsallis_lipschitz
from qdslim.entropy import conditional
from qdslim.entropy import entropy_continuity_bound
from qdslim.entropy import g_of
from qdslim.entropy import h_of
from qdslim.entropy import mutual_information
from qdslim.entropy import r_eps
from qdslim.entropy import relative
from qdslim.entropy import renyi_q
from qdslim.entropy import renyi_rate_bound
from qdslim.entropy import tsallis_q
from qdslim.entropy import tsallis_rate_bound
from qdslim.entropy import von_neumann
from qdslim.errors import DomainError
from qdslim.errors import InvalidParameterError
from qdslim.errors import TimeWindowError
from qdslim.gibbs import builtin_spectrum
from qdslim.gibbs import gibbs_entropy
from qdslim.operators import build_fock


def bell_state() -> np.ndarray:
    vector = np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0)
    return np.outer(vector, vector)


class TestEntropies:
    """Test von Neumann, conditional, mutual and relative entropy"""

    def test_von_neumann_values(self):
        """Pure states have zero entropy, the maximally mixed state log d"""
        assert von_neumann(DensityMatrix.basis(3, 0)) == 0.0
        assert math.isclose(von_neumann(DensityMatrix.maximally_mixed(4)), math.log(4.0))

    def test_bell_state(self):
        """H(A|B) = -log 2 and I(A;B) = 2 log 2 for a Bell state"""
        rho = bell_state()
        assert math.isclose(conditional(rho, (2, 2)), -math.log(2.0), abs_tol=1e-12)
        assert math.isclose(mutual_information(rho, (2, 2)), 2.0 * math.log(2.0), abs_tol=1e-12)

    def test_product_state_has_no_mutual_information(self):
        """I(A;B) = 0 on product states"""
        rng = np.random.default_rng(0)
        joint = DensityMatrix.random(2, rng).tensor(DensityMatrix.random(3, rng))
        assert mutual_information(joint, (2, 3)) < 1e-12

    def test_relative_entropy(self):
        """D(rho||rho) = 0, D(pure||mixed) = log d, and D = inf off support"""
        mixed = DensityMatrix.maximally_mixed(2)
        pure = DensityMatrix.basis(2, 0)
        assert relative(mixed, mixed) < 1e-12
        assert math.isclose(relative(pure, mixed), math.log(2.0))
        assert math.isinf(relative(mixed, pure))

    def test_tsallis_and_renyi(self):
        """Maximally mixed qubit: T_2 = 1/2 and S_2 = log 2"""
        mixed = DensityMatrix.maximally_mixed(2)
        assert math.isclose(tsallis_q(mixed, 2.0), 0.5)
        assert math.isclose(renyi_q(mixed, 2.0), math.log(2.0))

    def test_order_must_exceed_one(self):
        """q <= 1 is outside the domain"""
        with pytest.raises(DomainError):
            tsallis_q(DensityMatrix.basis(2, 0), 1.0)


class TestMaximumEntropy:
    """Test that Gibbs states maximize entropy at fixed mean energy"""

    @pytest.mark.parametrize("E", [2.0, 5.0])
    def test_random_states_stay_below_gibbs_entropy(self, E):
        """No dim-60 state with <N> = E beats the Gibbs entropy of N"""
        dim = 60
        number = build_fock(dim).number
        ceiling = gibbs_entropy(builtin_spectrum("number"), E)
        rng = np.random.default_rng(int(E))
        for _ in range(200):
            levels = int(rng.integers(2, dim))
            matrix = np.zeros((dim, dim), dtype=complex)
            matrix[:levels, :levels] = DensityMatrix.random(levels, rng).matrix
            mean = DensityMatrix(matrix).expectation(number)
            # mix toward the vacuum or the top level to land on <N> = E
            if mean > E:
                weight, anchor = E / mean, 0
            else:
                weight, anchor = (dim - 1 - E) / (dim - 1 - mean), dim - 1
            mixed = weight * matrix + (1.0 - weight) * DensityMatrix.basis(dim, anchor).matrix
            rho = DensityMatrix(mixed)
            assert math.isclose(rho.expectation(number), E, abs_tol=1e-9)
            assert von_neumann(rho) <= ceiling + 1e-8


class TestLipschitz:
    """Test the Tsallis and Renyi Lipschitz checks"""

    def test_tsallis_on_random_pairs(self):
        """The Tsallis Lipschitz bound holds on random pairs"""
        rng = np.random.default_rng(4)
        for q in (1.5, 2.0, 3.0):
            rho = DensityMatrix.random(4, rng)
            sigma = DensityMatrix.random(4, rng)
            assert check_tsallis_lipschitz(rho, sigma, q).passed

    @pytest.mark.parametrize("q", [2.0, 3.0])
    def test_tsallis_on_many_pairs(self, q):
        """The Tsallis Lipschitz bound holds on 500 pairs of mixed rank"""
        rng = np.random.default_rng(int(q))
        for k in range(500):
            dim = 2 + k % 7
            rho = DensityMatrix.random(dim, rng, rank=int(rng.integers(1, dim + 1)))
            sigma = DensityMatrix.random(dim, rng)
            report = check_tsallis_lipschitz(rho, sigma, q)
            assert report.passed, report.params

    def test_renyi_close_states(self):
        """Nearby states satisfy the Renyi bound"""
        rho = DensityMatrix.from_probabilities([0.6, 0.3, 0.1])
        sigma = DensityMatrix.from_probabilities([0.58, 0.31, 0.11])
        report = check_renyi_lipschitz(rho, sigma, 2.0, delta_floor=0.5)
        assert report.applicable
        assert report.passed

    def test_renyi_inapplicable(self):
        """Far-apart states fall outside the hypotheses"""
        up, down = DensityMatrix.basis(2, 0), DensityMatrix.basis(2, 1)
        report = check_renyi_lipschitz(up, down, 2.0, 0.5)
        assert not report.applicable
        assert report.status == "inapplicable"
        assert math.isinf(report.bound_value)


class TestScalarFunctions:
    """Test h, g and r_eps"""

    def test_binary_entropy(self):
        """h(1/2) = log 2 and h(0) = 0"""
        assert math.isclose(h_of(0.5), math.log(2.0))
        assert h_of(0.0) == 0.0

    def test_g(self):
        """g(0) = 0 and g(1) = 2 log 2"""
        assert g_of(0.0) == 0.0
        assert math.isclose(g_of(1.0), 2.0 * math.log(2.0))

    def test_r_eps(self):
        """r_eps(t) at the right end of its range"""
        assert math.isclose(r_eps(0.1, 5.0), 3.5 / 0.5)
        with pytest.raises(DomainError):
            r_eps(0.1, 6.0)


class TestContinuityBounds:
    """Test energy-constrained entropy continuity bounds"""

    def test_simple_exact_form(self):
        """2 eps g(E/eps) + h(eps) over the number spectrum"""
        params = ContinuityParams(
            E=1.0,
            epsilon=0.1,
            eta=1.0,
            mode=ContinuityMode.EXACT_GIBBS,
            spectrum=builtin_spectrum("number"),
        )
        bound = entropy_continuity_bound(params, ContinuityKind.VN_SIMPLE)
        expected = 0.2 * g_of(10.0) + h_of(0.1)
        assert math.isclose(bound.value, expected, rel_tol=1e-9)
        assert math.isclose(bound.asymptotic, 0.2 * math.log(10.0) + h_of(0.1))

    def test_two_eps_needs_epsilon_prime(self):
        """The two-epsilon forms require epsilon'"""
        params = ContinuityParams(E=1.0, epsilon=0.1, eta=1.0)
        with pytest.raises(InvalidParameterError):
            entropy_continuity_bound(params, ContinuityKind.VN_TWO_EPS)

    def test_conditional_above_two_eps(self):
        """The conditional bound dominates the von Neumann two-epsilon bound"""
        params = ContinuityParams(E=2.0, epsilon=0.05, eta=1.0, epsilon_prime=0.2)
        two_eps = entropy_continuity_bound(params, ContinuityKind.VN_TWO_EPS)
        cond = entropy_continuity_bound(params, ContinuityKind.CONDITIONAL)
        assert cond.value > two_eps.value
        assert math.isclose(params.delta, 0.15 / 1.2)

    def test_exact_mode_needs_spectrum(self):
        """exact_gibbs without a spectrum is refused"""
        with pytest.raises(InvalidParameterError):
            ContinuityParams(E=1.0, epsilon=0.1, eta=1.0, mode=ContinuityMode.EXACT_GIBBS)

    def test_bad_epsilon_prime(self):
        """epsilon' must exceed epsilon"""
        with pytest.raises(InvalidParameterError):
            ContinuityParams(E=1.0, epsilon=0.3, eta=1.0, epsilon_prime=0.2)


class TestRateBounds:
    """Test entropy rate bounds along semigroup trajectories"""

    def test_tsallis_rate(self):
        """q/(q-1) omega dt^alpha"""
        assert math.isclose(tsallis_rate_bound(2.0, 3.0, 0.5, 0.25), 3.0)

    def test_renyi_rate_window(self):
        """Outside omega t^alpha < delta the Renyi rate bound is refused"""
        assert math.isclose(renyi_rate_bound(2.0, 1.0, 1.0, 0.25, 0.5), 2.0)
        with pytest.raises(TimeWindowError) as info:
            renyi_rate_bound(2.0, 1.0, 1.0, 0.6, 0.5)
        assert math.isclose(info.value.max_dt, 0.5)

    def test_attenuator_window(self):
        """alpha = 1/2 gives t0 = eps^2 / (8 E)"""
        assert math.isclose(attenuator_entropy_window(0.5, 2.0, 0.1), 0.01 / 16.0)
