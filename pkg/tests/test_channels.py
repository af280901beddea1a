"""
Tests for states, channel families and Lindblad presets
"""

import math

import numpy as np
import pytest

from qdslim import config
from qdslim.channels import PRESETS
from qdslim.channels import PROPAGATOR_CACHE_ENTRIES
from qdslim.channels import BoundedBy
from qdslim.channels import ChannelFamily
from qdslim.channels import DensityMatrix
from qdslim.channels import LindbladModel
from qdslim.channels import attenuator_apply
from qdslim.channels import evolve_von_neumann
from qdslim.channels import fit_relative_bound
from qdslim.channels import kraus_completeness_defect
from qdslim.channels import kraus_operators
from qdslim.channels import preset
from qdslim.errors import DomainError
from qdslim.errors import InvalidParameterError
from qdslim.errors import ShapeMismatchError
from qdslim.errors import UnknownPresetError
from qdslim.metrics import trace_norm
from qdslim.operators import HermitianOperator
from qdslim.operators import absolute
from qdslim.operators import build_fock


class TestDensityMatrix:
    """Test state validation"""

    def test_rejects_bad_trace(self):
        """Trace must be one"""
        with pytest.raises(DomainError):
            DensityMatrix(np.eye(2))

    def test_rejects_negative_eigenvalue(self):
        """Negative eigenvalues are rejected"""
        with pytest.raises(DomainError):
            DensityMatrix(np.diag([1.5, -0.5]))

    def test_purity(self):
        """Pure states have purity one, the maximally mixed state 1/d"""
        assert math.isclose(DensityMatrix.basis(3, 1).purity(), 1.0)
        assert math.isclose(DensityMatrix.maximally_mixed(4).purity(), 0.25)


class TestAttenuator:
    """Test the Kraus attenuator"""

    def test_kraus_completeness(self):
        """sum K_l* K_l = I on the whole truncation with every loss order"""
        ops = kraus_operators(8, 0.7, 7)
        assert kraus_completeness_defect(ops, 8) < 1e-12

    def test_number_decays(self):
        """<N> decays as e^{-t} <N>"""
        dim = 10
        number = build_fock(dim).number
        rho = DensityMatrix.basis(dim, 4)
        out = attenuator_apply(rho, 0.5)
        assert math.isclose(out.expectation(number), 4.0 * math.exp(-0.5), rel_tol=1e-10)

    def test_vacuum_is_fixed(self):
        """The vacuum is invariant"""
        rho = DensityMatrix.basis(6, 0)
        assert np.allclose(attenuator_apply(rho, 2.0).matrix, rho.matrix)

    def test_family_matches_liouvillian(self):
        """The Kraus family and the exponentiated generator agree"""
        dim = 6
        rho = DensityMatrix.random(dim, np.random.default_rng(3))
        kraus = ChannelFamily.attenuator(dim).apply(rho, 0.4)
        generator = ChannelFamily.liouvillian(preset("attenuator", dim)).apply(rho, 0.4)
        assert np.allclose(kraus.matrix, generator.matrix, atol=1e-9)

    def test_family_matches_liouvillian_on_random_states(self):
        """Kraus and generator outputs agree on 20 random dim-30 states"""
        dim = 30
        rng = np.random.default_rng(30)
        kraus = ChannelFamily.attenuator(dim)
        generator = ChannelFamily.liouvillian(preset("attenuator", dim))
        for _ in range(20):
            rho = DensityMatrix.random(dim, rng, rank=int(rng.integers(1, dim + 1)))
            for t in (0.1, 0.5, 1.0):
                diff = kraus.apply(rho, t).matrix - generator.apply(rho, t).matrix
                assert trace_norm(diff) <= 1e-6

    def test_energy_law_on_large_truncation(self):
        """<N> = e^{-t} <N>_0 at dim 60 for inputs with <N> <= 5"""
        dim = 60
        number = build_fock(dim).number
        rng = np.random.default_rng(60)
        channel = ChannelFamily.attenuator(dim)
        for _ in range(10):
            padded = np.zeros((dim, dim), dtype=complex)
            padded[:6, :6] = DensityMatrix.random(6, rng).matrix
            rho = DensityMatrix(padded)
            initial = rho.expectation(number)
            assert initial <= 5.0
            for t in (0.2, 1.0, 3.0):
                energy = channel.apply(rho, t).expectation(number)
                assert abs(energy - math.exp(-t) * initial) <= 1e-6

    @pytest.mark.parametrize("kind", ["kraus", "liouvillian"])
    def test_semigroup(self, kind):
        """Lambda_0.3 after Lambda_0.4 equals Lambda_0.7"""
        dim = 6
        if kind == "kraus":
            channel = ChannelFamily.attenuator(dim)
        else:
            channel = ChannelFamily.liouvillian(preset("damped_pumped", dim))
        stack = DensityMatrix.random(dim, np.random.default_rng(12)).matrix[np.newaxis]
        composed = channel.map_stack(channel.map_stack(stack, 0.4), 0.3)
        assert np.allclose(composed, channel.map_stack(stack, 0.7), atol=1e-10)

    def test_negative_time(self):
        """Time must be nonnegative"""
        with pytest.raises(InvalidParameterError):
            ChannelFamily.attenuator(4).map_stack(np.eye(4)[np.newaxis] / 4, -1.0)


class TestChannelFamily:
    """Test unitary evolution and extension by an ancilla"""

    def test_identity_family(self):
        """The identity family leaves states unchanged"""
        rho = DensityMatrix.random(4, np.random.default_rng(0))
        assert np.allclose(ChannelFamily.identity(4).apply(rho, 3.0).matrix, rho.matrix)

    def test_von_neumann_preserves_spectrum(self):
        """Unitary evolution preserves eigenvalues"""
        rng = np.random.default_rng(1)
        H = HermitianOperator.random(5, rng)
        rho = DensityMatrix.random(5, rng)
        out = evolve_von_neumann(rho, H, 1.3)
        assert np.allclose(out.eigenvalues, rho.eigenvalues, atol=1e-10)

    def test_apply_extended_on_product(self):
        """(Lambda (x) id)(rho (x) sigma) = Lambda(rho) (x) sigma"""
        dim = 5
        channel = ChannelFamily.attenuator(dim)
        rho = DensityMatrix.random(dim, np.random.default_rng(2))
        sigma = DensityMatrix.random(2, np.random.default_rng(4))
        joint = rho.tensor(sigma)
        expected = np.kron(channel.apply(rho, 0.3).matrix, sigma.matrix)
        assert np.allclose(channel.apply_extended(joint, 0.3, 2), expected, atol=1e-12)

    def test_apply_extended_shape_mismatch(self):
        """The joint matrix must live on dim x ancilla"""
        with pytest.raises(ShapeMismatchError):
            ChannelFamily.attenuator(3).apply_extended(np.eye(5) / 5, 0.1, 2)


class TestPresets:
    """Test the named Lindblad models"""

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_trace_preserving(self, name):
        """Every preset generator maps to a trace-preserving semigroup"""
        model = preset(name, 4)
        dim = model.dim
        rho = DensityMatrix.random(dim, np.random.default_rng(5))
        out = ChannelFamily.liouvillian(model).map_stack(rho.matrix[np.newaxis], 0.2)[0]
        assert math.isclose(np.real(np.trace(out)), 1.0, abs_tol=1e-9)

    def test_jaynes_cummings_dimension(self):
        """Jaynes-Cummings acts on Fock (x) C^2"""
        model = preset("jaynes_cummings", 3)
        assert model.dim == 6
        assert math.isclose(model.rel_bound_b, 0.1)

    def test_jaynes_cummings_constrains_full_hamiltonian(self):
        """The constraint is |H| with the spin and coupling terms, not nu N alone"""
        model = preset("jaynes_cummings", 4)
        assert np.allclose(model.constraint_op.matrix, absolute(model.hamiltonian).matrix)
        spin_up_vacuum = np.zeros(model.dim)
        spin_up_vacuum[0] = 1.0
        energy = np.real(spin_up_vacuum @ model.constraint_op.matrix @ spin_up_vacuum)
        assert energy >= 0.25 - 1e-12

    def test_attenuator_model_data(self):
        """The attenuator preset has K bounding H and constraint N"""
        model = preset("attenuator", 5)
        assert model.bounded_by is BoundedBy.K_BOUNDS_H
        assert np.allclose(model.constraint_op.eigenvalues, np.arange(5))
        assert np.allclose(model.dissipator.eigenvalues, np.sort(-0.5 * np.arange(5)))

    def test_unknown_preset(self):
        """Unknown names list the available presets"""
        with pytest.raises(UnknownPresetError) as info:
            preset("laser", 4)
        assert "attenuator" in str(info.value)

    def test_bad_preset_parameter(self):
        """Unexpected keyword arguments are reported as parameter errors"""
        with pytest.raises(InvalidParameterError):
            preset("damped_pumped", 4, temperature=1.0)

    def test_rejects_mismatched_jump(self):
        """Jump operators must match the Hamiltonian dimension"""
        with pytest.raises(ShapeMismatchError):
            LindbladModel("bad", HermitianOperator.zeros(2), (np.eye(3),))

    def test_amplifier_constraint_is_shifted_number(self):
        """The amplifier constrains with M = N + I"""
        model = preset("amplifier", 6)
        assert np.allclose(model.constraint_op.eigenvalues, np.arange(1, 7))
        assert any("N + I" in note for note in model.notes)

    def test_amplifier_energy_law(self):
        """<M> grows as e^t <M>_0 under the amplifier"""
        model = preset("amplifier", 40)
        out = ChannelFamily.liouvillian(model).apply(DensityMatrix.basis(40, 2), 0.5)
        energy = out.expectation(model.constraint_op)
        assert math.isclose(energy, 3.0 * math.exp(0.5), rel_tol=1e-8)

    @pytest.mark.slow
    @pytest.mark.parametrize("t", [0.25, 0.5, 1.0])
    def test_amplifier_energy_law_on_large_truncation(self, t):
        """<M> = e^t <M>_0 at dim 60 while the top levels stay empty"""
        model = preset("amplifier", 60)
        out = ChannelFamily.liouvillian(model).apply(DensityMatrix.basis(60, 2), t)
        energy = out.expectation(model.constraint_op)
        assert math.isclose(energy, 3.0 * math.exp(t), rel_tol=1e-6)


class TestPropagatorCache:
    """Test the shared Liouvillian propagator cache"""

    def test_parallel_calls_agree_with_serial(self):
        """Workers sharing one family see the same propagators"""
        channel = ChannelFamily.liouvillian(preset("damped_pumped", 5))
        rho = DensityMatrix.random(5, np.random.default_rng(8)).matrix[np.newaxis]
        times = [0.1 * k for k in range(1, 13)] * 3
        parallel = config.parallel_map(lambda t: channel.map_stack(rho, t)[0], times)
        fresh = ChannelFamily.liouvillian(preset("damped_pumped", 5))
        for t, out in zip(times, parallel):
            assert np.allclose(out, fresh.map_stack(rho, t)[0], atol=1e-12)

    def test_cache_is_bounded(self):
        """Old propagators are evicted once the cache is full"""
        channel = ChannelFamily.liouvillian(preset("attenuator", 3))
        rho = DensityMatrix.basis(3, 1).matrix[np.newaxis]
        for k in range(PROPAGATOR_CACHE_ENTRIES + 10):
            channel.map_stack(rho, 0.01 * (k + 1))
        assert len(channel._propagators) == PROPAGATOR_CACHE_ENTRIES


class TestRelativeBoundFit:
    """Test the fitted relative bound"""

    def test_bound_holds_on_eigenbasis(self):
        """||T phi|| <= a ||R phi|| + b on every eigenvector of R"""
        reference = HermitianOperator.diagonal(np.arange(1.0, 7.0))
        target = HermitianOperator.diagonal(0.5 * np.arange(1.0, 7.0) + 1.0)
        a, b = fit_relative_bound(target, reference)
        x = np.arange(1.0, 7.0)
        assert np.all(0.5 * x + 1.0 <= a * x + b + 1e-9)
