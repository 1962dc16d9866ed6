import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from eadsim.errors import ConfigurationError, ContractViolation
from eadsim.linalg import (
    DensityMatrix,
    PureState,
    allclose,
    dagger,
    hermitian_eigen,
    kron,
    partial_trace,
    partial_transpose,
    tensor,
    trace_norm,
    von_neumann_entropy,
)
from eadsim.states import (
    PAULI_X,
    bell_phi_plus,
    evolve_abc,
    initial_rho_ab,
    prepare_abc,
    u_ac,
)

SIGMA_AB = np.array([[1, -1j, -1j, 1], [1j, 1, 1, 1j], [1j, 1, 1, 1j], [1, -1j, -1j, 1]]) / 4


def density(rng, dim, labels=()):
    return DensityMatrix(oracles.random_density(rng, dim), labels)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


class TestKron:
    def test_identity(self):
        assert allclose(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_xx_is_antidiagonal(self):
        assert allclose(kron(PAULI_X, PAULI_X), np.fliplr(np.eye(4)))

    def test_projector_times_x(self):
        p0 = np.diag([1, 0])
        expected = np.zeros((4, 4))
        expected[:2, :2] = [[0, 1], [1, 0]]
        assert allclose(kron(p0, PAULI_X), expected)


class TestDagger:
    def test_identity(self):
        assert allclose(dagger(np.eye(3)), np.eye(3))

    @pytest.mark.parametrize("t", [0.0, 0.3, math.pi / 4, 2.0, 7.5])
    def test_unitarity(self, t):
        u = u_ac(t)
        assert allclose(dagger(u) @ u, np.eye(4))

    def test_involution(self, rng):
        a = rng.normal(size=(3, 5)) + 1j * rng.normal(size=(3, 5))
        assert allclose(dagger(dagger(a)), a, atol=0)


class TestDensityMatrix:
    def test_rejects_non_hermitian(self):
        with pytest.raises(ContractViolation):
            DensityMatrix([[0.5, 0.1], [0.0, 0.5]])

    def test_rejects_bad_trace(self):
        with pytest.raises(ContractViolation):
            DensityMatrix(np.eye(2))

    def test_rejects_negative(self):
        with pytest.raises(ContractViolation):
            DensityMatrix(np.diag([1.5, -0.5]))

    def test_rejects_mismatched_layout(self):
        with pytest.raises(ContractViolation):
            DensityMatrix(np.eye(4) / 4, ("A", "B"), (1, 2))

    def test_immutable(self):
        rho = initial_rho_ab()
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1

    def test_pure_state_norm(self):
        with pytest.raises(ContractViolation):
            PureState([1, 1])


class TestPartialTrace:
    def test_bell_reduction_is_maximally_mixed(self):
        assert partial_trace(bell_phi_plus().density(), {"A"}).approx_equal(np.eye(2) / 2)

    def test_sigma_abc_reduces_to_paper_matrix(self):
        sigma = evolve_abc(prepare_abc(), math.pi / 4)
        assert partial_trace(sigma, {"A", "B"}).approx_equal(SIGMA_AB)

    def test_product_state(self, rng):
        a, b = density(rng, 2, ("A",)), density(rng, 2, ("B",))
        assert partial_trace(tensor(a, b), {"A"}).approx_equal(a)
        assert partial_trace(tensor(a, b), {"B"}).approx_equal(b)

    def test_matches_loop_oracle(self, rng):
        m = oracles.random_density(rng, 8)
        rho = DensityMatrix(m, ("A", "B", "C"))
        assert partial_trace(rho, {"A", "B"}).approx_equal(oracles.trace_out_last(m, 4, 2))

    def test_multi_qubit_subsystem(self, rng):
        a, b = density(rng, 4, ("A",)), density(rng, 2, ("B",))
        joint = tensor(a, b)
        assert joint.qubits == (2, 1)
        assert partial_trace(joint, {"A"}).approx_equal(a)
        assert partial_trace(joint, "B").approx_equal(b)

    def test_unknown_label(self):
        with pytest.raises(ConfigurationError):
            partial_trace(initial_rho_ab(), {"Z"})

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_full_trace_is_one(self, seed):
        rho = density(np.random.default_rng(seed), 8, ("A", "B", "C"))
        scalar = partial_trace(rho, set())
        assert scalar.dim == 1 and abs(scalar.matrix[0, 0] - 1) < 1e-12


class TestPartialTranspose:
    def test_product_state_stays_psd(self, rng):
        a, b = density(rng, 2, ("A",)), density(rng, 2, ("B",))
        pt = partial_transpose(tensor(a, b), "B")
        assert allclose(pt, np.kron(a.matrix, b.matrix.T))
        assert hermitian_eigen(pt)[0][0] > -1e-12

    def test_initial_state_is_ppt(self):
        assert hermitian_eigen(partial_transpose(initial_rho_ab(), "B"))[0][0] > -1e-12

    def test_sigma_ab_min_eigenvalue(self):
        # oracle: LAPACK on the loop-built transpose gives -1/2
        w, _ = hermitian_eigen(partial_transpose(DensityMatrix(SIGMA_AB, ("A", "B")), "B"))
        assert abs(w[0] + 0.5) < 1e-12

    def test_matches_loop_oracle(self, rng):
        m = oracles.random_density(rng, 4)
        assert allclose(partial_transpose(DensityMatrix(m, ("A", "B")), "B"), oracles.transpose_second_qubit(m))

    def test_unknown_label(self):
        with pytest.raises(ConfigurationError):
            partial_transpose(initial_rho_ab(), "C")

    @given(seeds, st.sampled_from(["A", "B", "C"]))
    @settings(max_examples=25, deadline=None)
    def test_involution(self, seed, label):
        # separable inputs keep the transposed matrix a valid state, so it can be fed back in
        rng = np.random.default_rng(seed)
        m = sum(w * np.kron(np.kron(oracles.random_density(rng, 2), oracles.random_density(rng, 2)),
                            oracles.random_density(rng, 2)) for w in rng.dirichlet(np.ones(3)))
        rho = DensityMatrix(m, ("A", "B", "C"))
        once = DensityMatrix(partial_transpose(rho, label), rho.labels)
        assert np.array_equal(partial_transpose(once, label), rho.matrix)


class TestEigen:
    def test_pauli_x(self):
        w, _ = hermitian_eigen(PAULI_X)
        assert allclose(w, [-1, 1])

    def test_initial_state(self):
        w, _ = hermitian_eigen(initial_rho_ab().matrix)
        assert allclose(w, [0, 0, 0.5, 0.5])

    def test_hamiltonian(self):
        w, _ = hermitian_eigen(np.kron(PAULI_X, PAULI_X))
        assert allclose(w, [-1, -1, 1, 1])

    def test_rejects_non_hermitian(self):
        with pytest.raises(ContractViolation):
            hermitian_eigen([[0, 1], [0, 0]])

    def test_rejects_large(self):
        with pytest.raises(ContractViolation):
            hermitian_eigen(np.eye(128))

    @given(seeds, st.sampled_from([1, 2, 3, 4, 7, 8, 16, 64]))
    @settings(max_examples=40, deadline=None)
    def test_eigenpairs_and_reconstruction(self, seed, n):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        a = a + a.conj().T
        w, v = hermitian_eigen(a)
        assert np.all(np.diff(w) >= 0)
        assert np.max(np.abs(a @ v - v * w)) < 1e-10 * max(1, np.abs(w).max())
        assert np.max(np.abs(v.conj().T @ v - np.eye(n))) < 1e-10
        assert np.max(np.abs((v * w) @ v.conj().T - a)) < 1e-9 * max(1, np.abs(w).max())
        assert np.allclose(w, np.linalg.eigvalsh(a), atol=1e-10 * max(1, np.abs(w).max()))


class TestTraceNorm:
    def test_density_matrix(self, rng):
        assert abs(trace_norm(oracles.random_density(rng, 4)) - 1) < 1e-12

    def test_pauli_x(self):
        assert abs(trace_norm(PAULI_X) - 2) < 1e-12

    def test_partial_transpose_of_sigma_ab(self):
        assert abs(trace_norm(partial_transpose(DensityMatrix(SIGMA_AB, ("A", "B")), "B")) - 2) < 1e-12

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_bounds_trace(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        a = a + a.conj().T
        assert trace_norm(a) >= abs(np.trace(a)) - 1e-12


class TestEntropy:
    def test_pure(self, rng):
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        assert abs(von_neumann_entropy(PureState(v / np.linalg.norm(v)).density())) < 1e-12

    def test_maximally_mixed_qubit(self):
        assert abs(von_neumann_entropy(DensityMatrix(np.eye(2) / 2)) - 1) < 1e-12

    def test_initial_state(self):
        assert abs(von_neumann_entropy(initial_rho_ab()) - 1) < 1e-12

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_bounds_and_oracle(self, seed):
        m = oracles.random_density(np.random.default_rng(seed), 8)
        s = von_neumann_entropy(DensityMatrix(m))
        assert 0 <= s <= 3
        assert abs(s - oracles.entropy_bits(m)) < 1e-10
