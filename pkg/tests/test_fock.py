import math

import numpy as np
import pytest

from squidmech import fock


def random_operator(rng, dim):
    mat = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return fock.QuantumOperator(mat, (dim,))


class TestLadderOperators:
    def test_destroy_2(self):
        np.testing.assert_allclose(fock.destroy(2).to_array(),
                                   [[0.0, 1.0], [0.0, 0.0]])

    def test_destroy_entry(self):
        assert fock.destroy(3).to_array()[1, 2] == pytest.approx(math.sqrt(2.0))

    def test_create_2(self):
        np.testing.assert_allclose(fock.create(2).to_array(),
                                   [[0.0, 0.0], [1.0, 0.0]])

    def test_number_diagonal(self):
        np.testing.assert_allclose(np.diag(fock.number(4).to_array()).real,
                                   [0.0, 1.0, 2.0, 3.0])

    def test_number_is_create_destroy(self):
        for dim in (2, 5, 9):
            product = (fock.create(dim) @ fock.destroy(dim)).to_array()
            np.testing.assert_allclose(product, fock.number(dim).to_array(),
                                       atol=1e-14)

    @pytest.mark.parametrize("dim", [2, 3, 8, 17])
    def test_commutator_truncation(self, dim):
        a = fock.destroy(dim)
        comm = a.commutator(a.dag()).to_array()
        expected = np.eye(dim)
        expected[-1, -1] = 1.0 - dim  # the only truncation artifact
        np.testing.assert_allclose(comm, expected, atol=1e-12)
        # restricted to the first dim-1 levels the algebra is exact
        block = comm[:dim - 1, :dim - 1] - np.eye(dim - 1)
        assert np.max(np.abs(block)) < 1e-12

    def test_small_dims_rejected(self):
        for factory in (fock.destroy, fock.create, fock.number, fock.identity):
            with pytest.raises(ValueError):
                factory(1)


class TestRepresentation:
    def test_ladder_is_sparse(self):
        assert fock.destroy(16).is_sparse

    def test_dense_for_full_matrices(self):
        x = fock.position(3)
        assert (x @ x).is_sparse is False  # fill 5/9 > 1/4

    def test_switch_is_transparent(self):
        dense = fock.QuantumOperator(np.ones((3, 3)), (3,))
        sparse = fock.destroy(3)
        out = dense @ sparse + sparse.dag() @ dense
        assert out.shape == (3, 3)

    def test_hermitian_flag_checked(self):
        with pytest.raises(ValueError):
            fock.QuantumOperator(np.array([[0.0, 1.0], [0.0, 0.0]]), (2,),
                                 hermitian=True)
        fock.QuantumOperator(np.eye(2), (2,), hermitian=True)

    def test_dim_mismatch_rejected(self):
        with pytest.raises(ValueError):
            fock.QuantumOperator(np.eye(5), (2, 2))
        with pytest.raises(ValueError):
            fock.destroy(2) @ fock.destroy(3)

    def test_immutability(self):
        op = fock.destroy(2)
        with pytest.raises(AttributeError):
            op.dims = (3,)


class TestTensor:
    def test_identity_product(self):
        out = fock.tensor([fock.identity(2), fock.identity(3)])
        np.testing.assert_allclose(out.to_array(), np.eye(6))
        assert tuple(out.dims) == (2, 3)

    def test_single_entry(self):
        out = fock.tensor([fock.destroy(2), fock.identity(2)])
        # <(0,0)| a (x) 1 |(1,0)> = 1
        assert out.to_array()[0, 2] == pytest.approx(1.0)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            fock.tensor([])

    def test_associativity(self):
        rng = np.random.default_rng(7)
        a, b, c = (random_operator(rng, d) for d in (2, 3, 2))
        left = fock.tensor([fock.tensor([a, b]), c])
        right = fock.tensor([a, fock.tensor([b, c])])
        np.testing.assert_allclose(left.to_array(), right.to_array(), atol=1e-12)

    def test_mixed_product_rule(self):
        rng = np.random.default_rng(11)
        a, c = random_operator(rng, 3), random_operator(rng, 3)
        b, d = random_operator(rng, 4), random_operator(rng, 4)
        lhs = fock.tensor([a, b]) @ fock.tensor([c, d])
        rhs = fock.tensor([a @ c, b @ d])
        assert (lhs - rhs).max_abs() < 1e-12 * max(lhs.max_abs(), 1.0)

    def test_mode_helpers(self):
        dims = (2, 3)
        a = fock.mode_destroy(dims, 0)
        n = fock.mode_number(dims, 1)
        np.testing.assert_allclose((a.dag() @ a).to_array(),
                                   fock.tensor([fock.number(2), fock.identity(3)]).to_array(),
                                   atol=1e-14)
        np.testing.assert_allclose(np.diag(n.to_array()).real, [0, 1, 2, 0, 1, 2])


class TestExpectation:
    def test_vacuum_number(self):
        vac = fock.basis_state((4,), (0,))
        assert fock.expectation(fock.number(4), vac) == 0.0

    def test_fock_number(self):
        two = fock.basis_state((4,), (2,))
        assert fock.expectation(fock.number(4), two).real == pytest.approx(2.0)

    def test_coherent_number(self):
        state = fock.coherent_state(30, 1.3 + 0.4j)
        mean = fock.expectation(fock.number(30), state)
        assert mean.real == pytest.approx(abs(1.3 + 0.4j) ** 2, rel=1e-9)
        assert abs(mean.imag) < 1e-10

    def test_linearity(self):
        rng = np.random.default_rng(3)
        dim = 5
        op1, op2 = random_operator(rng, dim), random_operator(rng, dim)
        mix = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        rho = mix @ mix.conj().T
        rho /= np.trace(rho).real
        state = fock.QuantumState(rho, (dim,))
        lhs = fock.expectation(2.0 * op1 + (-0.5 + 1j) * op2, state)
        rhs = 2.0 * fock.expectation(op1, state) \
            + (-0.5 + 1j) * fock.expectation(op2, state)
        assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_hermitian_gives_real(self):
        rng = np.random.default_rng(5)
        op = random_operator(rng, 6)
        herm = op + op.dag()
        state = fock.thermal_state(6, 0.7)
        assert abs(fock.expectation(herm, state).imag) < 1e-10

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            fock.expectation(fock.number(3), fock.basis_state((4,), (0,)))


class TestStates:
    def test_basis_state_index(self):
        state = fock.basis_state((2, 3), (1, 2))
        assert state.density_matrix[5, 5] == 1.0
        assert np.trace(state.density_matrix) == 1.0

    def test_basis_occupation_out_of_range(self):
        with pytest.raises(ValueError):
            fock.basis_state((2, 3), (2, 0))

    def test_thermal_zero_is_vacuum(self):
        np.testing.assert_allclose(fock.thermal_state(8, 0.0).density_matrix,
                                   fock.basis_state((8,), (0,)).density_matrix)

    def test_thermal_geometric_law(self):
        pops = fock.thermal_state(20, 1.0).populations()
        assert pops[1] / pops[0] == pytest.approx(0.5, rel=1e-12)

    def test_thermal_records_truncation(self):
        state = fock.thermal_state(4, 5.0)
        assert state.discarded_weight > 0.1
        assert np.trace(state.density_matrix).real == pytest.approx(1.0, abs=1e-14)

    def test_coherent_mean_number(self):
        state = fock.coherent_state(30, 2.0)
        mean = fock.expectation(fock.number(30), state).real
        assert abs(mean - 4.0) < 1e-6

    def test_constructors_satisfy_invariants(self):
        for state in (fock.basis_state((3, 4), (2, 1)),
                      fock.coherent_state(25, 1.5),
                      fock.thermal_state(25, 2.0)):
            state.validate()

    def test_validate_catches_bad_trace(self):
        state = fock.QuantumState(np.eye(3, dtype=complex), (3,))
        with pytest.raises(ValueError):
            state.validate()

    def test_validate_catches_negativity(self):
        rho = np.diag([1.5, -0.5, 0.0]).astype(complex)
        with pytest.raises(ValueError):
            fock.QuantumState(rho, (3,)).validate()

    def test_reduced_product_state(self):
        state = fock.basis_state((3, 4), (1, 2))
        np.testing.assert_allclose(state.reduced(0).populations(), [0, 1, 0])
        np.testing.assert_allclose(state.reduced(1).populations(), [0, 0, 1, 0])

    def test_reduced_entangled_state(self):
        # (|00> + |11>)/sqrt(2) reduces to the maximally mixed qubit
        ket = np.zeros(4, dtype=complex)
        ket[0] = ket[3] = 1.0 / math.sqrt(2.0)
        state = fock.QuantumState(np.outer(ket, ket.conj()), (2, 2))
        for sub in (0, 1):
            np.testing.assert_allclose(state.reduced(sub).density_matrix,
                                       np.eye(2) / 2.0, atol=1e-14)

    def test_reduced_three_subsystems(self):
        state = fock.basis_state((2, 3, 2), (1, 2, 0))
        np.testing.assert_allclose(state.reduced(1).populations(), [0, 0, 1])

    def test_top_level_population(self):
        state = fock.thermal_state(6, 1.0)
        pops = state.populations()
        assert state.top_level_population(0) == pytest.approx(pops[-1])
