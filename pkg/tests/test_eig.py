import numpy as np
import pytest
import scipy.sparse as sp

import qclab
from qclab.errors import InvalidParameter, NoConvergence, NotPositiveDefinite
from oracles import disc_neumann_eigenvalues


def small_pair(n, rng):
    a = rng.standard_normal((n, n))
    k = sp.csr_matrix(a @ a.T + n * np.eye(n))
    b = rng.standard_normal((n, n))
    m = sp.csr_matrix(b @ b.T + n * np.eye(n))
    return k, m


class TestFactorize:
    def test_identity_solves(self):
        f = qclab.factorize(sp.identity(5, format="csc"))
        b = np.arange(5.0)
        assert np.abs(f.solve(b) - b).max() < 1e-14

    def test_diagonal(self):
        f = qclab.factorize(sp.diags([2.0, 3.0]).tocsc())
        x = f.solve(np.array([2.0, 3.0]))
        assert np.abs(x - 1.0).max() < 1e-14

    def test_solve_residual_contract(self, disc_16_64, rng):
        k = qclab.assemble_stiffness(disc_16_64, qclab.identity_field())
        m = qclab.assemble_mass(disc_16_64)
        s = (k + 0.37 * m).tocsc()
        f = qclab.factorize(s)
        for _ in range(5):
            b = rng.standard_normal(disc_16_64.nv)
            x = f.solve(b)
            assert np.linalg.norm(s @ x - b) <= 1e-10 * np.linalg.norm(b)

    def test_singular_stiffness_rejected(self, disc_8_32):
        k = qclab.assemble_stiffness(disc_8_32, qclab.identity_field())
        with pytest.raises(NotPositiveDefinite):
            qclab.factorize(k.tocsc())


class TestGeneralizedEigs:
    def test_two_by_two(self):
        k = sp.csr_matrix(np.array([[1.0, -1.0], [-1.0, 1.0]]))
        m = sp.identity(2, format="csr")
        spec = qclab.generalized_eigs(k, m, 2, 1e-12)
        assert spec.eigenvalues == pytest.approx([0.0, 2.0], abs=1e-10)

    def test_disc_laplacian_against_bessel_oracle(self, disc_spectrum_32):
        truth = disc_neumann_eigenvalues()
        rel = np.abs(disc_spectrum_32.eigenvalues[1:6] - truth) / truth
        assert rel.max() < 0.01

    def test_zero_stiffness(self):
        k = sp.csr_matrix((10, 10))
        m = sp.identity(10, format="csr")
        spec = qclab.generalized_eigs(k, m, 3, 1e-10)
        assert np.abs(spec.eigenvalues).max() < 1e-12

    def test_zero_mode_invariants(self, disc_spectrum_32):
        ev = disc_spectrum_32.eigenvalues
        assert ev[0] >= -1e-8
        assert ev[0] <= 1e-6 * max(ev[1], 1.0)
        first = disc_spectrum_32.eigenvectors[:, 0]
        assert first.std() <= 1e-6 * abs(first.mean())

    def test_orthonormality_and_residuals(self, disc_laplace_32, disc_spectrum_32):
        k, m = disc_laplace_32
        x = disc_spectrum_32.eigenvectors
        gram = x.T @ (m @ x)
        assert np.abs(gram - np.eye(gram.shape[0])).max() < 1e-8
        assert disc_spectrum_32.residuals.max() <= 1e-9

    def test_v_star_uses_first_nonzero(self, disc_spectrum_32):
        assert disc_spectrum_32.v_star == pytest.approx(
            disc_spectrum_32.eigenvalues[1] ** -0.5, rel=1e-12)

    def test_no_convergence_budget(self, disc_8_32):
        k = qclab.assemble_stiffness(disc_8_32, qclab.identity_field())
        m = qclab.assemble_mass(disc_8_32)
        with pytest.raises(NoConvergence):
            qclab.generalized_eigs(k, m, 3, 0.0)

    def test_rejects_bad_mode_count(self):
        k = sp.identity(4, format="csr")
        with pytest.raises(InvalidParameter):
            qclab.generalized_eigs(k, k, 0, 1e-8)


class TestMinMaxProperties:
    def test_span_quotient_bounded(self, disc_laplace_32, disc_spectrum_32, rng):
        k, m = disc_laplace_32
        ev = disc_spectrum_32.eigenvalues
        x = disc_spectrum_32.eigenvectors
        for _ in range(100):
            n = rng.integers(2, len(ev) + 1)
            c = rng.standard_normal(n)
            v = x[:, :n] @ c
            q = qclab.rayleigh_quotient(k, m, v)
            assert q <= ev[n - 1] * (1.0 + 1e-8)

    def test_eigenvector_attains_eigenvalue(self, disc_laplace_32, disc_spectrum_32):
        k, m = disc_laplace_32
        for n in range(1, len(disc_spectrum_32.eigenvalues)):
            q = qclab.rayleigh_quotient(k, m, disc_spectrum_32.eigenvectors[:, n])
            assert q == pytest.approx(disc_spectrum_32.eigenvalues[n], rel=1e-8)

    def test_mean_zero_quotient_above_mu2(self, disc_laplace_32, disc_spectrum_32, rng):
        k, m = disc_laplace_32
        ones = np.ones(m.shape[0])
        total = ones @ (m @ ones)
        for _ in range(100):
            v = rng.standard_normal(m.shape[0])
            v = v - (ones @ (m @ v)) / total
            q = qclab.rayleigh_quotient(k, m, v)
            assert q >= disc_spectrum_32.eigenvalues[1] * (1.0 - 1e-8)


class TestDenseOracle:
    def test_two_by_two(self):
        k = sp.csr_matrix(np.array([[1.0, -1.0], [-1.0, 1.0]]))
        m = sp.identity(2, format="csr")
        spec = qclab.dense_generalized_eigs(k, m)
        assert spec.eigenvalues == pytest.approx([0.0, 2.0], abs=1e-12)

    def test_diagonal_sorted(self):
        k = sp.diags([3.0, 1.0, 2.0]).tocsr()
        m = sp.identity(3, format="csr")
        spec = qclab.dense_generalized_eigs(k, m)
        assert spec.eigenvalues == pytest.approx([1.0, 2.0, 3.0])

    def test_random_pair_matches_sparse(self, rng):
        k, m = small_pair(20, rng)
        dense = qclab.dense_generalized_eigs(k, m)
        sparse = qclab.generalized_eigs(k, m, 5, 1e-10)
        scale = np.abs(dense.eigenvalues[:5]).max()
        assert np.abs(sparse.eigenvalues - dense.eigenvalues[:5]).max() < 1e-8 * scale

    def test_rejects_indefinite_mass(self):
        k = sp.identity(3, format="csr")
        m = sp.diags([1.0, -1.0, 1.0]).tocsr()
        with pytest.raises(NotPositiveDefinite):
            qclab.dense_generalized_eigs(k, m)

    def test_rejects_large_dimension(self):
        k = sp.identity(2001, format="csr")
        with pytest.raises(InvalidParameter):
            qclab.dense_generalized_eigs(k, k)

    @pytest.mark.parametrize("mesh_args", [(4, 16), (8, 32)])
    def test_oracle_equivalence_on_meshes(self, mesh_args, weight_15r):
        mesh = qclab.build_disc_mesh(*mesh_args)
        k = qclab.assemble_stiffness(mesh, qclab.identity_field())
        m = qclab.assemble_mass(mesh, weight_15r)
        dense = qclab.dense_generalized_eigs(k, m)
        sparse = qclab.generalized_eigs(k, m, 6, 1e-10)
        ref = np.maximum(np.abs(dense.eigenvalues[:6]), dense.eigenvalues[1])
        assert np.all(np.abs(sparse.eigenvalues - dense.eigenvalues[:6]) <= 1e-8 * ref)
