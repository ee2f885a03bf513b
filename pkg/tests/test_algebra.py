"""Tests for the 2x2 matrix layer and the su(2) structure."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from ymdec import algebra as alg


def su2_vectors(max_norm=10.0):
    coord = st.floats(-max_norm / 2, max_norm / 2, allow_nan=False)
    return st.tuples(coord, coord, coord).map(np.array)


class TestBasis:
    def test_lambda_is_pauli_over_2i(self):
        np.testing.assert_allclose(alg.LAMBDA, alg.SIGMA / 2j)

    def test_commutator_cycles(self):
        # [lam_a, lam_b] = eps_abc lam_c, the su(2) structure constants
        for a, b, c in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
            got = alg.commutator(alg.LAMBDA[a], alg.LAMBDA[b])
            np.testing.assert_allclose(got, alg.LAMBDA[c], atol=1e-15)

    def test_conj_transpose_negates_basis(self):
        for lam in alg.LAMBDA:
            np.testing.assert_allclose(alg.conj_transpose(lam), -lam, atol=1e-15)

    def test_identity_is_neutral(self):
        m = np.arange(4).reshape(2, 2) + 1j
        np.testing.assert_allclose(alg.mat_mul(alg.IDENTITY2, m), m)

    def test_sigma1_is_not_algebra(self):
        assert not alg.is_su2_algebra(alg.SIGMA[0])
        assert alg.is_su2_algebra(alg.LAMBDA[0])
        assert alg.is_su2_group(alg.IDENTITY2)


class TestEmbedProject:
    def test_embed_zero(self):
        np.testing.assert_array_equal(alg.embed_su2(np.zeros(3)), np.zeros((2, 2)))

    def test_project_identity_is_zero(self):
        np.testing.assert_array_equal(alg.project_su2(alg.IDENTITY2), np.zeros(3))

    def test_roundtrip_123(self):
        v = np.array([1.0, 2.0, 3.0])
        np.testing.assert_allclose(alg.project_su2(alg.embed_su2(v)), v, atol=1e-14)

    @given(su2_vectors())
    @settings(max_examples=50, deadline=None)
    def test_embed_lands_in_algebra(self, v):
        m = alg.embed_su2(v)
        assert np.abs(m + alg.conj_transpose(m)).max() <= 1e-12 * (1 + np.abs(v).max())
        assert abs(alg.trace(m)) <= 1e-12 * (1 + np.abs(v).max())

    @given(su2_vectors(), su2_vectors())
    @settings(max_examples=50, deadline=None)
    def test_commutator_closure(self, v, w):
        c = alg.commutator(alg.embed_su2(v), alg.embed_su2(w))
        assert alg.is_su2_algebra(c, tol=1e-10 * (1 + np.abs(v).max() * np.abs(w).max()))

    def test_batched_shapes(self):
        v = np.random.default_rng(0).uniform(-1, 1, size=(5, 7, 3))
        m = alg.embed_su2(v)
        assert m.shape == (5, 7, 2, 2)
        np.testing.assert_allclose(alg.project_su2(m), v, atol=1e-14)


class TestExp:
    def test_exp_zero_is_identity(self):
        np.testing.assert_array_equal(alg.exp_su2(np.zeros(3)), alg.IDENTITY2)

    def test_exp_pi_about_third_axis(self):
        got = alg.exp_su2(np.array([0.0, 0.0, np.pi]))
        np.testing.assert_allclose(got, np.diag([-1j, 1j]), atol=1e-15)

    def test_exp_matches_matrix_exponential(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            v = rng.uniform(-5, 5, size=3)
            np.testing.assert_allclose(
                alg.exp_su2(v), expm(alg.embed_su2(v)), atol=1e-12
            )

    def test_exp_is_group_valued(self):
        rng = np.random.default_rng(7)
        v = rng.uniform(-1, 1, size=(1000, 3))
        v *= (rng.uniform(0, 10, size=1000) / np.linalg.norm(v, axis=1))[:, None]
        u = alg.exp_su2(v)
        assert alg.is_su2_group(u, tol=1e-10)

    def test_exp_tiny_angle_branch(self):
        v = np.array([1e-12, 0.0, 0.0])
        u = alg.exp_su2(v)
        assert alg.is_su2_group(u, tol=1e-14)
        np.testing.assert_allclose(u, alg.IDENTITY2 + alg.embed_su2(v), atol=1e-20)


class TestMisc:
    @given(su2_vectors(2.0), su2_vectors(2.0))
    @settings(max_examples=50, deadline=None)
    def test_trace_cyclic(self, v, w):
        a, b = alg.embed_su2(v), alg.embed_su2(w)
        assert abs(alg.trace(a @ b) - alg.trace(b @ a)) <= 1e-12

    def test_inv2(self):
        rng = np.random.default_rng(3)
        m = rng.normal(size=(4, 2, 2)) + 1j * rng.normal(size=(4, 2, 2))
        np.testing.assert_allclose(alg.inv2(m) @ m, np.broadcast_to(alg.IDENTITY2, m.shape), atol=1e-12)

    def test_pair_encoding_roundtrip(self):
        m = np.array([[1 + 2j, 3 - 4j], [-5j, 6.5]])
        p = alg.matrix_to_pairs(m)
        assert p.shape == (4, 2)
        np.testing.assert_array_equal(p[0], [1.0, 2.0])
        np.testing.assert_array_equal(alg.matrix_from_pairs(p), m)
