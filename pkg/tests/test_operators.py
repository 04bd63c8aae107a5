import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from frameadmit import (
    DiagonalOperator,
    FiniteHermitian,
    SequenceModel,
    closure_membership,
    eigenvalues_desc,
    embed_extended,
    l_k_op,
    spectral_summary,
    u_k_op,
    u_k_seq,
)
from frameadmit.errors import KMismatch
from frameadmit.fixtures import gapped_identity_pair, half_one_pair, harmonic_gap_pair, one_two_pair
from oracles import brute_u_k


def random_orthogonal(rng, n):
    Q, R = np.linalg.qr(rng.normal(size=(n, n)))
    return Q * np.sign(np.diag(R))


class TestFinite:
    def test_eigenvalues_desc(self):
        assert eigenvalues_desc(np.diag([1.0, 2.0])).tolist() == [2.0, 1.0]
        assert eigenvalues_desc(2 * np.eye(2)).tolist() == [2.0, 2.0]

    def test_planted_spectrum(self):
        rng = np.random.default_rng(1)
        lam = np.array([5.0, 3.0, 2.5, 1.0, 0.1])
        Q = random_orthogonal(rng, 5)
        assert np.max(np.abs(eigenvalues_desc(Q @ np.diag(lam) @ Q.T) - lam)) <= 1e-10

    def test_rejects_nonsymmetric(self):
        with pytest.raises(ValueError):
            FiniteHermitian([[1.0, 2.0], [0.0, 1.0]])

    def test_u_k_finite(self):
        S = FiniteHermitian(2 * np.eye(3))
        assert u_k_op(S, 2).value == 4.0
        assert l_k_op(S, 1).value == 2.0
        with pytest.raises(KMismatch):
            u_k_op(S, 4)

    @given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_unitary_invariance(self, n, seed):
        rng = np.random.default_rng(seed)
        A = rng.normal(size=(n, n))
        S = FiniteHermitian(A + A.T)
        Q = random_orthogonal(rng, n)
        T = FiniteHermitian(Q.T @ S.matrix @ Q)
        for k in range(1, n + 1):
            assert abs(u_k_op(S, k).value - u_k_op(T, k).value) <= 1e-9 * (1 + S.norm)

    @given(st.integers(2, 5), st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_convexity(self, n, seed):
        rng = np.random.default_rng(seed)
        A, B = rng.normal(size=(2, n, n))
        S, T = FiniteHermitian(A + A.T), FiniteHermitian(B + B.T)
        for t in (0, 0.25, 0.5, 0.75, 1):
            M = FiniteHermitian(t * S.matrix + (1 - t) * T.matrix)
            for k in range(1, n + 1):
                lhs = u_k_op(M, k).value
                rhs = t * u_k_op(S, k).value + (1 - t) * u_k_op(T, k).value
                assert lhs <= rhs + 1e-9 * (1 + abs(rhs))

    def test_projection_sampling_lower_bounds(self):
        rng = np.random.default_rng(7)
        for n in range(1, 7):
            A = rng.normal(size=(n, n))
            S = FiniteHermitian(A + A.T)
            for k in range(1, n + 1):
                exact = u_k_op(S, k).value
                best = -math.inf
                for _ in range(200):
                    Q = random_orthogonal(rng, n)[:, :k]
                    best = max(best, float(np.trace(Q.T @ S.matrix @ Q)))
                assert best <= exact + 1e-9
            # the top eigenvectors attain the supremum
            P = S.eigenvectors[:, :k]
            assert abs(np.trace(P.T @ S.matrix @ P) - u_k_op(S, k).value) <= 1e-6

    def test_positive_definite(self):
        assert FiniteHermitian(np.eye(2)).is_positive_definite()
        assert not FiniteHermitian(np.diag([1.0, 0.0])).is_positive_definite()


class TestDiagonal:
    def test_harmonic_gap_summary(self):
        S, _ = harmonic_gap_pair()
        s = spectral_summary(S)
        assert s.alpha_plus == 1.0 and s.p2_rank == 0
        assert s.splus_eigs.size == 0
        for k in (1, 7, 50):
            assert abs(u_k_op(S, k).value - k) <= 1e-12

    def test_half_one_summary(self):
        S, _ = half_one_pair()
        s = spectral_summary(S)
        assert (s.alpha_plus, s.alpha_minus) == (1.0, 0.5)
        assert s.p2_infinite

    def test_constant(self):
        s = spectral_summary(DiagonalOperator.constant(3.0))
        assert s.alpha_plus == s.alpha_minus == 3.0
        assert s.splus_eigs.size == 0 and s.sminus_eigs.size == 0
        assert s.p2_infinite

    def test_one_two(self):
        S, _ = one_two_pair()
        for k in (1, 10, 100):
            assert u_k_op(S, k).value == 2 * k
            assert l_k_op(S, k).value == k
        vals = S.diag.entries(100)
        for k in (1, 2, 3):
            assert brute_u_k(vals[:14], k) == u_k_op(S, k).value

    def test_head_above_essential_norm(self):
        S = DiagonalOperator.constant(1.0, head=[3.0, 2.0, 0.5])
        s = spectral_summary(S)
        assert s.splus_eigs.tolist() == [2.0, 1.0]
        assert s.operator_norm == 3.0
        assert u_k_op(S, 1).value == 3.0 and u_k_op(S, 4).value == 7.0
        assert l_k_op(S, 1).value == 0.5

    @pytest.mark.parametrize("build", [harmonic_gap_pair, half_one_pair, one_two_pair, gapped_identity_pair])
    def test_operator_and_sequence_agree(self, build):
        S, _ = build()
        summ = spectral_summary(S)
        for k in range(1, 51):
            a, b = u_k_op(S, k, summary=summ), u_k_seq(S.diag, k)
            assert abs(a.value - b.value) <= a.error + b.error + 1e-12

    def test_average_tends_to_essential_norm(self):
        S = DiagonalOperator.constant(1.0, head=[5.0, 4.0, 3.0])
        assert abs(u_k_op(S, 1000).value / 1000 - 1.0) <= 1e-2
        S = DiagonalOperator(SequenceModel.from_generator("geometric", g=2.0, rho=0.5))
        assert abs(u_k_op(S, 1000).value / 1000) <= 1e-2


class TestEmbedding:
    def test_finite_block(self):
        E = embed_extended(FiniteHermitian([[1.0]]), 1)
        assert E.matrix.tolist() == [[1.0, 0.0], [0.0, 0.0]]

    def test_infinite(self):
        S = FiniteHermitian(np.diag([3.0, 1.0, 2.0]))
        E = embed_extended(S, math.inf)
        assert E.diag.entries(5).tolist() == [3.0, 2.0, 1.0, 0.0, 0.0]
        for k in (1, 2, 3):
            assert u_k_op(E, k).value == u_k_op(S, k).value


class TestClosure:
    def test_diagonal_of_itself(self):
        S, a = one_two_pair()
        assert closure_membership(S, S.diag)[0]

    def test_fails_at_k1(self):
        ok, ev = closure_membership(DiagonalOperator.constant(1.0), SequenceModel.constant([2.0], 2.0))
        assert not ok and ev[-1].witness_k == 1

    def test_gapped_norms_against_identity(self):
        # U_k(I) = k = U_k(c), but liminf c = 0 < 1 breaks the lower family
        S, c = gapped_identity_pair()
        ok, ev = closure_membership(S, c)
        assert not ok
        assert ev[-1].condition.startswith("L_k")

    def test_gapped_norms_zero_extended(self):
        # the same norms sit in the closure once S is padded by a zero block
        S1 = DiagonalOperator(SequenceModel.from_generator("alternating", head=[1.0, 0.0], v1=1.0, v2=0.0))
        _, c = gapped_identity_pair()
        assert closure_membership(S1, c)[0]

    def test_finite_majorization_path(self):
        S = FiniteHermitian(np.diag([2.0, 2.0, 2.0, 0.0]))
        assert closure_membership(S, SequenceModel([1.5] * 4))[0]
        assert not closure_membership(S, SequenceModel([3.0, 1.0, 1.0, 1.0]))[0]
