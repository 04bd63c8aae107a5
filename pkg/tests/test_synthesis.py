import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from frameadmit import (
    DiagonalOperator,
    FiniteHermitian,
    SequenceModel,
    excess,
    frame_operator,
    greedy_extend,
    head_decompose,
    is_tight,
    majorizes,
    norms_squared,
    synthesize_finite,
    synthesize_truncated_summable,
    verify_pair,
)
from frameadmit.errors import InvalidSpec, NotAdmissible, SufficiencyFailed, TruncationInadmissible
from frameadmit.fixtures import half_one_pair, harmonic_gap_pair, one_two_pair
from oracles import dyadic_truncation, random_majorized


def check_decomposition(d, S, tol=1e-9):
    m = d.m_index
    # h bounds
    assert d.h <= d.c0[-1] + tol and d.h <= d.lambdas[m] + tol
    # leading norms majorized by the block spectrum
    block = np.concatenate([d.lambdas[:m], [d.h], np.zeros(d.n0 - m - 1)])
    assert majorizes(block, d.c0, tol)
    # rank-one sum reproduces S_1
    R = sum(ci * np.outer(x, x) for ci, x in zip(d.c0, d.head_vectors))
    assert np.max(np.abs(R - d.s1_matrix())) <= 1e-9
    assert np.allclose(np.linalg.norm(d.head_vectors, axis=1), 1.0)
    assert abs(np.trace(d.s1_matrix()) - d.c0.sum()) <= 1e-9
    # S_2 = S - S_1 stays positive and keeps the essential norm
    assert np.min(d.residual_diag.head) >= -1e-10
    assert d.residual_diag.limsup == S.diag.limsup
    L = d.dim
    assert np.allclose(S.diag.entries(L) - d.residual_diag.entries(L), np.diag(d.s1_matrix()))


class TestFinite:
    def test_spherical(self):
        F = synthesize_finite(2 * np.eye(2), [1, 1, 1, 1])
        assert F.m == 4 and is_tight(F)
        assert np.allclose(frame_operator(F).matrix, 2 * np.eye(2))
        assert np.allclose(norms_squared(F), 1.0)

    def test_orthonormal(self):
        F = synthesize_finite(np.eye(2), [1, 1])
        assert excess(F) == 0
        assert np.allclose(F.vectors @ F.vectors.T, np.eye(2))

    def test_pack(self):
        F = synthesize_finite(2 * np.eye(3), [1.5] * 4)
        assert verify_pair(F, 2 * np.eye(3), [1.5] * 4, 1e-8).passed
        assert excess(F) == 1

    def test_rejects_inadmissible(self):
        with pytest.raises(NotAdmissible):
            synthesize_finite(np.eye(2), [2.0, 0.5])

    @given(st.integers(1, 8), st.integers(0, 12), st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=80, deadline=None)
    def test_exactness_and_excess(self, n, extra, seed):
        rng = np.random.default_rng(seed)
        Q, _ = np.linalg.qr(rng.normal(size=(n, n)))
        b = rng.uniform(0.1, 5.0, n)
        S = FiniteHermitian(Q @ np.diag(b) @ Q.T)
        m = n + extra
        c = random_majorized(rng, np.concatenate([b, np.zeros(m - n)]))
        F = synthesize_finite(S, c)
        assert np.linalg.norm(frame_operator(F).matrix - S.matrix, 2) <= 1e-8 * (1 + S.norm)
        assert np.max(np.abs(norms_squared(F) - c)) <= 1e-8 * (1 + np.max(c))
        assert excess(F) == m - n


class TestTruncated:
    def test_two_dim(self):
        c = SequenceModel.from_generator("geometric", g=1.0, rho=0.5)
        F = synthesize_truncated_summable(np.eye(2), c, 3)
        assert np.allclose(norms_squared(F), [1, 0.5, 0.5])
        assert np.allclose(frame_operator(F).matrix, np.eye(2))

    def test_one_dim(self):
        c = SequenceModel.from_generator("geometric", g=0.5, rho=0.5)
        F = synthesize_truncated_summable(np.eye(1), c, 4)
        assert np.allclose(norms_squared(F), [float(x) for x in dyadic_truncation(4)])

    def test_short_truncation(self):
        c = SequenceModel.from_generator("geometric", g=1.0, rho=0.5)
        with pytest.raises(InvalidSpec):
            synthesize_truncated_summable(np.eye(2), c, 2)

    def test_truncation_breaks_majorization(self):
        # (0.05, 0.05, 0.95, 0.475, ...) on I_2 is admissible, but folding the
        # tail at N = 3 puts mass 1.9 > 1 on a single vector
        c = SequenceModel.from_generator("geometric", head=[0.05, 0.05], g=3.8, rho=0.5)
        with pytest.raises(TruncationInadmissible):
            synthesize_truncated_summable(np.eye(2), c, 3)
        F = synthesize_truncated_summable(np.eye(2), c, 12)
        assert verify_pair(F, np.eye(2), norms_squared(F), 1e-8).passed

    @pytest.mark.parametrize("N", [3, 5, 10, 20])
    def test_profile_converges(self, N):
        c = SequenceModel.from_generator("geometric", g=1.0, rho=0.5)
        F = synthesize_truncated_summable(np.eye(2), c, N)
        head = c.entries(N - 1)
        assert np.allclose(norms_squared(F)[:-1], head)
        assert abs(norms_squared(F)[-1] - c.tail_sum(N - 1)) <= 1e-12 + 1e-9


class TestHead:
    def test_half_one_constant_09(self):
        S = DiagonalOperator(half_one_pair()[0].diag)
        d = head_decompose(S, SequenceModel.constant([0.9], 0.9))
        assert (d.case_id, d.m_index, d.n0) == (1, 1, 2)
        assert d.eps_or_delta == pytest.approx(0.05)
        assert d.h == pytest.approx(0.8)
        assert np.allclose(d.lambdas, 1.0)
        check_decomposition(d, S)

    def test_one_two(self):
        S, c = one_two_pair()
        d = head_decompose(S, c)
        assert (d.case_id, d.m_index, d.n0) == (1, 1, 2)
        assert np.allclose(d.lambdas, 2.0) and d.h == pytest.approx(1.0)
        check_decomposition(d, S)

    def test_case_two(self):
        S = DiagonalOperator(SequenceModel.from_generator("harmonic_gap", head=[3.0]))
        c = SequenceModel.constant([2.0], 0.5)
        d = head_decompose(S, c)
        assert d.case_id == 2 and d.m_index == 2
        level = 1 - d.eps_or_delta / (2 * d.m_index)
        assert d.lambdas[0] == 3.0 and np.allclose(d.lambdas[1:], level)
        # surrogate positions carry entries strictly between the level and the essential norm
        vals = S.diag.entries(d.dim)
        assert all(level < vals[p] < 1.0 for p in d.positions[1:])
        check_decomposition(d, S)

    def test_harmonic_gap_fails(self):
        with pytest.raises(SufficiencyFailed):
            head_decompose(*harmonic_gap_pair())

    def test_needs_diagonal(self):
        with pytest.raises(InvalidSpec):
            head_decompose(FiniteHermitian(np.eye(2)), SequenceModel([1.0, 1.0]))


class TestGreedy:
    def test_one_two_three_steps(self):
        S, c = one_two_pair()
        r = greedy_extend(head_decompose(S, c), c, 3)
        assert r.frame.m == 6 and not r.stopped_early
        assert np.allclose(norms_squared(r.frame), 1.5)
        assert np.min(r.residual_diag.head) >= -1e-10

    def test_zero_steps(self):
        S, c = one_two_pair()
        d = head_decompose(S, c)
        r = greedy_extend(d, c, 0)
        assert r.steps_completed == 1 and r.frame.m == d.n0

    def test_identity_constant_09(self):
        S = DiagonalOperator.constant(1.0)
        c = SequenceModel.constant([0.9], 0.9)
        r = greedy_extend(head_decompose(S, c), c, 5)
        assert r.frame.m == 10 and r.steps_completed == 5 and not r.stopped_early
        assert np.min(r.residual_diag.head) >= 0

    def test_partial_sums_never_overshoot(self):
        S, c = one_two_pair()
        r = greedy_extend(head_decompose(S, c), c, 5)
        L = r.frame.dim
        G = frame_operator(r.frame).matrix
        assert np.all(np.diag(G) <= S.diag.entries(L) + 1e-9)
        target = np.diag(S.diag.entries(L) - r.residual_diag.entries(L))
        assert np.max(np.abs(G - target)) <= 1e-8

    def test_stops_when_sufficiency_breaks(self):
        # norms that exceed the essential norm after the head fail the re-check
        S, c = one_two_pair()
        d = head_decompose(S, c)
        later = SequenceModel.constant([1.5, 1.5], 3.0)
        r = greedy_extend(d, later, 4)
        assert r.stopped_early and "sufficient" in r.reason
        assert r.steps_completed == 1 and r.frame.m == d.n0
