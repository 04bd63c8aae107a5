import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from frameadmit import (
    Frame,
    FiniteHermitian,
    excess,
    frame_bounds,
    frame_operator,
    is_frame,
    is_parseval,
    is_tight,
    norms_squared,
    verify_pair,
)
from frameadmit.errors import DimensionMismatch, InvalidSpec

E1E1E2 = Frame([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


def spherical(k, n=2):
    ang = np.pi * np.arange(k) / k
    return Frame(np.stack([np.cos(ang), np.sin(ang)], axis=1))


def test_orthonormal_basis():
    F = Frame(np.eye(2))
    assert np.allclose(frame_operator(F).matrix, np.eye(2))
    assert is_parseval(F) and excess(F) == 0
    rep = verify_pair(F, np.eye(2), [1, 1])
    assert rep.passed and rep.norm_deviation == 0 and rep.operator_deviation == 0


def test_repeated_vector():
    assert np.allclose(frame_operator(E1E1E2).matrix, np.diag([2.0, 1.0]))
    fb = frame_bounds(E1E1E2)
    assert (fb.lower, fb.upper) == (1.0, 2.0)
    assert is_frame(E1E1E2) and not is_tight(E1E1E2)
    assert excess(E1E1E2) == 1
    assert verify_pair(E1E1E2, np.diag([2.0, 1.0]), [1, 1, 1]).passed
    bad = verify_pair(E1E1E2, np.eye(2), [1, 1, 1])
    assert not bad.passed and bad.operator_deviation == pytest.approx(1.0)


def test_not_a_frame():
    F = Frame([[1.0, 0.0]])
    assert frame_bounds(F).lower == 0.0 and not is_frame(F)


@pytest.mark.parametrize("k", [3, 4, 7])
def test_spherical_tight(k):
    F = spherical(k)
    assert np.allclose(frame_operator(F).matrix, (k / 2) * np.eye(2))
    assert is_tight(F) and excess(F) == k - 2


def test_verify_dimension_errors():
    with pytest.raises(DimensionMismatch):
        verify_pair(E1E1E2, np.eye(2), [1, 1])
    with pytest.raises(DimensionMismatch):
        verify_pair(E1E1E2, np.eye(3), [1, 1, 1])


def test_rejects_bad_vectors():
    with pytest.raises(InvalidSpec):
        Frame([[np.nan, 1.0]])


def test_to_dict():
    assert Frame(np.eye(2)).to_dict() == {"dim": 2, "vectors": [[1.0, 0.0], [0.0, 1.0]]}


@given(st.integers(1, 10), st.integers(0, 30), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=100, deadline=None)
def test_random_synthesis_matrices(n, extra, seed):
    rng = np.random.default_rng(seed)
    m = n + extra
    F = Frame.from_synthesis(rng.normal(size=(n, m)))
    w = frame_operator(F).eigenvalues
    assert w[-1] >= -1e-12 * (1 + w[0])
    rank = np.linalg.matrix_rank(F.synthesis_matrix)
    assert excess(F) + rank == m
    assert excess(F) == m - n


@given(st.integers(1, 6), st.integers(0, 10), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=60, deadline=None)
def test_parseval_norms_at_most_one(n, extra, seed):
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.normal(size=(n + extra, n + extra)))
    F = Frame.from_synthesis(Q[:n, :])
    assert is_parseval(F, 1e-9)
    assert np.all(norms_squared(F) <= 1 + 1e-12)


def test_operator_type():
    assert isinstance(frame_operator(E1E1E2), FiniteHermitian)
