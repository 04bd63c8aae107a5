"""Constructive Schur-Horn: an orthogonal conjugation with prescribed diagonal.

Given eigenvalues ``b`` and a target diagonal ``c`` majorized by ``b``, build an
orthogonal ``U`` with ``diag(U.T @ diag(b) @ U) == c``.

The construction walks the classical chain of two-coordinate averagings
(T-transforms) that carries sorted ``b`` to sorted ``c``, fixing at least one
coordinate per step, and realizes each averaging with a plane rotation solved
against the *current* 2x2 block.  Any value between the two current diagonal
entries is reachable by such a rotation, whatever the off-diagonal entry.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NotMajorized, NumericalFailure
from .sequences import DEFAULT_TOL, majorizes


class ChainStep(NamedTuple):
    pair: tuple
    t: float


def _orders(b, c):
    return np.argsort(-b, kind="stable"), np.argsort(-c, kind="stable")


def _check(b, c, tol):
    b = np.asarray(b, dtype=float).reshape(-1)
    c = np.asarray(c, dtype=float).reshape(-1)
    if b.shape != c.shape:
        raise DimensionMismatch(f"b and c must have equal length, got {b.size} and {c.size}")
    if not majorizes(b, c, tol):
        raise NotMajorized("target diagonal is not majorized by the eigenvalues")
    return b, c


def t_transform_chain(b, c, tol=DEFAULT_TOL):
    """Two-coordinate averagings carrying ``b`` to a rearrangement of ``c``.

    Each step ``((i, j), t)`` replaces the entries ``(x, y)`` at positions
    ``i`` and ``j`` of the current vector by ``(t x + (1-t) y, (1-t) x + t y)``.
    Positions index the original ``b``.  At most ``n - 1`` steps are needed.
    """
    b, c = _check(b, c, tol)
    n = b.size
    p, q = _orders(b, c)
    d = b[p].copy()
    target = c[q]
    eps = 1e-14 * (1.0 + float(np.max(np.abs(b))))
    steps = []
    for _ in range(2 * n):
        over = np.nonzero(d - target > eps)[0]
        if over.size == 0:
            break
        j = int(over[-1])
        under = np.nonzero(target[j + 1:] - d[j + 1:] > eps)[0]
        if under.size == 0:
            break
        k = j + 1 + int(under[0])
        x, y = d[j], d[k]
        delta = min(x - target[j], target[k] - y)
        if x - target[j] <= target[k] - y:
            d[j], d[k] = target[j], y + delta
        else:
            d[j], d[k] = x - delta, target[k]
        t = (d[j] - y) / (x - y)
        steps.append(ChainStep((int(p[j]), int(p[k])), float(min(max(t, 0.0), 1.0))))
    return steps


def _rotate(A, W, i, j, value):
    x, y, z = A[i, i], A[j, j], A[i, j]
    a = 0.5 * (x - y)
    R = math.hypot(a, z)
    if R <= 1e-300:
        return
    rho = min(1.0, max(-1.0, (value - 0.5 * (x + y)) / R))
    theta = 0.5 * (math.atan2(z, a) + math.acos(rho))
    cs, sn = math.cos(theta), math.sin(theta)
    G = np.array([[cs, -sn], [sn, cs]])
    idx = [i, j]
    A[:, idx] = A[:, idx] @ G
    A[idx, :] = G.T @ A[idx, :]
    W[:, idx] = W[:, idx] @ G


def replay_chain(b, chain):
    """Apply the rotations realizing ``chain`` to ``diag(b)``.

    Returns ``(W, A)`` with ``A = W.T @ diag(b) @ W``.
    """
    b = np.asarray(b, dtype=float).reshape(-1)
    A = np.diag(b)
    W = np.eye(b.size)
    for (i, j), t in chain:
        value = t * A[i, i] + (1.0 - t) * A[j, j]
        _rotate(A, W, i, j, value)
    return W, A


def construct_diagonal_unitary(b, c, tol=DEFAULT_TOL):
    """Orthogonal ``U`` with ``diag(U.T @ diag(b) @ U) == c``.

    Parameters
    ----------
    b : array_like
        Eigenvalues (any order).
    c : array_like
        Target diagonal; must be majorized by ``b`` up to ``tol``.

    Raises
    ------
    NotMajorized
        If ``c`` is not majorized by ``b``.
    NumericalFailure
        If the realized diagonal misses ``c`` by more than ``1e-9 (1 + max|b|)``.
    """
    b, c = _check(b, c, tol)
    chain = t_transform_chain(b, c, tol)
    W, _ = replay_chain(b, chain)
    p, q = _orders(b, c)
    perm = np.empty(b.size, dtype=int)
    perm[q] = p
    U = W[:, perm]
    diag = np.einsum("ij,i,ij->j", U, b, U)
    resid = float(np.max(np.abs(diag - c)))
    if resid > 1e-9 * (1.0 + float(np.max(np.abs(b)))):
        raise NumericalFailure(f"Schur-Horn diagonal residual {resid:.2e} too large")
    return U
