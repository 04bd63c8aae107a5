"""Positive operator models and their ``U_k`` / ``L_k`` functionals.

Two representations are supported: dense real symmetric matrices
(:class:`FiniteHermitian`) and diagonal operators on a separable space whose
diagonal is a :class:`~frameadmit.sequences.SequenceModel`
(:class:`DiagonalOperator`).  Anything that needs a Weyl-von Neumann style
reduction to a diagonal is out of reach by design.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DimensionMismatch, HorizonExceeded, InvalidSpec, KMismatch, NumericalFailure
from .report import Evidence
from .sequences import (
    DEFAULT_ACCURACY,
    DEFAULT_TOL,
    MAX_SCAN,
    ConstantTail,
    Estimate,
    SequenceModel,
    _scan_horizon,
    l_k_seq,
    scaled_tol,
    sort_desc,
    u_k_seq,
)

BOUNDARY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FiniteHermitian:
    """Real symmetric ``n x n`` matrix with its eigendecomposition.

    The decomposition is computed once at construction; ``eigenvalues`` are in
    non-increasing order and ``eigenvectors[:, i]`` belongs to
    ``eigenvalues[i]``.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __init__(self, matrix, tol=DEFAULT_TOL):
        M = np.array(matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
            raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
        if not np.all(np.isfinite(M)):
            raise InvalidSpec("matrix has non-finite entries")
        scale = np.max(np.abs(M)) if M.size else 0.0
        if np.max(np.abs(M - M.T)) > scaled_tol(tol, scale):
            raise InvalidSpec("matrix is not symmetric")
        M = 0.5 * (M + M.T)
        try:
            w, Q = np.linalg.eigh(M)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure(f"eigendecomposition failed: {exc}") from None
        order = np.argsort(-w, kind="stable")
        w, Q = w[order], Q[:, order]
        norm = max(abs(w[0]), abs(w[-1]))
        resid = np.linalg.norm(M - (Q * w) @ Q.T, 2)
        if resid > scaled_tol(tol, norm) or np.max(np.abs(Q.T @ Q - np.eye(len(w)))) > 1e3 * tol:
            raise NumericalFailure(f"eigendecomposition residual {resid:.2e} too large")
        for a in (M, w, Q):
            a.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", Q)

    @classmethod
    def from_diagonal(cls, values):
        return cls(np.diag(np.asarray(values, dtype=float)))

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def norm(self):
        return float(max(abs(self.eigenvalues[0]), abs(self.eigenvalues[-1])))

    def is_positive_definite(self, tol=DEFAULT_TOL):
        return bool(self.eigenvalues[-1] > tol * self.norm)


@dataclass(frozen=True, eq=False)
class DiagonalOperator:
    """Diagonal operator ``e_n -> a_n e_n`` on an infinite orthonormal basis."""

    diag: SequenceModel

    def __post_init__(self):
        if not isinstance(self.diag, SequenceModel):
            object.__setattr__(self, "diag", SequenceModel(self.diag))
        if self.diag.is_finite:
            raise InvalidSpec("a diagonal operator needs an infinite diagonal; use FiniteHermitian.from_diagonal")

    @classmethod
    def constant(cls, value, head=None):
        return cls(SequenceModel.constant([value] if head is None else head, value))


OperatorModel = Union[FiniteHermitian, DiagonalOperator]


@dataclass(frozen=True, eq=False)
class SpectralSummary:
    """Essential bounds, compact parts and the rank of ``E[alpha+, ||S||]``.

    For matrices ``finite_dimensional`` is set and the essential quantities
    are ``None``: the essential spectrum of a matrix is empty.
    ``splus_eigs`` lists the positive eigenvalues of ``S+`` found by the scan;
    the ones not listed sum to at most ``splus_residual``.
    """

    finite_dimensional: bool
    operator_norm: float
    alpha_plus: Optional[float] = None
    alpha_minus: Optional[float] = None
    p2_rank: Optional[float] = None
    splus_eigs: Optional[np.ndarray] = None
    sminus_eigs: Optional[np.ndarray] = None
    splus_residual: float = 0.0
    sminus_residual: float = 0.0

    @property
    def p2_infinite(self):
        return self.p2_rank is not None and math.isinf(self.p2_rank)


def eigenvalues_desc(S):
    """Eigenvalues of a finite operator in non-increasing order."""
    if not isinstance(S, FiniteHermitian):
        S = FiniteHermitian(S)
    return np.array(S.eigenvalues)


def _side(a, upper, accuracy, max_scan):
    try:
        N, resid = _scan_horizon(a, a.n_head, accuracy, upper, max_scan)
    except HorizonExceeded:
        if not math.isfinite(a.deviation_mass(a.n_head, upper)):
            return None, math.inf, None
        raise
    vals = a.entries(N)
    ref = a.limsup if upper else a.liminf
    dev = vals - ref
    if upper:
        eig = sort_desc(dev[dev > 0])
    else:
        eig = sort_desc(dev[dev < 0])[::-1]
    return eig, resid, vals


def spectral_summary(S, accuracy=DEFAULT_ACCURACY, boundary_tol=BOUNDARY_TOL, max_scan=MAX_SCAN):
    """Summarize the spectral data of ``S`` needed by the admissibility tests."""
    if isinstance(S, FiniteHermitian):
        return SpectralSummary(True, S.norm)
    a = S.diag
    ap, am = a.limsup, a.liminf
    splus, rp, vals_p = _side(a, True, accuracy, max_scan)
    sminus, rm, vals_m = _side(a, False, accuracy, max_scan)
    scanned = vals_p if vals_p is not None else (vals_m if vals_m is not None else a.head)
    sup = max(float(np.max(scanned)), ap)
    inf = min(float(np.min(scanned)), am)
    norm = max(abs(sup), abs(inf))

    if isinstance(a.tail, ConstantTail) or a.tail.meta.limsup_attained or splus is None:
        p2 = math.inf
    else:
        cut = ap - boundary_tol * (1.0 + abs(ap))
        p2 = int(np.count_nonzero(scanned >= cut))
    return SpectralSummary(
        False, norm, ap, am, p2,
        splus if splus is not None else None,
        sminus if sminus is not None else None,
        rp, rm,
    )


def _top_sum(eigs, k):
    if eigs.size >= k:
        return math.fsum(eigs[:k])
    return math.fsum(eigs)


def u_k_op(S, k, accuracy=DEFAULT_ACCURACY, summary=None):
    """Supremum of ``tr(SP)`` over rank-``k`` projections ``P``.

    Matrices: sum of the ``k`` largest eigenvalues.  Diagonal operators:
    ``U_k(S+) + k * alpha+(S)`` with ``U_k(S+)`` the sum of the ``k`` largest
    eigenvalues of the compact part above the essential norm.
    """
    k = int(k)
    if k < 1:
        raise KMismatch("k must be a positive integer")
    if isinstance(S, FiniteHermitian):
        if k > S.n:
            raise KMismatch(f"k={k} exceeds dimension {S.n}")
        return Estimate(math.fsum(S.eigenvalues[:k]), 0.0)
    summ = summary if summary is not None else spectral_summary(S, accuracy)
    if summ.splus_eigs is None:
        raise HorizonExceeded("eigenvalues of S+ are not summable; U_k(S) cannot be certified")
    return Estimate(_top_sum(summ.splus_eigs, k) + k * summ.alpha_plus, summ.splus_residual)


def l_k_op(S, k, accuracy=DEFAULT_ACCURACY, summary=None):
    """Infimum of ``tr(SP)`` over rank-``k`` projections; mirror of :func:`u_k_op`."""
    k = int(k)
    if k < 1:
        raise KMismatch("k must be a positive integer")
    if isinstance(S, FiniteHermitian):
        if k > S.n:
            raise KMismatch(f"k={k} exceeds dimension {S.n}")
        return Estimate(math.fsum(S.eigenvalues[::-1][:k]), 0.0)
    summ = summary if summary is not None else spectral_summary(S, accuracy)
    if summ.sminus_eigs is None:
        raise HorizonExceeded("eigenvalues of S- are not summable; L_k(S) cannot be certified")
    return Estimate(_top_sum(summ.sminus_eigs, k) + k * summ.alpha_minus, summ.sminus_residual)


def embed_extended(S, d):
    """``S`` padded with a ``d``-dimensional zero block.

    ``d = math.inf`` gives the diagonal operator ``(b_1, ..., b_n, 0, 0, ...)``
    of eigenvalues of ``S`` followed by zeros, which is a faithful model since
    the functionals do not depend on the chosen orthonormal basis.
    """
    if not isinstance(S, FiniteHermitian):
        S = FiniteHermitian(S)
    if d is None or (isinstance(d, float) and math.isinf(d)):
        return DiagonalOperator(SequenceModel.constant(S.eigenvalues, 0.0))
    d = int(d)
    if d < 0:
        raise InvalidSpec("extension dimension must be non-negative")
    M = np.zeros((S.n + d, S.n + d))
    M[: S.n, : S.n] = S.matrix
    return FiniteHermitian(M)


def _leq(lhs, rhs, err, tol):
    return lhs.value <= rhs.value + lhs.error + rhs.error + err + scaled_tol(tol, lhs.value, rhs.value)


def closure_membership(S, c, horizon=200, tol=DEFAULT_TOL, accuracy=DEFAULT_ACCURACY):
    """Test whether ``c`` lies in the closure of diagonals of the unitary orbit of ``S``.

    Checks ``U_k(S) >= U_k(c)`` and ``L_k(S) <= L_k(c)`` for ``k <= horizon``
    plus the asymptotic consequences ``limsup c <= alpha+(S)`` and
    ``liminf c >= alpha-(S)``.

    A matrix ``S`` with a finite ``c`` of the same length reduces to
    majorization; a matrix with any other ``c`` is first embedded with an
    infinite zero block.

    Returns
    -------
    (bool, list of Evidence)
    """
    if isinstance(S, FiniteHermitian):
        if c.is_finite and len(c) == S.n:
            return _finite_membership(S, c, tol)
        S = embed_extended(S, math.inf)
    c = c.padded()
    summ = spectral_summary(S, accuracy)
    evidence = []
    for k in range(1, horizon + 1):
        us, uc = u_k_op(S, k, accuracy, summ), u_k_seq(c, k, accuracy)
        if not _leq(uc, us, 0.0, tol):
            evidence.append(Evidence("U_k(S) >= U_k(c)", "orbit-closure", False, k, us.value, uc.value))
            return False, evidence
        ls, lc = l_k_op(S, k, accuracy, summ), l_k_seq(c, k, accuracy)
        if not _leq(ls, lc, 0.0, tol):
            evidence.append(Evidence("L_k(S) <= L_k(c)", "orbit-closure", False, k, ls.value, lc.value))
            return False, evidence
    evidence.append(Evidence("U_k(S) >= U_k(c)", "orbit-closure", True, horizon))
    evidence.append(Evidence("L_k(S) <= L_k(c)", "orbit-closure", True, horizon))
    ok_sup = c.limsup <= summ.alpha_plus + scaled_tol(tol, summ.alpha_plus)
    evidence.append(Evidence("limsup c <= alpha+(S)", "essential-bounds", ok_sup, None, c.limsup, summ.alpha_plus))
    ok_inf = c.liminf >= summ.alpha_minus - scaled_tol(tol, summ.alpha_minus)
    evidence.append(Evidence("liminf c >= alpha-(S)", "essential-bounds", ok_inf, None, c.liminf, summ.alpha_minus))
    return ok_sup and ok_inf, evidence


def _finite_membership(S, c, tol):
    b = S.eigenvalues
    cs = np.cumsum(sort_desc(c.head))
    bs = np.cumsum(b)
    for k in range(1, S.n):
        if bs[k - 1] < cs[k - 1] - scaled_tol(tol, bs[k - 1], cs[k - 1]):
            return False, [Evidence("sum_{i<=k} b_i >= sum_{i<=k} c_i", "majorization", False, k, bs[k - 1], cs[k - 1])]
    ok = abs(bs[-1] - cs[-1]) <= scaled_tol(tol, bs[-1], cs[-1])
    return ok, [
        Evidence("sum_{i<=k} b_i >= sum_{i<=k} c_i", "majorization", True, S.n - 1),
        Evidence("tr S = sum c", "trace", ok, None, bs[-1], cs[-1]),
    ]
