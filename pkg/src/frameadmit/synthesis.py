"""Constructing frames with prescribed frame operator and norms.

* :func:`synthesize_finite` realizes any admissible finite pair exactly.
* :func:`synthesize_truncated_summable` handles a summable infinite norm list
  in finite dimension by folding the tail beyond ``N`` into one last vector.
* :func:`head_decompose` peels off a finite block ``S_1 <= S`` of a diagonal
  operator and realizes it with the first ``n0`` norms; :func:`greedy_extend`
  repeats that on the remainder, re-verifying the sufficient conditions each
  round.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .admissibility import (
    DEFAULT_HORIZON,
    check_finite_finite,
    check_finite_infinite,
    check_sufficient,
)
from .errors import (
    HorizonExceeded,
    InvalidSpec,
    NotAdmissible,
    NumericalFailure,
    SufficiencyFailed,
    TruncationInadmissible,
)
from .frames import Frame, verify_pair
from .operators import BOUNDARY_TOL, DiagonalOperator, FiniteHermitian, spectral_summary
from .schur_horn import construct_diagonal_unitary
from .sequences import (
    DEFAULT_ACCURACY,
    DEFAULT_TOL,
    MAX_SCAN,
    ConstantTail,
    SequenceModel,
    majorizes,
    scaled_tol,
)

SYNTHESIS_TOL = 1e-8


def _describe(verdict):
    bad = verdict.failed()
    return "; ".join(f"{e.condition} (k={e.witness_k})" for e in bad) or verdict.status


def synthesize_finite(S, c, tol=DEFAULT_TOL):
    """Frame of ``m`` vectors in ``R^n`` with frame operator ``S`` and ``||f_k||^2 = c_k``.

    With ``S = Q diag(lam) Q^T`` and ``V`` orthogonal such that
    ``diag(V^T diag(lam, 0, ..., 0) V) = c``, the vectors are the columns of
    ``Q diag(sqrt(lam)) V[:n, :]``.  The result has excess ``m - n``.
    """
    if not isinstance(S, FiniteHermitian):
        S = FiniteHermitian(S)
    c = np.asarray(c.head if isinstance(c, SequenceModel) else c, dtype=float).reshape(-1)
    verdict = check_finite_finite(S, c, tol)
    if not verdict.admissible:
        raise NotAdmissible(f"pair is not frame admissible: {_describe(verdict)}")
    n, m = S.n, c.size
    b = np.concatenate([S.eigenvalues, np.zeros(m - n)])
    V = construct_diagonal_unitary(b, c, tol)
    lam = np.clip(S.eigenvalues, 0.0, None)
    T = S.eigenvectors @ (np.sqrt(lam)[:, None] * V[:n, :])
    F = Frame.from_synthesis(T)
    report = verify_pair(F, S, c, SYNTHESIS_TOL)
    if not report.passed:
        raise NumericalFailure(
            f"synthesized frame misses the target (norm dev {report.norm_deviation:.2e}, "
            f"operator dev {report.operator_deviation:.2e})"
        )
    return F


def truncated_norms(c, N):
    """``(c_1, ..., c_{N-1}, sum_{i>=N} c_i)``."""
    head = c.entries(N - 1)
    return np.append(head, c.tail_sum(N - 1))


def synthesize_truncated_summable(S, c, N, tol=DEFAULT_TOL):
    """Exact ``N``-vector frame whose last vector absorbs the tail of ``c``.

    The squared norms are ``(c_1, ..., c_{N-1}, sum_{i>=N} c_i)``, which tend
    to ``c`` in l1 as ``N`` grows.
    """
    if not isinstance(S, FiniteHermitian):
        S = FiniteHermitian(S)
    verdict = check_finite_infinite(S, c, tol)
    if not verdict.admissible:
        raise NotAdmissible(f"pair is not frame admissible: {_describe(verdict)}")
    if N < S.n + 1:
        raise InvalidSpec(f"truncation length N={N} must be at least n+1={S.n + 1}")
    norms = truncated_norms(c.padded(), N)
    if not check_finite_finite(S, norms, tol).admissible:
        raise TruncationInadmissible(f"truncated norm list at N={N} is not admissible; increase N")
    return synthesize_finite(S, norms, tol)


@dataclass
class HeadDecomposition:
    """A finite block ``S_1 <= S`` realized by the first ``n0`` norms.

    ``positions`` are the (0-based) diagonal positions ``y_1, ..., y_{m+1}``
    carrying ``lambdas[:m]`` and ``h``; ``head_vectors`` are unit vectors in
    ``R^dim`` (coordinates of the diagonal basis) with
    ``sum_i c0[i] x_i x_i^T = S_1``.  ``residual_diag`` is the diagonal of
    ``S - S_1``.
    """

    case_id: int
    eps_or_delta: float
    m_index: int
    lambdas: np.ndarray
    n0: int
    h: float
    c0: np.ndarray
    head_vectors: np.ndarray
    residual_diag: SequenceModel
    positions: List[int] = field(default_factory=list)

    @property
    def dim(self):
        return self.head_vectors.shape[1]

    def s1_matrix(self, dim=None):
        d = self.dim if dim is None else dim
        S1 = np.zeros((d, d))
        m = self.m_index
        for p, lam in zip(self.positions[:m], self.lambdas[:m]):
            S1[p, p] += lam
        S1[self.positions[m], self.positions[m]] += self.h
        return S1

    def frame(self):
        return Frame(np.sqrt(self.c0)[:, None] * self.head_vectors)


def _threshold_index(c, level, accuracy):
    """Smallest ``m0 >= 1`` with ``c_m <= level`` for every ``m >= m0`` (1-based)."""
    gap = level - c.limsup
    if isinstance(c.tail, ConstantTail):
        N = c.n_head
    else:
        N = c.n_head
        while c.deviation_mass(N, True) > gap:
            if not math.isfinite(c.deviation_mass(N, True)):
                raise HorizonExceeded("cannot bound the norm sequence away from its limsup")
            if N >= MAX_SCAN:
                raise HorizonExceeded("norm sequence does not settle below the threshold")
            N = min(2 * max(N, 1), MAX_SCAN)
    vals = c.entries(N)
    above = np.nonzero(vals > level)[0]
    return int(above[-1]) + 2 if above.size else 1


def _first_exceeding(c, target):
    N = max(c.n_head, 16)
    while True:
        cs = np.cumsum(c.entries(N))
        hit = np.nonzero(cs > target)[0]
        if hit.size:
            return int(hit[0]) + 1
        if N >= MAX_SCAN:
            raise HorizonExceeded("partial sums of c never exceed the block trace")
        N = min(2 * N, MAX_SCAN)


def _find_positions(a, count, predicate, exclude=(), start=None):
    """First ``count`` diagonal positions satisfying ``predicate`` (scanning outward)."""
    L = max(a.n_head, 2 * count + len(exclude), 16) if start is None else start
    banned = set(exclude)
    while True:
        vals = a.entries(L)
        ok = [i for i in np.nonzero(predicate(vals))[0] if i not in banned]
        if len(ok) >= count:
            return [int(i) for i in ok], vals
        if L >= MAX_SCAN:
            raise HorizonExceeded(f"found only {len(ok)} of {count} required diagonal positions")
        L = min(2 * L, MAX_SCAN)


def head_decompose(S, c, horizon=DEFAULT_HORIZON, tol=DEFAULT_TOL, accuracy=DEFAULT_ACCURACY,
                   boundary_tol=BOUNDARY_TOL):
    """Split a diagonal ``S`` as ``S_1 + S_2`` with ``S_1`` realized by ``c_1..c_n0``.

    Requires the sufficient conditions to hold.  Case 1 (infinite rank of the
    top spectral projection) uses ``eps = (||S||_e - limsup c) / 2``; case 2
    uses ``delta`` equal to half the smallest certified strict gap (or the
    limsup gap, if smaller), surrogate levels ``||S||_e - delta / (2 m1)`` on
    positions whose diagonal entry lies strictly between that level and
    ``||S||_e``, and puts the ``h``-term on position ``y_{m1+1}``.
    """
    if not isinstance(S, DiagonalOperator):
        raise InvalidSpec("head_decompose needs a diagonal operator")
    c = (c if isinstance(c, SequenceModel) else SequenceModel(c)).padded()
    suf = check_sufficient(S, c, horizon, tol, accuracy)
    if not suf.passed:
        bad = [e for e in suf.evidence if not e.passed]
        why = "; ".join(f"{e.condition} (k={e.witness_k})" for e in bad)
        raise SufficiencyFailed(f"sufficient conditions fail: {why}")
    a = S.diag
    summ = spectral_summary(S, accuracy)
    alpha = summ.alpha_plus
    g = suf.limsup_gap
    cut = alpha - boundary_tol * (1.0 + abs(alpha))

    if suf.case == 1:
        eps = 0.5 * g
        m0 = _threshold_index(c, alpha - eps, accuracy)
        m = m0
        pos, vals = _find_positions(a, m + 1, lambda v: v >= cut)
        # largest entries first, ties by position
        pos = sorted(pos, key=lambda i: (-vals[i], i))[: m + 1]
        lambdas = np.array([vals[i] for i in pos])
        param = eps
    else:
        r = int(suf.p2_rank)
        delta = 0.5 * min(g, suf.min_gap if suf.min_gap is not None else g)
        m0 = _threshold_index(c, alpha - delta, accuracy)
        m1 = max(m0, r + 1)
        m = m1
        level = alpha - delta / (2 * m1)
        top, vals = _find_positions(a, r, lambda v: v >= cut) if r else ([], a.head)
        top = sorted(top, key=lambda i: (-vals[i], i))[:r]
        sur, vals = _find_positions(a, m1 + 1 - r, lambda v: (v > level) & (v < alpha), exclude=top)
        sur = sur[: m1 + 1 - r]
        pos = top + sur
        lambdas = np.array([vals[i] for i in top] + [level] * (m1 + 1 - r))
        param = delta

    lam_sum = math.fsum(lambdas[:m])
    n0 = _first_exceeding(c, lam_sum)
    c0 = c.entries(n0)
    h = math.fsum(c0) - lam_sum
    if not (h <= c0[-1] + scaled_tol(tol, c0[-1]) and h <= lambdas[m] + scaled_tol(tol, lambdas[m])):
        raise SufficiencyFailed(f"h = {h} exceeds c_n0 = {c0[-1]} or lambda_(m+1) = {lambdas[m]}")
    block = np.concatenate([lambdas[:m], [h]])
    if n0 < m + 1 or not majorizes(np.concatenate([block, np.zeros(n0 - m - 1)]), c0, tol):
        raise SufficiencyFailed("leading norms are not majorized by the block spectrum")
    G = synthesize_finite(FiniteHermitian.from_diagonal(block), c0, tol)

    dim = max(pos) + 1
    X = np.zeros((n0, dim))
    norms = np.sqrt(c0)
    for i in range(n0):
        if norms[i] > 0:
            X[i, pos] = G.vectors[i] / norms[i]
        else:
            X[i, pos[0]] = 1.0
    head = np.array(a.entries(max(dim, a.n_head)))
    for p, lam in zip(pos[:m], lambdas[:m]):
        head[p] -= lam
    head[pos[m]] -= h
    residual = a.with_head(head)
    if np.min(head) < -scaled_tol(tol, alpha):
        raise NumericalFailure("residual operator is not positive")
    return HeadDecomposition(suf.case, float(param), int(m), lambdas, int(n0), float(h),
                             np.asarray(c0), X, residual, [int(p) for p in pos])


@dataclass
class GreedyResult:
    frame: Frame
    norms: np.ndarray
    residual_diag: SequenceModel
    steps_completed: int
    stopped_early: bool = False
    reason: str = ""
    decompositions: List[HeadDecomposition] = field(default_factory=list)


def greedy_extend(dec, c, steps, horizon=DEFAULT_HORIZON, tol=DEFAULT_TOL, accuracy=DEFAULT_ACCURACY):
    """Iterate the head construction on the remainder ``S_2`` with the later norms.

    ``steps`` counts rounds including ``dec`` itself (``steps <= 1`` returns
    just its head vectors).  Each round re-runs the sufficiency check on the
    current remainder; when that fails the partial frame is returned with
    ``stopped_early`` set.
    """
    c = (c if isinstance(c, SequenceModel) else SequenceModel(c)).padded()
    decs = [dec]
    residual = dec.residual_diag
    alpha = residual.limsup
    consumed = dec.n0
    stopped, reason = False, ""
    for _ in range(1, max(int(steps), 1)):
        try:
            nxt = head_decompose(DiagonalOperator(residual), c.shifted(consumed), horizon, tol, accuracy)
        except (SufficiencyFailed, HorizonExceeded, NotAdmissible) as exc:
            stopped, reason = True, str(exc)
            break
        r = nxt.residual_diag
        if np.min(r.head) < -scaled_tol(tol, alpha) or abs(r.limsup - alpha) > scaled_tol(tol, alpha):
            stopped, reason = True, "remainder lost positivity or its essential norm"
            break
        decs.append(nxt)
        residual = r
        consumed += nxt.n0

    dim = max(d.dim for d in decs)
    rows, norms = [], []
    for d in decs:
        X = np.zeros((d.n0, dim))
        X[:, : d.dim] = d.head_vectors
        rows.append(np.sqrt(d.c0)[:, None] * X)
        norms.append(d.c0)
    frame = Frame(np.vstack(rows))
    return GreedyResult(frame, np.concatenate(norms), residual, len(decs), stopped, reason, decs)
