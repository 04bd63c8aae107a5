"""Deciding whether a pair ``(S, c)`` admits a frame.

In finite dimension the tests are decisive.  For diagonal operators on an
infinite-dimensional space there is a gap between the necessary conditions and
the sufficient ones; pairs in that gap are reported as ``Undetermined``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import HorizonExceeded, InvalidSpec, NotPositiveDefinite, NotSummable
from .operators import (
    DiagonalOperator,
    FiniteHermitian,
    spectral_summary,
    u_k_op,
)
from .report import Evidence
from .sequences import (
    DEFAULT_ACCURACY,
    DEFAULT_TOL,
    VALIDATION_HORIZON,
    ConstantTail,
    SequenceModel,
    scaled_tol,
    sort_desc,
    u_k_seq,
)

ADMISSIBLE = "Admissible"
NOT_ADMISSIBLE = "NotAdmissible"
UNDETERMINED = "Undetermined"

DEFAULT_HORIZON = 200
MAX_HORIZON_GROWTH = 64


@dataclass
class AdmissibilityVerdict:
    status: str
    evidence: List[Evidence] = field(default_factory=list)

    @property
    def admissible(self):
        return self.status == ADMISSIBLE

    def failed(self):
        return [e for e in self.evidence if not e.passed]

    def to_dict(self):
        return {"status": self.status, "evidence": [e.to_dict() for e in self.evidence]}


@dataclass
class ConditionReport:
    """Outcome of a family of conditions, with the data later steps reuse."""

    passed: bool
    evidence: List[Evidence] = field(default_factory=list)
    case: Optional[int] = None
    p2_rank: Optional[float] = None
    limsup_gap: Optional[float] = None
    min_gap: Optional[float] = None
    horizon: Optional[int] = None


def _as_sequence(c):
    if isinstance(c, SequenceModel):
        return c
    return SequenceModel(c)


def _check_nonnegative(c):
    if np.any(c.head < 0):
        raise InvalidSpec("norm sequence must be non-negative")
    if isinstance(c.tail, ConstantTail) and c.tail.value < 0:
        raise InvalidSpec("norm sequence must be non-negative")
    if c.tail is not None and not isinstance(c.tail, ConstantTail):
        sample = c.entries(c.n_head + VALIDATION_HORIZON)
        if np.any(sample < 0) or c.liminf < 0:
            raise InvalidSpec("norm sequence must be non-negative")


def _as_finite_operator(S, tol):
    if not isinstance(S, FiniteHermitian):
        S = FiniteHermitian(S)
    if not S.is_positive_definite(tol):
        raise NotPositiveDefinite(f"smallest eigenvalue {S.eigenvalues[-1]:.3e} is not positive")
    return S


def _check_diagonal_positive(S):
    a = S.diag
    lo = min(float(np.min(a.entries(a.n_head + (0 if isinstance(a.tail, ConstantTail) else VALIDATION_HORIZON)))), a.liminf)
    if not lo > 0:
        raise NotPositiveDefinite("diagonal operator is not bounded below by a positive constant")


def check_finite_finite(S, c, tol=DEFAULT_TOL):
    """Decide admissibility of a matrix ``S`` and a finite norm list ``c``.

    Admissible exactly when ``c`` is majorized by the eigenvalues of ``S``
    padded with zeros to length ``m``.
    """
    S = _as_finite_operator(S, tol)
    c = _as_sequence(c)
    if not c.is_finite:
        raise InvalidSpec("check_finite_finite needs a finite norm list")
    _check_nonnegative(c)
    n, m = S.n, len(c)
    if m < n:
        ev = Evidence("m >= n", "frame-length", False, None, m, n,
                      note="fewer vectors than the dimension cannot span the space")
        return AdmissibilityVerdict(NOT_ADMISSIBLE, [ev])
    b = np.concatenate([S.eigenvalues, np.zeros(m - n)])
    bs = np.cumsum(b)
    cs = np.cumsum(sort_desc(c.head))
    evidence = []
    ok = True
    worst_k, worst_slack = None, math.inf
    for k in range(1, n):
        slack = bs[k - 1] - cs[k - 1]
        if slack < -scaled_tol(tol, bs[k - 1], cs[k - 1]):
            evidence.append(Evidence("sum_{i<=k} b_i >= sum_{i<=k} c_i", "majorization", False, k, bs[k - 1], cs[k - 1]))
            ok = False
            break
        if slack < worst_slack:
            worst_k, worst_slack = k, slack
    else:
        if n > 1:
            evidence.append(Evidence("sum_{i<=k} b_i >= sum_{i<=k} c_i", "majorization", True, worst_k,
                                     bs[worst_k - 1], cs[worst_k - 1]))
    tr, tc = bs[n - 1], cs[-1]
    tr_ok = abs(tr - tc) <= scaled_tol(tol, tr, tc)
    evidence.append(Evidence("tr S = sum c", "trace", tr_ok, None, tr, tc))
    return AdmissibilityVerdict(ADMISSIBLE if ok and tr_ok else NOT_ADMISSIBLE, evidence)


def check_finite_infinite(S, c, tol=DEFAULT_TOL, accuracy=DEFAULT_ACCURACY):
    """Decide admissibility of a matrix ``S`` and an infinite summable ``c``.

    Admissible exactly when ``sum_{i<=k} b_i >= U_k(c)`` for ``k < n`` and
    ``tr S = sum c``.
    """
    S = _as_finite_operator(S, tol)
    c = _as_sequence(c).padded()
    _check_nonnegative(c)
    if not c.summable:
        raise NotSummable("norm sequence must be summable for a finite-dimensional frame operator")
    n = S.n
    bs = np.cumsum(S.eigenvalues)
    evidence = []
    ok = True
    for k in range(1, n):
        uc = u_k_seq(c, k, accuracy)
        if bs[k - 1] < uc.value - uc.error - scaled_tol(tol, bs[k - 1], uc.value):
            evidence.append(Evidence("sum_{i<=k} b_i >= U_k(c)", "ky-fan", False, k, bs[k - 1], uc.value))
            ok = False
            break
    else:
        if n > 1:
            evidence.append(Evidence("sum_{i<=k} b_i >= U_k(c)", "ky-fan", True, n - 1))
    tr, tc = bs[-1], c.total_sum
    tr_ok = abs(tr - tc) <= scaled_tol(tol, tr, tc)
    evidence.append(Evidence("tr S = sum c", "trace", tr_ok, None, tr, tc))
    return AdmissibilityVerdict(ADMISSIBLE if ok and tr_ok else NOT_ADMISSIBLE, evidence)


def _gaps(S, c, summ, k, accuracy):
    us, uc = u_k_op(S, k, accuracy, summ), u_k_seq(c, k, accuracy)
    lower = us.value - us.error - uc.value - uc.error
    return us, uc, lower


def check_necessary(S, c, horizon=DEFAULT_HORIZON, tol=DEFAULT_TOL, accuracy=DEFAULT_ACCURACY):
    """Necessary conditions for a diagonal ``S`` on an infinite-dimensional space.

    ``sum c = inf``, ``U_k(S) >= U_k(c)`` for ``k <= horizon`` and
    ``limsup c <= alpha+(S)``.  The ``L_k`` family is not checked: a large
    enough zero extension of ``S`` always satisfies it.
    """
    c = _as_sequence(c).padded()
    summ = spectral_summary(S, accuracy)
    evidence = []
    total = c.total_sum
    div = math.isinf(total)
    evidence.append(Evidence("sum c = inf", "divergence", div, None, total, math.inf))

    uk_ok = True
    tight_k, tight = None, math.inf
    for k in range(1, horizon + 1):
        us, uc, _ = _gaps(S, c, summ, k, accuracy)
        slack = us.value - uc.value + us.error + uc.error
        if slack < -scaled_tol(tol, us.value, uc.value):
            evidence.append(Evidence("U_k(S) >= U_k(c)", "ky-fan", False, k, us.value, uc.value))
            uk_ok = False
            break
        if slack < tight:
            tight_k, tight = k, slack
            tight_pair = (us.value, uc.value)
    if uk_ok:
        evidence.append(Evidence("U_k(S) >= U_k(c)", "ky-fan", True, tight_k, *tight_pair,
                                 note=f"checked k <= {horizon}; witness is the tightest k"))
    ls = c.limsup
    sup_ok = ls <= summ.alpha_plus + scaled_tol(tol, summ.alpha_plus)
    evidence.append(Evidence("limsup c <= ||S||_e", "essential-norm", sup_ok, None, ls, summ.alpha_plus))
    return ConditionReport(div and uk_ok and sup_ok, evidence, p2_rank=summ.p2_rank,
                           limsup_gap=summ.alpha_plus - ls, horizon=horizon)


def check_sufficient(S, c, horizon=DEFAULT_HORIZON, tol=DEFAULT_TOL, accuracy=DEFAULT_ACCURACY):
    """Sufficient conditions for a diagonal ``S`` on an infinite-dimensional space.

    With ``r`` the rank of the spectral projection of ``S`` on
    ``[||S||_e, ||S||]``:

    * ``r`` infinite: ``U_k(S) >= U_k(c)`` for all ``k`` and
      ``||S||_e > limsup c``;
    * ``r`` finite: ``U_k(S) >= U_k(c)`` for ``k <= r``, strict inequality for
      ``k > r``, and ``||S||_e > limsup c``.

    The ``k``-families are checked up to a horizon ``K`` and certified beyond
    it: for ``k > K``, ``U_k(S) - U_k(c) >= gap(K) + (k - K) g - R_K`` where
    ``g = ||S||_e - limsup c`` and ``R_K`` is the mass of ``c+`` outside its
    ``K`` largest entries.  The horizon is doubled (up to 64 times the
    requested value) until that bound certifies the tail.
    """
    c = _as_sequence(c).padded()
    summ = spectral_summary(S, accuracy)
    evidence = []
    total = c.total_sum
    div = math.isinf(total)
    evidence.append(Evidence("sum c = inf", "divergence", div, None, total, math.inf))

    g = summ.alpha_plus - c.limsup
    g_ok = g > scaled_tol(tol, summ.alpha_plus, c.limsup)
    evidence.append(Evidence("||S||_e > limsup c", "essential-norm-strict", g_ok, None, summ.alpha_plus, c.limsup))

    case = 1 if summ.p2_infinite else 2
    r = summ.p2_rank
    tag = "sufficient-case-1" if case == 1 else "sufficient-case-2"
    evidence.append(Evidence("rank E[||S||_e, ||S||]", tag, True, None, r, None))
    report = ConditionReport(False, evidence, case, r, g, None, horizon)
    if not (div and g_ok):
        return report

    K = horizon if case == 1 else max(horizon, int(r) + 1)
    limit = MAX_HORIZON_GROWTH * K
    checked = 0
    min_gap = math.inf
    pos_mass = c.deviation_mass(0, True)
    while True:
        for k in range(checked + 1, K + 1):
            us, uc, lower = _gaps(S, c, summ, k, accuracy)
            slack = scaled_tol(tol, us.value, uc.value)
            strict = case == 2 and k > r
            if strict:
                ok = lower > slack
                min_gap = min(min_gap, lower)
            else:
                ok = us.value - uc.value + us.error + uc.error >= -slack
            if not ok:
                name = "U_k(S) > U_k(c)" if strict else "U_k(S) >= U_k(c)"
                evidence.append(Evidence(name, tag, False, k, us.value, uc.value))
                return report
        checked = K
        us, uc, lower = _gaps(S, c, summ, K, accuracy)
        top_c_plus = uc.value - uc.error - K * c.limsup
        rest = max(pos_mass - top_c_plus, 0.0)
        beyond = lower + g - rest
        need = scaled_tol(tol, us.value, uc.value) if case == 2 else -scaled_tol(tol, us.value, uc.value)
        if beyond > need:
            break
        if K >= limit:
            raise HorizonExceeded(f"could not certify the U_k family beyond k = {K}")
        K = min(2 * K, limit)

    name = "U_k(S) >= U_k(c)" if case == 1 else "U_k(S) >= U_k(c) (k<=r), > (k>r)"
    evidence.append(Evidence(name, tag, True, K, note=f"checked k <= {K}; certified beyond"))
    report.passed = True
    report.min_gap = min_gap if math.isfinite(min_gap) else None
    report.horizon = K
    return report


def classify(S, c, horizon=DEFAULT_HORIZON, tol=DEFAULT_TOL, accuracy=DEFAULT_ACCURACY):
    """Dispatch to the decisive finite tests or the infinite-dimensional trichotomy."""
    c = _as_sequence(c)
    if isinstance(S, FiniteHermitian) or not isinstance(S, DiagonalOperator):
        if c.is_finite:
            return check_finite_finite(S, c, tol)
        return check_finite_infinite(S, c, tol, accuracy)
    _check_diagonal_positive(S)
    _check_nonnegative(c)
    nec = check_necessary(S, c, horizon, tol, accuracy)
    if not nec.passed:
        return AdmissibilityVerdict(NOT_ADMISSIBLE, nec.evidence)
    try:
        suf = check_sufficient(S, c, horizon, tol, accuracy)
    except HorizonExceeded as exc:
        note = Evidence("sufficient conditions", "sufficient", False, None, note=str(exc))
        return AdmissibilityVerdict(UNDETERMINED, nec.evidence + [note])
    status = ADMISSIBLE if suf.passed else UNDETERMINED
    return AdmissibilityVerdict(status, nec.evidence + suf.evidence)


def tight_admissible(A, c, horizon=DEFAULT_HORIZON, tol=DEFAULT_TOL):
    """Is there a tight frame with bound ``A`` and squared norms ``c``?

    Let ``J`` be the positions where ``c_i == A`` exactly.  Admissible when the
    entries outside ``J`` have divergent sum and stay below ``A`` in the limit;
    otherwise the question is handed to :func:`classify` with ``S = A I``.
    """
    A = float(A)
    c = _as_sequence(c)
    fallback = lambda: classify(DiagonalOperator.constant(A), c, horizon, tol)  # noqa: E731
    if c.is_finite or not (np.all(c.head > 0) and np.all(c.head <= A)):
        return fallback()
    if isinstance(c.tail, ConstantTail):
        kappa = c.tail.value
        if not (0 < kappa < A):
            return fallback()
        sup_out = max([kappa] + [x for x in c.head if x != A])
    else:
        meta = c.tail.meta
        if not (meta.limsup < A and meta.liminf >= 0) or not math.isinf(c.total_sum):
            return fallback()
        sup_out = meta.limsup
    if not math.isinf(c.total_sum):
        return fallback()
    in_j = int(np.count_nonzero(c.head == A))
    evidence = [
        Evidence("sum_{i not in J} c_i = inf", "tight-frame", True, None, math.inf, math.inf,
                 note=f"{in_j} head entries equal the frame bound"),
        Evidence("limsup_{i not in J} c_i < A", "tight-frame", True, None, sup_out, A),
    ]
    return AdmissibilityVerdict(ADMISSIBLE, evidence)


def excess_forced_infinite(S, c, tol=DEFAULT_TOL):
    """True when every admissible frame for ``(S, c)`` must have infinite excess.

    That happens when ``liminf c`` lies strictly below the bottom of the
    essential spectrum of ``S``.
    """
    if not isinstance(S, DiagonalOperator):
        raise InvalidSpec("excess_forced_infinite needs a diagonal operator on an infinite-dimensional space")
    c = _as_sequence(c).padded()
    am = S.diag.liminf
    return bool(c.liminf < am - scaled_tol(tol, am))
