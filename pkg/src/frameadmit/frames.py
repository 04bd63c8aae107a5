"""Finite frames: frame operator, bounds, excess and pair verification."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidSpec
from .operators import FiniteHermitian
from .sequences import DEFAULT_TOL


@dataclass(frozen=True, eq=False)
class Frame:
    """Ordered family of ``m`` vectors in ``R^n``, stored one vector per row."""

    vectors: np.ndarray

    def __post_init__(self):
        V = np.array(self.vectors, dtype=float)
        if V.ndim == 1:
            V = V.reshape(1, -1)
        if V.ndim != 2 or V.shape[0] < 1 or V.shape[1] < 1:
            raise InvalidSpec(f"frame vectors must form a non-empty 2-D array, got shape {V.shape}")
        if not np.all(np.isfinite(V)):
            raise InvalidSpec("frame vectors contain non-finite entries")
        V.setflags(write=False)
        object.__setattr__(self, "vectors", V)

    @classmethod
    def from_synthesis(cls, T):
        """Frame whose vectors are the columns of the ``n x m`` matrix ``T``."""
        return cls(np.asarray(T, dtype=float).T)

    @property
    def dim(self):
        return self.vectors.shape[1]

    @property
    def m(self):
        return self.vectors.shape[0]

    def __len__(self):
        return self.m

    @property
    def synthesis_matrix(self):
        return self.vectors.T

    def to_dict(self):
        return {"dim": int(self.dim), "vectors": self.vectors.tolist()}


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float


@dataclass(frozen=True)
class VerificationReport:
    norm_deviation: float
    operator_deviation: float
    passed: bool
    tol: float

    def to_dict(self):
        return {
            "max_norm_deviation": self.norm_deviation,
            "operator_deviation": self.operator_deviation,
            "pass": bool(self.passed),
            "tol": self.tol,
        }


def frame_operator(F):
    """``sum_k f_k f_k^T = T T^T``."""
    T = F.synthesis_matrix
    return FiniteHermitian(T @ T.T)


def frame_bounds(F):
    """Optimal frame bounds: extreme eigenvalues of the frame operator."""
    w = frame_operator(F).eigenvalues
    return FrameBounds(max(float(w[-1]), 0.0), float(w[0]))


def is_frame(F, tol=DEFAULT_TOL):
    return frame_bounds(F).lower > tol


def is_tight(F, tol=DEFAULT_TOL):
    fb = frame_bounds(F)
    return is_frame(F, tol) and fb.upper - fb.lower <= tol * (1.0 + fb.upper)


def is_parseval(F, tol=DEFAULT_TOL):
    return is_tight(F, tol) and abs(frame_bounds(F).lower - 1.0) <= tol


def excess(F, tol=DEFAULT_TOL):
    """Dimension of the kernel of the synthesis operator (numerical rank)."""
    s = np.linalg.svd(F.synthesis_matrix, compute_uv=False)
    rank = int(np.count_nonzero(s > tol * (1.0 + s[0])))
    return F.m - rank


def norms_squared(F):
    return np.einsum("ij,ij->i", F.vectors, F.vectors)


def verify_pair(F, S, c, tol=DEFAULT_TOL):
    """Compare ``F`` against the target frame operator ``S`` and norms ``c``.

    Deviations are absolute; the pass test scales them by ``1 + ||S||`` and
    ``1 + max |c|`` respectively.
    """
    if not isinstance(S, FiniteHermitian):
        S = FiniteHermitian(S)
    c = np.asarray(c, dtype=float).reshape(-1)
    if c.size != F.m:
        raise DimensionMismatch(f"{F.m} frame vectors but {c.size} prescribed norms")
    if S.n != F.dim:
        raise DimensionMismatch(f"frame lives in R^{F.dim} but S is {S.n}x{S.n}")
    nd = float(np.max(np.abs(norms_squared(F) - c)))
    T = F.synthesis_matrix
    od = float(np.linalg.norm(T @ T.T - S.matrix, 2))
    ok = nd <= tol * (1.0 + float(np.max(np.abs(c)))) and od <= tol * (1.0 + S.norm)
    if math.isnan(nd) or math.isnan(od):
        ok = False
    return VerificationReport(nd, od, ok, tol)
