"""Real sequence models and the majorization functionals ``U_k`` / ``L_k``.

A :class:`SequenceModel` is an explicit head of real numbers followed by one of

* nothing (a finite vector),
* a constant tail ``kappa, kappa, ...``,
* a named generator tail whose asymptotic metadata is declared, not inferred.

``U_k(a)`` is the supremum of sums of ``k`` entries of ``a``; ``L_k(a)`` the
infimum.  For infinite models they are evaluated through the decomposition
``U_k(a) = U_k(a+) + k * limsup(a)`` where ``a+ = max(a - limsup a, 0)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Union

import numpy as np

from .errors import DimensionMismatch, HorizonExceeded, InvalidSpec, KMismatch, NotSummable

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
DEFAULT_ACCURACY = 1e-12
VALIDATION_HORIZON = 10_000
MAX_SCAN = 1 << 22


def scaled_tol(tol, *magnitudes):
    """Absolute slack ``tol * (1 + max |magnitude|)``."""
    m = max((abs(float(x)) for x in magnitudes if np.isfinite(x)), default=0.0)
    return tol * (1.0 + m)


class Estimate(NamedTuple):
    """A value with a certified absolute error bound."""

    value: float
    error: float = 0.0


def _zero_mass(N):
    return 0.0


@dataclass(frozen=True)
class TailMeta:
    """Declared asymptotics of a generator tail.

    ``above_mass(N)`` bounds ``sum_{i>N} max(a_i - limsup, 0)`` and
    ``below_mass(N)`` bounds ``sum_{i>N} max(liminf - a_i, 0)``; ``None`` means
    the corresponding deviations are not summable.  ``tail_sum(N)`` is the
    exact ``sum_{i>N} a_i`` or ``None`` when the series diverges.  ``N`` is
    always an absolute (1-based) position in the full sequence.

    ``limsup_attained`` says infinitely many entries are ``>= limsup``;
    ``liminf_attained`` that infinitely many are ``<= liminf``.
    """

    limsup: float
    liminf: float
    bound: float
    above_mass: Optional[Callable[[int], float]] = _zero_mass
    below_mass: Optional[Callable[[int], float]] = _zero_mass
    tail_sum: Optional[Callable[[int], float]] = None
    limsup_attained: bool = False
    liminf_attained: bool = False

    def __post_init__(self):
        if not (self.liminf <= self.limsup <= self.bound):
            raise InvalidSpec(
                f"tail metadata needs liminf <= limsup <= bound, got "
                f"{self.liminf}, {self.limsup}, {self.bound}"
            )
        if abs(self.liminf) > self.bound:
            raise InvalidSpec("liminf exceeds the declared absolute bound")

    @property
    def summable_above(self):
        return self.above_mass is not None

    @property
    def summable_below(self):
        return self.below_mass is not None

    @property
    def summable(self):
        return self.tail_sum is not None


@dataclass(frozen=True)
class ConstantTail:
    value: float


@dataclass(frozen=True, eq=False)
class GeneratorTail:
    """Tail given by ``rule(i)`` for absolute 1-based positions ``i``."""

    name: str
    rule: Callable[[np.ndarray], np.ndarray]
    meta: TailMeta
    params: dict = field(default_factory=dict)

    def __call__(self, idx):
        return np.asarray(self.rule(np.asarray(idx, dtype=np.int64)), dtype=float)


Tail = Union[None, ConstantTail, GeneratorTail]


def _as_realvec(values, name="values"):
    arr = np.array(values, dtype=float).reshape(-1)
    if arr.size < 1:
        raise InvalidSpec(f"{name} must have at least one entry")
    if not np.all(np.isfinite(arr)):
        raise InvalidSpec(f"{name} contains NaN or infinite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SequenceModel:
    """A bounded real sequence: explicit head plus optional tail.

    Positions are 1-based in docstrings and generator rules, 0-based in the
    arrays returned by :meth:`entries`.
    """

    head: np.ndarray
    tail: Tail = None

    def __post_init__(self):
        object.__setattr__(self, "head", _as_realvec(self.head, "head"))
        if isinstance(self.tail, ConstantTail):
            if not np.isfinite(self.tail.value):
                raise InvalidSpec("constant tail must be finite")
        elif isinstance(self.tail, GeneratorTail):
            _validate_meta(self)
        elif self.tail is not None:
            raise InvalidSpec(f"unsupported tail {self.tail!r}")

    # -- constructors -----------------------------------------------------

    @classmethod
    def finite(cls, values):
        return cls(values)

    @classmethod
    def constant(cls, head, value):
        return cls(head, ConstantTail(float(value)))

    @classmethod
    def from_generator(cls, name, head=None, n_head=1, **params):
        """Build a model from the named generator registry.

        When ``head`` is omitted the first ``n_head`` entries are produced by
        the generator rule itself.
        """
        tail = make_generator(name, **params)
        if head is None:
            head = tail(np.arange(1, n_head + 1))
        return cls(head, tail)

    # -- structure --------------------------------------------------------

    @property
    def is_finite(self):
        return self.tail is None

    @property
    def n_head(self):
        return self.head.size

    def __len__(self):
        if not self.is_finite:
            raise TypeError("infinite sequence has no length")
        return self.n_head

    def padded(self):
        """Finite models extended by zeros; infinite models unchanged."""
        if self.is_finite:
            return SequenceModel(self.head, ConstantTail(0.0))
        return self

    def entries(self, n):
        """First ``n`` entries as a float array."""
        n = int(n)
        h = self.n_head
        if n <= h:
            return np.array(self.head[:n])
        if self.tail is None:
            raise KMismatch(f"requested {n} entries of a length-{h} sequence")
        if isinstance(self.tail, ConstantTail):
            rest = np.full(n - h, self.tail.value)
        else:
            rest = self.tail(np.arange(h + 1, n + 1))
        return np.concatenate([self.head, rest])

    def materialize(self, n):
        """Same sequence with at least ``n`` head entries."""
        if self.is_finite or n <= self.n_head:
            return self
        return SequenceModel(self.entries(n), self.tail)

    def with_head(self, head):
        """Replace the head, keeping the tail (the tail starts after the new head)."""
        head = np.asarray(head, dtype=float)
        if not self.is_finite and head.size < self.n_head:
            raise DimensionMismatch("replacement head is shorter than the original")
        return SequenceModel(head, self.tail)

    def shifted(self, n):
        """The sequence with its first ``n`` entries dropped."""
        if self.is_finite:
            return SequenceModel(self.head[n:])
        model = self.materialize(n + 1)
        if isinstance(model.tail, GeneratorTail):
            gen = model.tail
            meta = gen.meta

            def shift(f):
                return None if f is None else (lambda N, f=f: f(N + n))

            new_meta = TailMeta(
                meta.limsup, meta.liminf, meta.bound,
                shift(meta.above_mass), shift(meta.below_mass), shift(meta.tail_sum),
                meta.limsup_attained, meta.liminf_attained,
            )
            tail = GeneratorTail(f"{gen.name}>>{n}", lambda i, r=gen.rule: r(i + n), new_meta, dict(gen.params))
            return SequenceModel(model.head[n:], tail)
        return SequenceModel(model.head[n:], model.tail)

    # -- asymptotics ------------------------------------------------------

    def _infinite(self, what):
        if self.is_finite:
            raise ValueError(f"{what} is undefined for a finite sequence; use padded()")

    @property
    def limsup(self):
        self._infinite("limsup")
        if isinstance(self.tail, ConstantTail):
            return self.tail.value
        return self.tail.meta.limsup

    @property
    def liminf(self):
        self._infinite("liminf")
        if isinstance(self.tail, ConstantTail):
            return self.tail.value
        return self.tail.meta.liminf

    @property
    def bound(self):
        hb = float(np.max(np.abs(self.head)))
        if self.tail is None:
            return hb
        if isinstance(self.tail, ConstantTail):
            return max(hb, abs(self.tail.value))
        return max(hb, self.tail.meta.bound)

    @property
    def summable(self):
        if self.tail is None:
            return True
        if isinstance(self.tail, ConstantTail):
            return self.tail.value == 0.0
        return self.tail.meta.summable

    def tail_sum(self, N):
        """Exact ``sum_{i>N} a_i`` (``inf``/``-inf`` when divergent)."""
        N = int(N)
        h = self.n_head
        head_part = math.fsum(self.head[N:]) if N < h else 0.0
        if self.tail is None:
            return head_part
        if isinstance(self.tail, ConstantTail):
            k = self.tail.value
            return head_part if k == 0.0 else math.copysign(math.inf, k)
        f = self.tail.meta.tail_sum
        if f is None:
            return math.inf
        return head_part + f(max(N, h))

    @property
    def total_sum(self):
        return self.tail_sum(0)

    def deviation_mass(self, N, upper=True):
        """Bound on ``sum_{i>N}`` of positive (``upper``) or negative deviations.

        Deviations are taken from ``limsup`` (resp. ``liminf``).  Returns
        ``inf`` when they are not summable.
        """
        N = int(N)
        ref = self.limsup if upper else self.liminf
        h = self.n_head
        d = (self.head[N:] - ref) if N < h else np.empty(0)
        head_part = math.fsum(np.maximum(d, 0.0) if upper else np.maximum(-d, 0.0))
        if isinstance(self.tail, ConstantTail):
            return head_part
        f = self.tail.meta.above_mass if upper else self.tail.meta.below_mass
        if f is None:
            return math.inf
        return head_part + f(max(N, h))


# -- generator registry ------------------------------------------------------


def _alternating(v1, v2):
    v1, v2 = float(v1), float(v2)
    hi, lo = max(v1, v2), min(v1, v2)
    zero = v1 == 0.0 and v2 == 0.0
    meta = TailMeta(
        hi, lo, max(abs(v1), abs(v2)),
        tail_sum=(lambda N: 0.0) if zero else None,
        limsup_attained=True, liminf_attained=True,
    )
    return lambda i: np.where(i % 2 == 1, v1, v2), meta


def _geometric(g, rho):
    g, rho = float(g), float(rho)
    if not abs(rho) < 1.0:
        raise InvalidSpec("geometric generator needs |rho| < 1")
    r = abs(rho)

    def mass(N):
        return abs(g) * r**N / (1.0 - r)

    meta = TailMeta(
        0.0, 0.0, abs(g), mass, mass,
        tail_sum=lambda N: g * rho**N / (1.0 - rho),
        limsup_attained=g >= 0 or rho < 0,
        liminf_attained=g <= 0 or rho < 0,
    )
    return lambda i: g * rho ** (i - 1.0), meta


def _example61(p, a):
    p, a = float(p), float(a)
    if not (0.0 < a < 1.0 and 0.0 < p < 1.0):
        raise InvalidSpec("example61 generator needs 0 < p < 1 and 0 < a < 1")

    def rule(i):
        i = np.asarray(i)
        ak = a ** i.astype(float)
        out = np.where(i % 2 == 0, 1.0 - ak, ak)
        return np.where(i == 1, p, out)

    return rule, TailMeta(1.0, 0.0, 1.0)


def _harmonic_gap():
    meta = TailMeta(1.0, 1.0, 1.0, below_mass=None, liminf_attained=True)
    return lambda i: 1.0 - 1.0 / (i + 1.0), meta


GENERATORS = {
    "alternating": _alternating,
    "geometric": _geometric,
    "example61": _example61,
    "harmonic_gap": _harmonic_gap,
}


def make_generator(name, **params):
    try:
        factory = GENERATORS[name]
    except KeyError:
        raise InvalidSpec(f"unknown generator {name!r}; known: {sorted(GENERATORS)}") from None
    try:
        rule, meta = factory(**params)
    except TypeError as exc:
        raise InvalidSpec(f"bad parameters for generator {name!r}: {exc}") from None
    return GeneratorTail(name, rule, meta, dict(params))


def _validate_meta(model, horizon=VALIDATION_HORIZON, tol=DEFAULT_TOL):
    # cheap sanity net against mis-declared metadata
    gen = model.tail
    meta = gen.meta
    h = model.n_head
    idx = np.arange(h + 1, h + horizon + 1)
    vals = gen(idx)
    if vals.shape != idx.shape or not np.all(np.isfinite(vals)):
        raise InvalidSpec(f"generator {gen.name!r} produced non-finite values")
    if np.max(np.abs(vals)) > meta.bound + scaled_tol(tol, meta.bound):
        raise InvalidSpec(f"generator {gen.name!r} exceeds its declared bound")
    last = h + horizon
    for N in (h, h + horizon // 4, h + horizon // 2):
        window = vals[N - h:]
        if meta.above_mass is not None:
            seen = math.fsum(np.maximum(window - meta.limsup, 0.0))
            if seen > meta.above_mass(N) + scaled_tol(tol, seen):
                raise InvalidSpec(f"generator {gen.name!r}: declared upper deviation mass too small")
        if meta.below_mass is not None:
            seen = math.fsum(np.maximum(meta.liminf - window, 0.0))
            if seen > meta.below_mass(N) + scaled_tol(tol, seen):
                raise InvalidSpec(f"generator {gen.name!r}: declared lower deviation mass too small")
        if meta.tail_sum is not None:
            seen = math.fsum(window)
            declared = meta.tail_sum(N) - meta.tail_sum(last)
            if abs(seen - declared) > scaled_tol(tol, seen, declared):
                raise InvalidSpec(f"generator {gen.name!r}: declared tail sum disagrees with samples")


# -- elementary operations ---------------------------------------------------


def sort_desc(v):
    """Entries of ``v`` in non-increasing order (ties keep their original order)."""
    v = np.asarray(v, dtype=float)
    return v[np.argsort(-v, kind="stable")]


def majorizes(b, c, tol=DEFAULT_TOL):
    """True when ``c`` is majorized by ``b``.

    Sorted partial sums of ``b`` dominate those of ``c`` (up to ``tol``
    relative slack) and the totals agree.
    """
    b = np.asarray(b, dtype=float).reshape(-1)
    c = np.asarray(c, dtype=float).reshape(-1)
    if b.shape != c.shape:
        raise DimensionMismatch(f"majorization needs equal lengths, got {b.size} and {c.size}")
    sb = np.cumsum(sort_desc(b))
    sc = np.cumsum(sort_desc(c))
    for k in range(b.size - 1):
        if sb[k] < sc[k] - scaled_tol(tol, sb[k], sc[k]):
            return False
    tb, tc = math.fsum(b), math.fsum(c)
    return abs(tb - tc) <= scaled_tol(tol, tb, tc)


def _part(a, upper):
    a = a.padded()
    ref = a.limsup if upper else a.liminf
    dev = a.head - ref
    head = np.maximum(dev, 0.0) if upper else np.minimum(dev, 0.0)
    if isinstance(a.tail, ConstantTail):
        return SequenceModel(head, ConstantTail(0.0))
    gen, meta = a.tail, a.tail.meta
    if upper:
        rule = lambda i, r=gen.rule: np.maximum(r(i) - ref, 0.0)
        mass = meta.above_mass
        new = TailMeta(0.0, 0.0, meta.bound + abs(ref), mass, _zero_mass,
                       limsup_attained=True, liminf_attained=True)
    else:
        rule = lambda i, r=gen.rule: np.minimum(r(i) - ref, 0.0)
        mass = meta.below_mass
        new = TailMeta(0.0, 0.0, meta.bound + abs(ref), _zero_mass, mass,
                       limsup_attained=True, liminf_attained=True)
    return SequenceModel(head, GeneratorTail(gen.name + ("+" if upper else "-"), rule, new, dict(gen.params)))


def plus_part(a):
    """Entrywise ``max(a_i - limsup a, 0)``.  Finite inputs are zero-padded first."""
    return _part(a, True)


def minus_part(a):
    """Entrywise ``min(a_i - liminf a, 0)``.  Finite inputs are zero-padded first."""
    return _part(a, False)


def _scan_horizon(a, start, accuracy, upper, max_scan):
    N = max(int(start), a.n_head)
    while True:
        mass = a.deviation_mass(N, upper)
        if mass <= accuracy:
            return N, mass
        if not np.isfinite(mass):
            side = "above limsup" if upper else "below liminf"
            raise HorizonExceeded(f"deviations {side} are not summable; U_k/L_k cannot be certified")
        if N >= max_scan:
            raise HorizonExceeded(
                f"tail mass {mass:.3e} still above accuracy {accuracy:.1e} after {N} entries"
            )
        N = min(2 * N, max_scan)


def _extreme_sum(a, k, accuracy, upper, max_scan):
    k = int(k)
    if k < 1:
        raise KMismatch("k must be a positive integer")
    if a.is_finite:
        if k > a.n_head:
            raise KMismatch(f"k={k} exceeds sequence length {a.n_head}")
        s = sort_desc(a.head)
        picked = s[:k] if upper else s[::-1][:k]
        return Estimate(math.fsum(picked), 0.0)
    ref = a.limsup if upper else a.liminf
    if isinstance(a.tail, ConstantTail):
        N, err = a.n_head, 0.0
    else:
        N, err = _scan_horizon(a, max(k, a.n_head), accuracy, upper, max_scan)
    dev = a.entries(N) - ref
    dev = np.maximum(dev, 0.0) if upper else np.minimum(dev, 0.0)
    dev = sort_desc(dev) if upper else sort_desc(dev)[::-1]
    return Estimate(math.fsum(dev[:k]) + k * ref, err)


def u_k_seq(a, k, accuracy=DEFAULT_ACCURACY, max_scan=MAX_SCAN):
    """Supremum of ``k``-term sums of ``a``, with a certified error bound.

    Finite sequences are exact (sorted partial sum).  Infinite models scan
    entries until the remaining deviation mass above ``limsup`` is at most
    ``accuracy``.
    """
    return _extreme_sum(a, k, accuracy, True, max_scan)


def l_k_seq(a, k, accuracy=DEFAULT_ACCURACY, max_scan=MAX_SCAN):
    """Infimum of ``k``-term sums of ``a``; see :func:`u_k_seq`."""
    return _extreme_sum(a, k, accuracy, False, max_scan)


def ell1_orbit_closure_member(b, a, horizon=200, tol=DEFAULT_TOL, accuracy=DEFAULT_ACCURACY):
    """Is ``b`` in the l1-closure of the convex hull of rearrangements of ``a``?

    Both sequences must be absolutely summable.  The test compares totals and
    the ``U_k`` / ``L_k`` families for ``k <= horizon``; beyond the horizon the
    inequalities are implied once ``U_K(a)`` already exceeds the whole positive
    mass of ``b`` (and symmetrically for ``L``).  When that certificate is not
    available the horizon result is returned with a logged warning.
    """
    a = a.padded()
    b = b.padded()
    for name, s in (("a", a), ("b", b)):
        if not s.summable:
            raise NotSummable(f"sequence {name} is not summable")
    sa, sb = a.total_sum, b.total_sum
    if abs(sa - sb) > scaled_tol(tol, sa, sb):
        return False
    ua = lb = None
    for k in range(1, horizon + 1):
        ua, ub = u_k_seq(a, k, accuracy), u_k_seq(b, k, accuracy)
        if ua.value < ub.value - ua.error - ub.error - scaled_tol(tol, ua.value, ub.value):
            return False
        la, lb = l_k_seq(a, k, accuracy), l_k_seq(b, k, accuracy)
        if la.value > lb.value + la.error + lb.error + scaled_tol(tol, la.value, lb.value):
            return False
    la = l_k_seq(a, horizon, accuracy)
    pos_b = b.deviation_mass(0, True)
    neg_b = b.deviation_mass(0, False)
    certified = (ua.value + scaled_tol(tol, ua.value, pos_b) >= pos_b
                 and la.value - scaled_tol(tol, la.value, neg_b) <= -neg_b)
    if not certified:
        logger.warning("l1 orbit membership decided on k <= %d only; beyond-horizon certificate unavailable", horizon)
    return True
