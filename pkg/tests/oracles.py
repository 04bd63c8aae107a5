"""Independent reference computations used as test oracles.

Nothing here calls into ``frameadmit``: k-term extremes come from exhaustive
subset enumeration, majorization from explicit partial sums, and the
closed-form sums are done in exact rational arithmetic.
"""

import itertools
import math
from fractions import Fraction

import numpy as np


def brute_u_k(values, k):
    """Largest sum of ``k`` distinct entries, by enumerating every subset."""
    return max(math.fsum(s) for s in itertools.combinations(values, k))


def brute_l_k(values, k):
    return min(math.fsum(s) for s in itertools.combinations(values, k))


def majorized_by_partial_sums(b, c, tol=1e-9):
    """``c`` majorized by ``b`` via sorted partial sums, entry by entry."""
    b = sorted(b, reverse=True)
    c = sorted(c, reverse=True)
    if len(b) != len(c):
        raise ValueError("length mismatch")
    sb = sc = 0.0
    for x, y in zip(b, c):
        sb += x
        sc += y
        if sc > sb + tol * (1 + abs(sb)):
            return False
    return abs(sb - sc) <= tol * (1 + abs(sb))


def random_majorized(rng, b, terms=4):
    """A point of the permutohedron of ``b``: convex mixture of rearrangements."""
    b = np.asarray(b, dtype=float)
    w = rng.dirichlet(np.ones(terms))
    return sum(wi * b[rng.permutation(b.size)] for wi in w)


def gapped_identity_bounds(p, a):
    """Exact bounds for the first norm of a Parseval frame with the gapped norms.

    Returns ``(p^2 + a/(1-a^2), p^2 + sum_{j>=2} a^j (1 - a^j))`` as Fractions.
    """
    p, a = Fraction(p), Fraction(a)
    loose = p * p + a / (1 - a * a)
    exact = p * p + sum(a ** j * (1 - a ** j) for j in range(2, 200))
    return loose, exact


def dyadic_truncation(N):
    """``(1/2, ..., 1/2^(N-1), 1/2^(N-1))``: dyadic norms with the tail folded in."""
    head = [Fraction(1, 2 ** i) for i in range(1, N)]
    return head + [Fraction(1, 2 ** (N - 1))]
