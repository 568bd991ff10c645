"""Lower-bound machinery for smoothing gaps: the maximal partition sum
gamma(d) computed by dynamic programming with certificate recovery, an
exhaustive enumeration oracle, the transcendental constant behind the
asymptotic slope, and the logarithmic sandwich bounds."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

import numpy as np

# Switch the DP to the pruned inner window above this dimension.
PRUNE_THRESHOLD = 32768
BRUTEFORCE_MAX_D = 22
BRUTEFORCE_EXACT_MAX_D = 12


@dataclass(frozen=True)
class PartitionCertificate:
    """An increasing index chain 1 = j_0 < ... < j_k = d and its sum value."""

    indices: tuple
    value: float

    def recompute(self) -> float:
        return partition_sum(self.indices)


@dataclass(frozen=True)
class AsymptoticConstants:
    """Root beta of 2*b*ln(b) - b + 1 in (0,1) and the slope 2*beta*(1-beta)."""

    beta: float
    slope: float


def partition_sum(indices) -> float:
    """Sum of ((j_l - j_{l-1}) / j_l)^2 along an increasing chain."""
    idx = list(indices)
    if idx[0] != 1 or any(a >= b for a, b in zip(idx, idx[1:])):
        raise ValueError("indices must be strictly increasing and start at 1")
    return float(sum(((b - a) / b) ** 2 for a, b in zip(idx, idx[1:])))


def gamma_table(d: int, pruned: bool = False):
    """DP table for the partition recurrence up to d.

    Returns (values, predecessors) arrays indexed 0..d; values[m] is the
    maximal partition sum from 1 to m, predecessors give the argmax with
    ties broken toward the smallest index.  The pruned variant restricts
    the inner search to a window of half-width m^(2/3) around beta*m and
    widens whenever the argmax lands on a window edge, so a maximizer
    escaping the heuristic window is always chased down.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    g = np.zeros(d + 1)
    pred = np.zeros(d + 1, dtype=np.int64)
    idx = np.arange(0, d + 1, dtype=np.float64)
    beta = beta_root(1e-10).beta if pruned else 0.0
    for m in range(2, d + 1):
        if pruned:
            w = int(m ** (2.0 / 3.0)) + 1
            center = int(beta * m)
            lo, hi = max(1, center - w), min(m - 1, center + w)
        else:
            lo, hi = 1, m - 1
        while True:
            t = (m - idx[lo:hi + 1]) / m
            vals = g[lo:hi + 1] + t * t
            k = int(np.argmax(vals))
            i_star = lo + k
            if pruned and ((i_star == lo and lo > 1)
                           or (i_star == hi and hi < m - 1)):
                lo, hi = max(1, lo - 2 * w), min(m - 1, hi + 2 * w)
                w *= 2
                continue
            break
        g[m] = vals[k]
        pred[m] = i_star
    return g, pred


def gamma(d: int, pruned=None) -> PartitionCertificate:
    """Maximal partition sum from 1 to d with an optimal chain.

    O(d^2) time, O(d) memory.  pruned=None selects the windowed search
    automatically for d above PRUNE_THRESHOLD; pass pruned=False to force
    the exhaustive inner loop.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if pruned is None:
        pruned = d > PRUNE_THRESHOLD
    g, pred = gamma_table(d, pruned=pruned)
    chain = [d]
    while chain[-1] != 1:
        chain.append(int(pred[chain[-1]]))
    return PartitionCertificate(indices=tuple(reversed(chain)), value=float(g[d]))


def gamma_bruteforce(d: int, exact: bool = False):
    """Exhaustive maximum over all 2^(d-2) admissible index chains.

    Testing oracle, independent of the DP.  With exact=True (d <= 12) the
    sum is carried in rational arithmetic and returned as a Fraction.
    """
    limit = BRUTEFORCE_EXACT_MAX_D if exact else BRUTEFORCE_MAX_D
    if not 2 <= d <= limit:
        raise ValueError(f"brute force supports 2 <= d <= {limit}"
                         f"{' in exact mode' if exact else ''}, got {d}")
    zero = Fraction(0) if exact else 0.0

    def term(a, b):
        return Fraction(b - a, b) ** 2 if exact else ((b - a) / b) ** 2

    best = [zero]

    def extend(prev, acc):
        closing = acc + term(prev, d)
        if closing > best[0]:
            best[0] = closing
        for nxt in range(prev + 1, d):
            extend(nxt, acc + term(prev, nxt))

    extend(1, zero)
    return best[0]


@lru_cache(maxsize=None)
def beta_root(tol: float = 1e-10) -> AsymptoticConstants:
    """Bisect 2*b*ln(b) - b + 1 on (0, 1) down to bracket width tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")

    def residual(b):
        return 2.0 * b * math.log(b) - b + 1.0

    lo, hi = 1e-15, 1.0 - 1e-15  # residual is +1 near 0 and negative near 1
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        if residual(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    beta = 0.5 * (lo + hi)
    return AsymptoticConstants(beta=beta, slope=2.0 * beta * (1.0 - beta))


def asymptotic_sandwich(d: int):
    """Bounds slope*ln(d) - 2(d-1)/d <= gamma(d) <= slope*ln(d)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    slope = beta_root(1e-10).slope
    upper = slope * math.log(d)
    return upper - 2.0 * (d - 1) / d, upper


def two_term_lower(d: int) -> float:
    """The length-two chain value ((d-1)/d)^2, a lower bound on gamma(d)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return ((d - 1) / d) ** 2


@lru_cache(maxsize=None)
def gamma_value(d: int) -> float:
    """Cached gamma(d) value for use as the quadratic smoothing shift."""
    return gamma(d).value
