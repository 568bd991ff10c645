"""Smooth uniform approximations of the coordinate-wise max.

Two families: log-sum-exp (raw and centered) and quadratically regularized
dual constructions.  Each kind carries its exact worst-case deviation
formulas; gradients always land in the probability simplex.
"""

from dataclasses import dataclass
import math

import numpy as np

from .bounds import gamma_value
from .core import as_point, project_simplex_rows

LSE = "lse"
CENTERED_LSE = "clse"
QUADRATIC = "quad"
QUADRATIC_CUSTOM = "quadc"

_VARIANTS = (LSE, CENTERED_LSE, QUADRATIC, QUADRATIC_CUSTOM)


def c_constant(d: int) -> float:
    """Largest ||w||_1^2 / ||w||_2^2 over zero-sum w in R^d.

    Equals d for even d and d - 1/d for odd d; the smallest weight making
    (c/2)||.||_2^2 1-strongly convex in the one-norm on the simplex.
    """
    if d < 2:
        raise ValueError("c_constant requires d >= 2")
    return float(d) if d % 2 == 0 else d - 1.0 / d


@dataclass(frozen=True)
class Evaluation:
    """Function value and its simplex-valued gradient at one point."""

    value: float
    gradient: np.ndarray


@dataclass(frozen=True)
class SmoothingKind:
    """A smoothing family member: variant tag, dimension, custom weight."""

    variant: str
    d: int
    c: float = None

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ValueError(f"unknown smoothing variant {self.variant!r}")
        if self.d < 1:
            raise ValueError("dimension must be >= 1")
        if self.variant == QUADRATIC_CUSTOM:
            if self.c is None or self.c <= 0:
                raise ValueError("custom quadratic smoothing needs c > 0")
        elif self.c is not None:
            raise ValueError("c is only a parameter of the custom quadratic")

    @classmethod
    def lse(cls, d):
        return cls(LSE, d)

    @classmethod
    def centered_lse(cls, d):
        return cls(CENTERED_LSE, d)

    @classmethod
    def quadratic(cls, d):
        return cls(QUADRATIC, d)

    @classmethod
    def quadratic_custom(cls, d, c):
        return cls(QUADRATIC_CUSTOM, d, float(c))

    @property
    def is_quadratic(self) -> bool:
        return self.variant in (QUADRATIC, QUADRATIC_CUSTOM)

    @property
    def regularizer_weight(self) -> float:
        """Quadratic weight c; the degenerate d=1 simplex accepts any c."""
        if self.variant == QUADRATIC_CUSTOM:
            return self.c
        if self.variant == QUADRATIC:
            return 1.0 if self.d == 1 else c_constant(self.d)
        raise ValueError(f"{self.variant} has no quadratic weight")

    @property
    def shift(self) -> float:
        """Constant subtracted from the dual supremum."""
        if self.variant == QUADRATIC:
            return gamma_value(self.d)
        return 0.0

    def label(self) -> str:
        if self.variant == QUADRATIC_CUSTOM:
            return f"quadc[c={self.c:g}](d={self.d})"
        return f"{self.variant}(d={self.d})"

    @property
    def certified_smooth(self) -> bool:
        """Whether 1-smoothness in the infinity norm is guaranteed.

        A custom quadratic with c below the threshold constant can still be
        evaluated but carries no smoothness certificate.
        """
        if self.variant != QUADRATIC_CUSTOM:
            return True
        return self.d == 1 or self.c >= c_constant(self.d)


def lse_value_grad(x, centered: bool = False) -> Evaluation:
    """Log-sum-exp value and softmax gradient, max-subtracted for stability.

    The centered variant subtracts ln(d)/2, splitting the overestimation
    evenly around the max.
    """
    v = as_point(x)
    vals, grads = _lse_rows(v[None, :], centered)
    return Evaluation(value=float(vals[0]), gradient=grads[0])


def quad_value_grad(x, kind: SmoothingKind) -> Evaluation:
    """Quadratically regularized dual smoothing via simplex projection."""
    if not kind.is_quadratic:
        raise ValueError("quad_value_grad requires a quadratic kind")
    v = as_point(x)
    if v.size != kind.d:
        raise ValueError(f"point has d={v.size}, kind expects d={kind.d}")
    vals, grads = _quad_rows(v[None, :], kind.regularizer_weight, kind.shift)
    return Evaluation(value=float(vals[0]), gradient=grads[0])


def value_grad(kind: SmoothingKind, x) -> Evaluation:
    """Evaluate any smoothing kind at a single point."""
    if kind.is_quadratic:
        return quad_value_grad(x, kind)
    return lse_value_grad(x, centered=kind.variant == CENTERED_LSE)


def value_grad_many(kind: SmoothingKind, X):
    """Batched evaluation over the rows of an (n, d) array.

    Returns (values, gradients) of shapes (n,) and (n, d).
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != kind.d:
        raise ValueError(f"expected (n, {kind.d}) array, got {X.shape}")
    if kind.is_quadratic:
        return _quad_rows(X, kind.regularizer_weight, kind.shift)
    return _lse_rows(X, kind.variant == CENTERED_LSE)


def _lse_rows(X, centered):
    m = X.max(axis=1)
    e = np.exp(X - m[:, None])
    s = e.sum(axis=1)
    vals = m + np.log(s)
    if centered:
        vals = vals - 0.5 * math.log(X.shape[1])
    return vals, e / s[:, None]


def _quad_rows(X, c, shift):
    # max-subtraction: the projection and the translation rule are exact
    # under constant shifts, and working at max-anchored scale stops
    # large near-symmetric inputs from amplifying rounding error
    m = X.max(axis=1)
    Z = X - m[:, None]
    lam = project_simplex_rows(Z / c)
    vals = m + (lam * Z).sum(axis=1) \
        - 0.5 * c * ((lam * lam).sum(axis=1) - 1.0)
    if shift:
        vals = vals - shift
    return vals, lam


def gap_bound(kind: SmoothingKind) -> float:
    """Theoretical uniform deviation bound from the max function.

    ln(d) for lse, ln(d)/2 for clse, and the half-range (c/4)(1 - 1/d) for
    quad, where the partition-bound shift centers the dual range exactly at
    d in {2, 3}.  Beyond d = 3 the quad shift no longer centers the range
    and the half-range is reported anyway; see deviation_interval for the
    attained extremes.  The custom quadratic is an overestimator with full
    range (c/2)(1 - 1/d).
    """
    d = kind.d
    if kind.variant == LSE:
        return math.log(d)
    if kind.variant == CENTERED_LSE:
        return 0.5 * math.log(d)
    half = 0.25 * kind.regularizer_weight * (1.0 - 1.0 / d)
    if kind.variant == QUADRATIC:
        return half
    return 2.0 * half


def deviation_interval(kind: SmoothingKind):
    """Exact range [lo, hi] of f - sigma_max over all of R^d."""
    d = kind.d
    if kind.variant == LSE:
        return 0.0, math.log(d)
    if kind.variant == CENTERED_LSE:
        return -0.5 * math.log(d), 0.5 * math.log(d)
    full = 0.5 * kind.regularizer_weight * (1.0 - 1.0 / d)
    if kind.variant == QUADRATIC:
        return -kind.shift, full - kind.shift
    return 0.0, full


def max_deviation(kind: SmoothingKind) -> float:
    """Exact worst-case |f - sigma_max|; may exceed gap_bound for quad d>=4."""
    lo, hi = deviation_interval(kind)
    return max(abs(lo), abs(hi))


def center_offset(kind: SmoothingKind) -> float:
    """Midpoint of the deviation interval; subtracting it symmetrizes f."""
    lo, hi = deviation_interval(kind)
    return 0.5 * (lo + hi)
