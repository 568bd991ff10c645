"""Follow-the-regularized-leader over the simplex and a fair-coin experts
game, with the matching worst-case regret bound sqrt(2 Range(h) T)."""

from dataclasses import dataclass, field
import csv
import math

import numpy as np

from .core import project_simplex_rows
from .smoothings import c_constant, _lse_rows

ENTROPY = "entropy"
SCALED_QUADRATIC = "scaled-quadratic"


@dataclass(frozen=True)
class Regularizer:
    """Strongly convex regularizer on the simplex with its range."""

    kind: str
    d: int
    c: float = None

    def __post_init__(self):
        if self.kind not in (ENTROPY, SCALED_QUADRATIC):
            raise ValueError(f"unknown regularizer kind {self.kind!r}")
        if self.d < 2:
            raise ValueError("regularizer needs d >= 2")
        if self.kind == SCALED_QUADRATIC:
            if self.c is None:
                object.__setattr__(self, "c", c_constant(self.d))
            elif self.c <= 0:
                raise ValueError("quadratic weight c must be positive")
        elif self.c is not None:
            raise ValueError("c applies only to the scaled quadratic")

    @classmethod
    def entropy(cls, d):
        return cls(ENTROPY, d)

    @classmethod
    def scaled_quadratic(cls, d, c=None):
        return cls(SCALED_QUADRATIC, d, c)

    @property
    def range(self) -> float:
        """max - min of the regularizer over the simplex."""
        if self.kind == ENTROPY:
            return math.log(self.d)
        return 0.5 * self.c * (1.0 - 1.0 / self.d)


def ftrl_weights(reg: Regularizer, cumulative_losses, eta: float) -> np.ndarray:
    """Regularized leader: argmin <w, L> + h(w)/eta over the simplex.

    Entropy gives the softmax of -eta L (the log-sum-exp gradient); the
    scaled quadratic gives the simplex projection of -eta L / c.
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    L = np.asarray(cumulative_losses, dtype=np.float64)
    return _weights_rows(reg, eta, L[None, :])[0]


def _weights_rows(reg, eta, L):
    if reg.kind == ENTROPY:
        return _lse_rows(-eta * L, centered=False)[1]
    return project_simplex_rows(-eta * L / reg.c)


def tuned_eta(reg: Regularizer, T: int) -> float:
    """The bound-optimizing learning rate sqrt(2 Range / T)."""
    if T < 1:
        raise ValueError("horizon must be >= 1")
    return math.sqrt(2.0 * reg.range / T)


def regret_bound(reg: Regularizer, T: int) -> float:
    """Worst-case regret sqrt(2 Range(h) T) of the tuned leader."""
    if T < 1:
        raise ValueError("horizon must be >= 1")
    return math.sqrt(2.0 * reg.range * T)


@dataclass
class RegretTrace:
    """Full record of one experts game."""

    d: int
    T: int
    seed: int
    eta: float
    bound: float
    losses: np.ndarray = field(repr=False)       # (T, d) 0/1 mistakes
    weights: np.ndarray = field(repr=False)      # (T, d) plays
    learner_cum: np.ndarray = field(repr=False)  # (T,)
    best_cum: np.ndarray = field(repr=False)     # (T,) prefix best expert

    @property
    def regret(self) -> np.ndarray:
        return self.learner_cum - self.best_cum

    @property
    def final_regret(self) -> float:
        return float(self.regret[-1])

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["round", "learner_loss", "best_expert_loss", "regret"])
            for t in range(self.T):
                w.writerow([t + 1, f"{self.learner_cum[t]:.17g}",
                            f"{self.best_cum[t]:.17g}",
                            f"{self.regret[t]:.17g}"])


def run_coinflip_game(d: int, T: int, seed: int, reg: Regularizer = None,
                      eta: float = None) -> RegretTrace:
    """Experts game on i.i.d. fair coin flips.

    Each round every expert predicts an independent fair bit and the
    outcome is another fair bit; an expert's loss is 1 on a mistake.  The
    learner plays the regularized leader of the cumulative losses and
    suffers the weighted loss.  Deterministic given the seed: the (T, d)
    prediction block is drawn first, then the T outcomes.
    """
    if d < 2 or T < 1:
        raise ValueError("need d >= 2 and T >= 1")
    reg = Regularizer.entropy(d) if reg is None else reg
    if eta is None:
        eta = tuned_eta(reg, T)
    elif eta <= 0:
        raise ValueError("eta must be positive")
    rng = np.random.default_rng(seed)
    preds = rng.integers(0, 2, size=(T, d))
    outcomes = rng.integers(0, 2, size=(T, 1))
    losses = (preds != outcomes).astype(np.float64)
    # the loss stream ignores the learner, so the whole game vectorizes
    prefix = np.vstack([np.zeros((1, d)), np.cumsum(losses, axis=0)])
    weights = _weights_rows(reg, eta, prefix[:-1])
    learner_cum = np.cumsum((weights * losses).sum(axis=1))
    best_cum = prefix[1:].min(axis=1)
    return RegretTrace(d=d, T=T, seed=seed, eta=eta,
                       bound=regret_bound(reg, T), losses=losses,
                       weights=weights, learner_cum=learner_cum,
                       best_cum=best_cum)
