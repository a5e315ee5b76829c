"""Simon's preferential-selection model of text generation.

Each step either innovates a new word (probability ``alpha``) or repeats a
word drawn in proportion to its current count (probability
``theta = 1 - alpha``).  The first step always innovates.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betaln

__all__ = [
    "SimonConfig",
    "SimonRun",
    "ComparisonReport",
    "simulate",
    "expected_innovation_step",
    "analytic_freq_exact",
    "analytic_freq_power",
    "analytic_freq_refined",
    "first_mover_ratio",
    "run_vs_analytic",
]

RNG_NAME = "numpy.random.PCG64"


def _check_theta(theta: float) -> None:
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta must lie in (0, 1), got {theta!r}")


@dataclass(frozen=True)
class SimonConfig:
    alpha: float
    steps: int
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if int(self.steps) < 1:
            raise ValueError("steps must be >= 1")

    @property
    def theta(self) -> float:
        return 1.0 - self.alpha


@dataclass(frozen=True)
class SimonRun:
    """Word ``j`` (1-based innovation order) is ``freqs[j-1]``, born at step ``M[j-1]``."""

    freqs: np.ndarray
    M: np.ndarray
    steps: int
    config: SimonConfig | None = None
    rng: str = RNG_NAME

    @property
    def N(self) -> int:
        return len(self.freqs)

    @property
    def gaps(self) -> np.ndarray:
        return np.diff(self.M)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "M_j", "freq"])
        for j, (m, f) in enumerate(zip(self.M.tolist(), self.freqs.tolist()), 1):
            w.writerow([j, m, f])
        return buf.getvalue()


def simulate(config: SimonConfig) -> SimonRun:
    """Run the model for ``config.steps`` tokens.

    Repetition copies the token at a uniformly chosen earlier position,
    which selects each word with probability proportional to its count.
    All random draws are made up front; the copy chains are then resolved
    by pointer jumping, giving the same stream a sequential loop would.
    """
    n = int(config.steps)
    rng = np.random.Generator(np.random.PCG64(config.seed))
    innovate = rng.random(n) < config.alpha
    innovate[0] = True
    pos = np.arange(n, dtype=np.int64)
    source = np.floor(rng.random(n) * pos).astype(np.int64)
    parent = np.where(innovate, pos, source)
    while True:
        nxt = parent[parent]
        if np.array_equal(nxt, parent):
            break
        parent = nxt
    word_of_pos = np.cumsum(innovate) - 1
    labels = word_of_pos[parent]
    freqs = np.bincount(labels)
    M = np.flatnonzero(innovate) + 1
    return SimonRun(freqs=freqs, M=M, steps=n, config=config)


def expected_innovation_step(j: int, alpha: float) -> float:
    """Mean step of the j-th innovation, ``(j - theta) / alpha``."""
    if j < 1:
        raise ValueError("j must be >= 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    return (j - (1.0 - alpha)) / alpha


def analytic_freq_exact(M_j, M_N, theta: float):
    """Beta-function ratio ``B(M_j, theta) / B(M_N, theta)``, in log space."""
    _check_theta(theta)
    M_j = np.asarray(M_j, dtype=float)
    M_N = np.asarray(M_N, dtype=float)
    if np.any(M_j < 1) or np.any(M_j > M_N):
        raise ValueError("need 1 <= M_j <= M_N")
    out = np.exp(betaln(M_j, theta) - betaln(M_N, theta))
    return float(out) if out.ndim == 0 else out


def analytic_freq_power(M_j, M_N, theta: float):
    """Large-M approximation ``(M_j / M_N) ** -theta`` of the Beta ratio."""
    _check_theta(theta)
    out = (np.asarray(M_j, dtype=float) / np.asarray(M_N, dtype=float)) ** -theta
    return float(out) if np.ndim(out) == 0 else out


def analytic_freq_refined(j, N, theta: float):
    """``((j - theta) / (N - theta)) ** -theta``, relative to the last word."""
    _check_theta(theta)
    j = np.asarray(j, dtype=float)
    if np.any(j < 1) or np.any(j > N):
        raise ValueError("need 1 <= j <= N")
    out = ((j - theta) / (N - theta)) ** -theta
    return float(out) if out.ndim == 0 else out


def first_mover_ratio(theta: float) -> float:
    """Predicted f(w_1)/f(w_2) from the refined law."""
    _check_theta(theta)
    return ((1.0 - theta) / (2.0 - theta)) ** -theta


@dataclass
class ComparisonReport:
    theta: float
    N: int
    ranks: np.ndarray
    observed: np.ndarray  # rank-ordered counts over the last-innovated word's count
    predicted: np.ndarray
    log_rel_error: np.ndarray  # |log obs - log pred| / |log pred|, nan where log pred == 0
    first_mover_ratio: float | None
    predicted_first_mover_ratio: float | None
    extra: dict = field(default_factory=dict)

    def mean_log_rel_error(self, lo: int = 2, hi: int = 100) -> float:
        sel = (self.ranks >= lo) & (self.ranks <= hi)
        vals = self.log_rel_error[sel]
        vals = vals[np.isfinite(vals)]
        return float(vals.mean()) if len(vals) else float("nan")

    def to_dict(self, lo: int = 2, hi: int = 100) -> dict:
        return {
            "theta": self.theta,
            "N": self.N,
            "first_mover_ratio": self.first_mover_ratio,
            "predicted_first_mover_ratio": self.predicted_first_mover_ratio,
            "mean_log_rel_error": {"ranks": [lo, hi], "value": self.mean_log_rel_error(lo, hi)},
            "per_rank": [
                {"rank": int(r), "observed": float(o), "predicted": float(p),
                 "log_rel_error": None if not np.isfinite(e) else float(e)}
                for r, o, p, e in zip(self.ranks, self.observed, self.predicted, self.log_rel_error)
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(**kw), indent=2)


def run_vs_analytic(run: SimonRun, theta: float) -> ComparisonReport:
    """Compare a run's rank-frequency curve to the refined analytic law.

    Observed counts are ranked descending and divided by the count of the
    last-innovated word, matching the analytic normalization where the
    N-th word has frequency 1.
    """
    _check_theta(theta)
    N = run.N
    ranks = np.arange(1, N + 1)
    observed = np.sort(run.freqs)[::-1] / run.freqs[-1]
    predicted = ((ranks - theta) / (N - theta)) ** -theta
    log_pred = np.log(predicted)
    with np.errstate(divide="ignore", invalid="ignore"):
        err = np.abs(np.log(observed) - log_pred) / np.abs(log_pred)
    err[log_pred == 0] = np.nan
    if N >= 2:
        fm = float(observed[0] / observed[1])
        fm_pred = first_mover_ratio(theta)
    else:
        fm = fm_pred = None
    return ComparisonReport(theta, N, ranks, observed, predicted, err, fm, fm_pred)
