"""Fixed-exponent Zipf-Mandelbrot shift regression in the rank domain.

With the exponent pinned to 1, the model quotient ``f(w_1)/f(w_r)`` is
``(r + k) / (1 + k)``.  Writing ``b = 1 / (1 + k)`` this is the line
``1 + (r - 1) b``, so least squares gives

    b = sum (r-1)(y_r - 1) / sum (r-1)^2,        k = 1/b - 1.

The map k -> b is a monotone bijection of (-1, inf) onto (0, inf), hence
this k is the exact SSE minimizer whenever the numerator is positive.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .rankfreq import RankFreqDist

__all__ = [
    "GAMMA",
    "FitResult",
    "FitFailure",
    "FitError",
    "RangeError",
    "quotient_series",
    "fit_shift",
    "fit_at_cutoffs",
    "zm_quotient",
    "sse_at",
]

GAMMA = 1.0


class RangeError(ValueError):
    pass


class FitError(ValueError):
    """The quotient series admits no shift k > -1 (flat or decreasing)."""


@dataclass(frozen=True)
class FitResult:
    k_hat: float
    r_cut: int
    sse: float
    y: np.ndarray | None = field(default=None, repr=False, compare=False)
    gamma: float = GAMMA

    ok = True

    def to_dict(self) -> dict:
        return {"k_hat": self.k_hat, "r_cut": self.r_cut, "sse": self.sse, "gamma": self.gamma}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "FitResult":
        if float(d.get("gamma", GAMMA)) != GAMMA:
            raise ValueError("gamma is fixed at 1")
        return cls(float(d["k_hat"]), int(d["r_cut"]), float(d["sse"]))


@dataclass(frozen=True)
class FitFailure:
    r_cut: int
    reason: str

    ok = False

    def to_dict(self) -> dict:
        return {"r_cut": self.r_cut, "error": self.reason}


def quotient_series(dist: RankFreqDist | Sequence[float], r_cut: int) -> np.ndarray:
    """``f(w_1) / f(w_r)`` for ranks 1..r_cut."""
    freqs = dist.freqs if isinstance(dist, RankFreqDist) else np.asarray(dist, dtype=float)
    if r_cut < 2:
        raise RangeError(f"r_cut={r_cut}: need at least 2 ranks to fit a shift")
    if r_cut > len(freqs):
        raise RangeError(f"r_cut={r_cut} exceeds the {len(freqs)} available ranks")
    head = np.asarray(freqs[:r_cut], dtype=float)
    return head[0] / head


def zm_quotient(r, k: float) -> np.ndarray:
    """Model quotient ``(r + k) / (1 + k)``."""
    r = np.asarray(r, dtype=float)
    return (r + k) / (1.0 + k)


def sse_at(y: Sequence[float], k: float) -> float:
    y = np.asarray(y, dtype=float)
    resid = y - zm_quotient(np.arange(1, len(y) + 1), k)
    return float(np.dot(resid, resid))


def _sum_sq_offsets(R: int) -> float:
    # sum_{r=1..R} (r-1)^2, exact in integers before the single rounding
    return float((R - 1) * R * (2 * R - 1) // 6)


def _prefix_numerators(y: np.ndarray) -> np.ndarray:
    """Running sums of (r-1)(y_r - 1), Neumaier-compensated, in rank order."""
    terms = (np.arange(len(y), dtype=float) * (y - 1.0)).tolist()
    out = np.empty(len(terms))
    s = c = 0.0
    for i, t in enumerate(terms):
        u = s + t
        if abs(s) >= abs(t):
            c += (s - u) + t
        else:
            c += (t - u) + s
        s = u
        out[i] = s + c
    return out


def _validate(y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or len(y) < 2:
        raise RangeError("need a quotient series of length >= 2")
    if not np.all(np.isfinite(y)):
        raise FitError("quotient series has non-finite values")
    if not np.isclose(y[0], 1.0, rtol=0, atol=1e-12):
        raise FitError(f"quotient series must start at 1, got {y[0]!r}")
    return y


def _solve(y: np.ndarray, num: float) -> FitResult:
    R = len(y)
    if not num > 0:
        raise FitError(f"sum (r-1)(y-1) = {num!r} <= 0 at r_cut={R}: series admits no shift")
    k = float(_sum_sq_offsets(R) / float(num) - 1.0)
    return FitResult(k_hat=k, r_cut=R, sse=sse_at(y, k), y=y)


def fit_shift(y: Sequence[float]) -> FitResult:
    """Least-squares shift of a quotient series.

    >>> fit_shift([1, 3]).k_hat
    -0.5
    >>> fit_shift(range(1, 11)).k_hat
    0.0
    """
    y = _validate(y)
    return _solve(y, _prefix_numerators(y)[-1])


def fit_at_cutoffs(dist: RankFreqDist | Sequence[float], cutoffs: Sequence[int]
                   ) -> list[FitResult | FitFailure]:
    """Fit once per cutoff, sharing running sums across the sweep.

    Failures are returned in place as :class:`FitFailure`; the sweep never
    aborts.  Each result is bit-identical to ``fit_shift`` on the truncated
    series.
    """
    cutoffs = [int(c) for c in cutoffs]
    if any(b < a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ValueError("cutoffs must be sorted ascending")
    freqs = dist.freqs if isinstance(dist, RankFreqDist) else np.asarray(dist, dtype=float)
    out: list[FitResult | FitFailure] = []
    valid = [c for c in cutoffs if 2 <= c <= len(freqs)]
    if valid:
        y_all = quotient_series(freqs, max(valid))
        nums = _prefix_numerators(y_all)
    for c in cutoffs:
        if c < 2 or c > len(freqs):
            out.append(FitFailure(c, f"r_cut={c} outside [2, {len(freqs)}]"))
            continue
        try:
            out.append(_solve(y_all[:c], nums[c - 1]))
        except FitError as exc:
            out.append(FitFailure(c, str(exc)))
    return out
