"""Per-text shift measurements and the corpus-level cutoff scan.

For every text we fit the shift on the word-only distribution (``k_zm``)
and on the integrated distribution (``k_s``) at a range of rank cutoffs,
and record ``n1``, the integrated rank of the most frequent word.  The scan
then correlates ``k_zm`` with ``n1 - 1`` across texts at every cutoff.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .rankfreq import DistMode, build_dist, rank_map
from .regression import FitFailure, FitResult, fit_at_cutoffs
from .tokenizer import TokenizerConfig, tokenize

__all__ = [
    "TextRecord",
    "ScanResult",
    "SkipText",
    "UndefinedCorrelationError",
    "DEFAULT_CUTOFF_COUNT",
    "analyze_text",
    "analyze_tokens",
    "log_spaced_cutoffs",
    "pearson",
    "bonferroni_significant",
    "percentile",
    "scan",
    "scan_rho_csv",
    "scatter_csv",
    "offsets_csv",
    "histogram_csv",
]

DEFAULT_CUTOFF_COUNT = 676
PERCENTILE_METHOD = "linear"


class SkipText(ValueError):
    """The text cannot contribute a record at all."""


class UndefinedCorrelationError(ValueError):
    pass


Fit = FitResult | FitFailure


@dataclass
class TextRecord:
    """Shift fits for one text at each requested cutoff.

    ``fits_zm[i]`` and ``fits_s[i]`` belong to ``cutoffs[i]``; the cutoff
    actually used is ``min(cutoffs[i], R)`` (resp. ``N``) and is stored as
    each fit's ``r_cut``.
    """

    text_id: str
    R: int
    N: int
    n1: int
    cutoffs: list[int]
    fits_zm: list[Fit]
    fits_s: list[Fit]
    notes: list[str] = field(default_factory=list)

    @property
    def partial(self) -> bool:
        return any(not f.ok for f in self.fits_zm) or any(not f.ok for f in self.fits_s)

    def offset(self, i: int) -> float | None:
        f = self.fits_zm[i]
        return f.k_hat - (self.n1 - 1) if f.ok else None

    def to_dict(self) -> dict:
        return {
            "text_id": self.text_id,
            "R": self.R,
            "N": self.N,
            "n1": self.n1,
            "cutoffs": list(self.cutoffs),
            "fits_zm": [f.to_dict() for f in self.fits_zm],
            "fits_s": [f.to_dict() for f in self.fits_s],
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TextRecord":
        def load(f):
            return FitFailure(int(f["r_cut"]), f["error"]) if "error" in f else FitResult.from_dict(f)
        return cls(
            text_id=d["text_id"], R=int(d["R"]), N=int(d["N"]), n1=int(d["n1"]),
            cutoffs=[int(c) for c in d["cutoffs"]],
            fits_zm=[load(f) for f in d["fits_zm"]],
            fits_s=[load(f) for f in d["fits_s"]],
            notes=list(d.get("notes", [])),
        )


def _effective_fits(dist, cutoffs: Sequence[int]) -> list[Fit]:
    eff = [min(int(c), len(dist)) for c in cutoffs]
    uniq = sorted(set(eff))
    by_cut = dict(zip(uniq, fit_at_cutoffs(dist, uniq)))
    return [by_cut[c] for c in eff]


def analyze_tokens(tokens, cutoffs: Sequence[int], text_id: str = "") -> TextRecord:
    cutoffs = [int(c) for c in cutoffs]
    if any(c < 2 for c in cutoffs) or any(b < a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ValueError("cutoffs must be ascending and >= 2")
    tokens = list(tokens)
    if not any(t.kind == "word" for t in tokens):
        raise SkipText(f"{text_id or 'text'}: no word tokens")
    integrated = build_dist(tokens, DistMode.Integrated)
    word_only = build_dist(tokens, DistMode.WordOnly)
    rmap = rank_map(integrated, word_only)
    rec = TextRecord(
        text_id=text_id, R=len(word_only), N=len(integrated), n1=rmap.n1, cutoffs=cutoffs,
        fits_zm=_effective_fits(word_only, cutoffs),
        fits_s=_effective_fits(integrated, cutoffs),
    )
    if rec.R < 2:
        rec.notes.append("fewer than 2 word types")
    return rec


def analyze_text(text: str, config: TokenizerConfig | None, cutoffs: Sequence[int],
                 text_id: str = "") -> TextRecord:
    """Tokenize one text and fit both shifts at every cutoff."""
    return analyze_tokens(tokenize(text, config), cutoffs, text_id)


def log_spaced_cutoffs(min: int = 2, max: int = 10_000, count: int = DEFAULT_CUTOFF_COUNT) -> list[int]:
    """``count`` geometrically spaced integers in [min, max], rounded half up and deduplicated.

    >>> log_spaced_cutoffs(10, 1000, 3)
    [10, 100, 1000]
    """
    if min < 2 or max < min:
        raise ValueError(f"need 2 <= min <= max, got min={min}, max={max}")
    if count < 2:
        raise ValueError("count must be >= 2")
    if min == max:
        return [min]
    pts = np.exp(np.linspace(math.log(min), math.log(max), count))
    vals = np.floor(pts + 0.5).astype(np.int64)
    vals[0], vals[-1] = min, max
    return sorted(set(vals.tolist()))


def pearson(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Product-moment correlation and its two-sided t-test p-value."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be 1-d and of equal length")
    n = len(x)
    if n < 3:
        raise ValueError("need at least 3 pairs")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("correlation undefined for a constant series")
    rho = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    rho = min(1.0, max(-1.0, rho))
    df = n - 2
    if abs(rho) == 1.0:
        return rho, 0.0
    t = rho * math.sqrt(df / ((1.0 - rho) * (1.0 + rho)))
    p = float(2.0 * stats.t.sf(abs(t), df))
    return rho, min(1.0, p)


def bonferroni_significant(p: float, m: int, alpha_level: float = 0.05) -> bool:
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0.0 < alpha_level < 1.0:
        raise ValueError("alpha_level must lie in (0, 1)")
    return p < alpha_level / m


def percentile(values, q):
    """Linear interpolation between order statistics."""
    return np.percentile(np.asarray(values, dtype=float), q, method=PERCENTILE_METHOD)


@dataclass
class ScanResult:
    cutoffs: list[int]
    n_texts: np.ndarray
    rho: np.ndarray  # nan where excluded
    p_values: np.ndarray
    significant: np.ndarray  # Bonferroni over the cutoffs actually tested
    offset_median: np.ndarray
    offset_p45: np.ndarray
    offset_p55: np.ndarray
    ks_median: np.ndarray
    ks_q1: np.ndarray
    ks_q3: np.ndarray
    exclusions: dict[int, str]
    rho_max: float | None
    r_cut_star: int | None
    alpha_level: float = 0.05
    percentile_method: str = PERCENTILE_METHOD

    @property
    def n_tests(self) -> int:
        return int(np.isfinite(self.rho).sum())

    def index_of(self, cutoff: int) -> int:
        return self.cutoffs.index(cutoff)

    def to_dict(self) -> dict:
        def clean(a):
            return [None if not np.isfinite(v) else float(v) for v in np.asarray(a, dtype=float)]
        return {
            "cutoffs": list(self.cutoffs),
            "n_texts": [int(v) for v in self.n_texts],
            "rho": clean(self.rho),
            "p_values": clean(self.p_values),
            "significant": [bool(v) for v in self.significant],
            "offset_median": clean(self.offset_median),
            "offset_p45": clean(self.offset_p45),
            "offset_p55": clean(self.offset_p55),
            "ks_median": clean(self.ks_median),
            "ks_q1": clean(self.ks_q1),
            "ks_q3": clean(self.ks_q3),
            "exclusions": {str(k): v for k, v in sorted(self.exclusions.items())},
            "rho_max": self.rho_max,
            "r_cut_star": self.r_cut_star,
            "alpha_level": self.alpha_level,
            "percentile_method": self.percentile_method,
        }


def _column(records, i, attr):
    vals = []
    for rec in records:
        f = getattr(rec, attr)[i]
        vals.append(f.k_hat if f.ok else np.nan)
    return np.array(vals, dtype=float)


def scan(records: Sequence[TextRecord], cutoffs: Sequence[int] | None = None,
         alpha_level: float = 0.05) -> ScanResult:
    """Correlate ``k_zm`` with ``n1 - 1`` across texts at every cutoff."""
    records = sorted(records, key=lambda r: r.text_id)
    if cutoffs is None:
        cutoffs = records[0].cutoffs if records else []
    cutoffs = [int(c) for c in cutoffs]
    for rec in records:
        if rec.cutoffs != cutoffs:
            raise ValueError(f"record {rec.text_id!r} was fitted at different cutoffs")
    m = len(cutoffs)
    nan = lambda: np.full(m, np.nan)  # noqa: E731
    rho, pv = nan(), nan()
    om, o45, o55, ksm, ks1, ks3 = nan(), nan(), nan(), nan(), nan(), nan()
    n_texts = np.zeros(m, dtype=np.int64)
    exclusions: dict[int, str] = {}
    shifts = np.array([rec.n1 - 1 for rec in records], dtype=float)
    for i, c in enumerate(cutoffs):
        kzm = _column(records, i, "fits_zm")
        ks = _column(records, i, "fits_s")
        ok = np.isfinite(kzm)
        n_texts[i] = int(ok.sum())
        if ok.any():
            off = kzm[ok] - shifts[ok]
            om[i], o45[i], o55[i] = percentile(off, [50, 45, 55])
        if np.isfinite(ks).any():
            ksm[i], ks1[i], ks3[i] = percentile(ks[np.isfinite(ks)], [50, 25, 75])
        if n_texts[i] < 3:
            exclusions[c] = f"only {n_texts[i]} texts with a valid word-only fit"
            continue
        try:
            rho[i], pv[i] = pearson(kzm[ok], shifts[ok])
        except UndefinedCorrelationError as exc:
            exclusions[c] = str(exc)
    tested = np.isfinite(rho)
    n_tests = max(int(tested.sum()), 1)
    significant = np.array([bool(t) and bonferroni_significant(p, n_tests, alpha_level)
                            for t, p in zip(tested, pv)], dtype=bool)
    if tested.any():
        i_star = int(np.nanargmax(rho))
        rho_max, r_star = float(rho[i_star]), cutoffs[i_star]
    else:
        rho_max = r_star = None
    return ScanResult(cutoffs, n_texts, rho, pv, significant, om, o45, o55, ksm, ks1, ks3,
                      exclusions, rho_max, r_star, alpha_level)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt(v) -> str:
    return "" if v is None or (isinstance(v, float) and not math.isfinite(v)) else repr(float(v))


def scan_rho_csv(res: ScanResult) -> str:
    """Top-left panel: correlation against cutoff."""
    return _csv(["cutoff", "rho", "p", "n_texts", "significant"],
                [[c, _fmt(r), _fmt(p), int(n), int(s)] for c, r, p, n, s in
                 zip(res.cutoffs, res.rho, res.p_values, res.n_texts, res.significant)])


def scatter_csv(records: Sequence[TextRecord], cutoff_index: int, bins: int = 20) -> str:
    """Top-right panel: per-text ``k_zm`` against ``n1 - 1`` with 2-D bin counts."""
    pts = []
    for rec in sorted(records, key=lambda r: r.text_id):
        f = rec.fits_zm[cutoff_index]
        if f.ok:
            pts.append((rec.text_id, f.k_hat, rec.n1 - 1))
    if not pts:
        return _csv(["text_id", "k_zm", "n1_minus_1", "density_bin"], [])
    k = np.array([p[1] for p in pts])
    s = np.array([p[2] for p in pts], dtype=float)
    H, xe, ye = np.histogram2d(k, s, bins=bins)
    xi = np.clip(np.searchsorted(xe, k, side="right") - 1, 0, bins - 1)
    yi = np.clip(np.searchsorted(ye, s, side="right") - 1, 0, bins - 1)
    return _csv(["text_id", "k_zm", "n1_minus_1", "density_bin"],
                [[t, _fmt(a), int(b), int(H[i, j])] for (t, a, b), i, j in zip(pts, xi, yi)])


def offsets_csv(res: ScanResult) -> str:
    """Bottom-left panel: offset median and middle decile, k_s median and IQR."""
    return _csv(["cutoff", "offset_median", "offset_p45", "offset_p55", "ks_median", "ks_q1", "ks_q3"],
                [[c] + [_fmt(v) for v in row] for c, *row in
                 zip(res.cutoffs, res.offset_median, res.offset_p45, res.offset_p55,
                     res.ks_median, res.ks_q1, res.ks_q3)])


def histogram_csv(records: Sequence[TextRecord], cutoff_index: int, bins: int = 50) -> str:
    """Bottom-right panel: shared-bin histograms of offsets and ``k_s``.

    The mean offset is repeated on every row so one file carries the panel.
    """
    off = np.array([o for rec in records if (o := rec.offset(cutoff_index)) is not None])
    ks = np.array([f.k_hat for rec in records if (f := rec.fits_s[cutoff_index]).ok])
    both = np.concatenate([off, ks]) if len(off) + len(ks) else np.array([0.0])
    edges = np.histogram_bin_edges(both, bins=bins)
    h_off, _ = np.histogram(off, bins=edges)
    h_ks, _ = np.histogram(ks, bins=edges)
    mean_off = float(off.mean()) if len(off) else float("nan")
    return _csv(["bin_left", "bin_right", "offset_count", "ks_count", "offset_mean"],
                [[_fmt(a), _fmt(b), int(x), int(y), _fmt(mean_off)]
                 for a, b, x, y in zip(edges[:-1], edges[1:], h_off, h_ks)])
