import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_force_shift, sse
from spaceword.rankfreq import build_dist
from spaceword.regression import (
    FitError,
    FitFailure,
    FitResult,
    RangeError,
    fit_at_cutoffs,
    fit_shift,
    quotient_series,
    zm_quotient,
)
from spaceword.tokenizer import tokenize


def zm_series(k, R):
    return zm_quotient(np.arange(1, R + 1), k)


@pytest.mark.parametrize("freqs, r_cut, expected", [
    ((10, 5, 2), 3, (1.0, 2.0, 5.0)),
    ((7, 7, 1), 3, (1.0, 1.0, 7.0)),
    ((9, 3, 1), 2, (1.0, 3.0)),
])
def test_quotient_series(freqs, r_cut, expected):
    assert quotient_series(freqs, r_cut).tolist() == list(expected)


def test_quotient_series_from_dist():
    d = build_dist(tokenize("a a a b b c"), "word-only")
    y = quotient_series(d, 3)
    assert y[0] == 1.0
    assert np.all(np.diff(y) >= 0)


@pytest.mark.parametrize("r_cut", [0, 1, 4])
def test_quotient_series_range(r_cut):
    with pytest.raises(RangeError):
        quotient_series((10, 5, 2), r_cut)


def test_exact_zipf_gives_zero():
    # the brute-force oracle puts the minimizer at 0 for y = r
    y = np.arange(1, 101, dtype=float)
    assert abs(brute_force_shift(y)) < 1e-12
    res = fit_shift(y)
    assert res.k_hat == pytest.approx(0.0, abs=1e-12)
    assert res.sse == pytest.approx(0.0, abs=1e-18)


def test_two_point_series():
    assert brute_force_shift([1, 3]) == pytest.approx(-0.5, abs=1e-12)
    res = fit_shift([1, 3])
    assert res.k_hat == pytest.approx(-0.5, abs=1e-15)
    assert res.sse == pytest.approx(0.0, abs=1e-24)


def test_recovers_quoted_mandelbrot_shift():
    res = fit_shift(zm_series(2.75, 500))
    assert abs(res.k_hat - 2.75) < 1e-6


@pytest.mark.parametrize("y", [[1, 1, 1], [1, 1], [1, 0.5, 0.2]])
def test_unshiftable_series(y):
    with pytest.raises(FitError):
        fit_shift(y)


def test_bad_series():
    with pytest.raises(RangeError):
        fit_shift([1])
    with pytest.raises(FitError):
        fit_shift([2, 3, 4])


def test_fit_result_json():
    res = fit_shift([1, 3, 4])
    d = json.loads(res.to_json())
    assert list(d) == ["k_hat", "r_cut", "sse", "gamma"]
    assert d["gamma"] == 1.0 and d["r_cut"] == 3
    back = FitResult.from_dict(d)
    assert back == res


def test_fit_at_cutoffs_matches_single_fits():
    freqs = (10, 5, 2)
    fits = fit_at_cutoffs(freqs, [2, 3])
    for f, c in zip(fits, [2, 3]):
        single = fit_shift(quotient_series(freqs, c))
        assert f.k_hat == single.k_hat and f.sse == single.sse and f.r_cut == c


def test_fit_at_cutoffs_full_series_boundary():
    freqs = np.array([50, 20, 11, 9, 4, 3, 3, 1])
    fits = fit_at_cutoffs(freqs, [2, 5, len(freqs)])
    assert fits[-1].k_hat == fit_shift(freqs[0] / freqs).k_hat


def test_fit_at_cutoffs_failures_are_in_place():
    fits = fit_at_cutoffs((5, 5, 5, 1), [1, 2, 3, 4, 9])
    assert [f.ok for f in fits] == [False, False, False, True, False]
    assert isinstance(fits[1], FitFailure) and "no shift" in fits[1].reason


def test_fit_at_cutoffs_constant_on_synthetic():
    y = zm_series(3.3, 2000)
    ks = [f.k_hat for f in fit_at_cutoffs(1.0 / y, range(10, 2001, 37))]
    assert max(ks) - min(ks) < 1e-9


def test_bit_identical_long_sweep():
    rng = np.random.default_rng(5)
    f = np.sort(rng.pareto(1.0, 150_000) + 1)[::-1]
    cuts = [2, 10, 1000, 99_999, 150_000]
    sweep = fit_at_cutoffs(f, cuts)
    for res, c in zip(sweep, cuts):
        single = fit_shift(quotient_series(f, c))
        assert (res.k_hat, res.sse) == (single.k_hat, single.sse)


def random_series(rng):
    R = int(rng.integers(3, 300))
    k = float(np.exp(rng.uniform(np.log(0.05), np.log(200)))) - 0.9
    f = np.sort((np.arange(1, R + 1) + k) ** -1 * np.exp(rng.normal(0, 0.3, R)))[::-1]
    return f[0] / f


def test_optimality_against_perturbations():
    rng = np.random.default_rng(11)
    for _ in range(20):
        y = random_series(rng)
        res = fit_shift(y)
        deltas = rng.uniform(-0.5, 0.5, 1000)
        for d in deltas:
            k = res.k_hat + d
            if k <= -1:
                continue
            assert res.sse <= sse(y, k) * (1 + 1e-12) + 1e-300


def test_matches_brute_force_oracle():
    rng = np.random.default_rng(2)
    for _ in range(25):
        y = random_series(rng)
        assert fit_shift(y).k_hat == pytest.approx(brute_force_shift(y), rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.floats(-0.99, 100), st.integers(10, 3000))
def test_exact_recovery(k, R):
    assert fit_shift(zm_series(k, R)).k_hat == pytest.approx(k, rel=1e-6, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 10_000), min_size=3, max_size=60), st.integers(2, 1000))
def test_scale_invariance(freqs, c):
    f = np.sort(np.array(freqs, dtype=float))[::-1]
    if f[0] == f[-1]:
        return
    a = fit_shift(quotient_series(f, len(f)))
    b = fit_shift(quotient_series(f * c, len(f)))
    assert a.k_hat == pytest.approx(b.k_hat, rel=1e-12)
    assert a.k_hat > -1 and a.sse >= 0 and a.gamma == 1.0
