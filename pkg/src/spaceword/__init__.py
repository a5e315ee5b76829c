"""Rank-frequency analysis with delimiters counted as tokens."""
from .corpus import CorpusManifest, load_manifest, load_records, run_corpus, strip_boilerplate
from .experiment import (
    ScanResult,
    TextRecord,
    analyze_text,
    bonferroni_significant,
    log_spaced_cutoffs,
    pearson,
    scan,
)
from .rankfreq import DistMode, RankFreqDist, RankMap, build_dist, rank_map
from .regression import FitFailure, FitResult, fit_at_cutoffs, fit_shift, quotient_series, zm_quotient
from .simon import (
    SimonConfig,
    SimonRun,
    analytic_freq_exact,
    analytic_freq_refined,
    expected_innovation_step,
    run_vs_analytic,
    simulate,
)
from .tokenizer import Token, TokenizerConfig, TokenKind, classify_char, tokenize

__version__ = "0.1.0"
