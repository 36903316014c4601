"""Bayesian scoring toolkit for classical ciphers.

Evidence is accumulated in (half-)decibans via the factor principle:
posterior odds = prior odds x likelihood factor, with independent
factors multiplying and their logarithms adding.  The scorers cover
Vigenere key recovery, letter-subtractor crib evaluation, depth
detection from repetition figures, and columnar-transposition column
matching, all driven by corpus statistics.
"""

from .bayes import (
    Odds,
    apply_factor,
    combine_independent,
    decibans_from_factor,
    factor_from_decibans,
    factor_from_half_decibans,
    half_decibans_from_factor,
    odds_from_probability,
    parse_odds,
)
from .corpus import (
    ALPHABET,
    ENGLISH_LETTERS,
    ENGLISH_LETTER_COUNTS,
    BigramStats,
    LetterDistribution,
    RgramCounts,
    StatsBundle,
    load_stats,
    normalize,
    rgram_counts,
    stats_from_text,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHABET",
    "BigramStats",
    "ENGLISH_LETTERS",
    "ENGLISH_LETTER_COUNTS",
    "LetterDistribution",
    "Odds",
    "RgramCounts",
    "StatsBundle",
    "apply_factor",
    "combine_independent",
    "decibans_from_factor",
    "factor_from_decibans",
    "factor_from_half_decibans",
    "half_decibans_from_factor",
    "load_stats",
    "normalize",
    "odds_from_probability",
    "parse_odds",
    "rgram_counts",
    "stats_from_text",
]
