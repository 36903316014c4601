"""Odds, factors, and deciban arithmetic.

Posterior odds = prior odds x likelihood factor; independent factors
multiply, so their decibanages (10*log10 of the factor) add.  Score
tables elsewhere in the package use integer half decibans
(20*log10 of the factor, rounded).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

Number = Union[int, float, Fraction]


def round_half_away(x: float) -> int:
    """Round to nearest integer, ties away from zero."""
    return math.floor(x + 0.5) if x >= 0 else math.ceil(x - 0.5)


@dataclass(frozen=True)
class Odds:
    """Odds of an event: p/(1-p).  Exact when built from rationals."""

    ratio: Number

    def __post_init__(self):
        if self.ratio < 0:
            raise ValueError(f"odds ratio must be >= 0, got {self.ratio}")

    @property
    def probability(self) -> Number:
        return self.ratio / (1 + self.ratio)

    @property
    def against(self) -> Number:
        """Reciprocal ratio, for reading 'n:1 against'."""
        if self.ratio == 0:
            raise ZeroDivisionError("impossible event has no odds-against ratio")
        return 1 / self.ratio

    def __float__(self) -> float:
        return float(self.ratio)

    def __str__(self) -> str:
        if isinstance(self.ratio, Rational) and not isinstance(self.ratio, int):
            return f"{self.ratio.numerator}:{self.ratio.denominator}"
        return f"{self.ratio}:1"


def odds_from_probability(p: Number) -> Odds:
    """Odds p/(1-p).  Rejects p >= 1: certain events have no finite odds."""
    if not 0 <= p < 1:
        raise ValueError(f"probability must be in [0, 1), got {p}")
    return Odds(p / (1 - p))


def apply_factor(prior: Odds, factor: Number) -> Odds:
    """Posterior odds = prior odds x factor (the factor principle)."""
    if factor < 0:
        raise ValueError(f"factor must be >= 0, got {factor}")
    return Odds(prior.ratio * factor)


def combine_independent(factors: Iterable[Number], prior: Odds) -> Odds:
    """Apply independent evidence factors by multiplication."""
    posterior = prior
    for f in factors:
        posterior = apply_factor(posterior, f)
    return posterior


def decibans_from_factor(f: Number) -> float:
    """10*log10(f): evidence in decibans."""
    if f <= 0:
        raise ValueError(f"factor must be > 0, got {f}")
    return 10 * math.log10(f)


def factor_from_decibans(db: float) -> float:
    return 10 ** (db / 10)


def half_decibans_from_factor(f: Number) -> int:
    """20*log10(f) rounded to the nearest integer (ties away from zero)."""
    if f <= 0:
        raise ValueError(f"factor must be > 0, got {f}")
    return round_half_away(20 * math.log10(f))


def factor_from_half_decibans(hd: float) -> float:
    return 10 ** (hd / 20)


def parse_odds(text: str) -> Odds:
    """Parse 'A:B' (A to B on) or a plain number into Odds."""
    s = text.strip()
    if ":" in s:
        num, _, den = s.partition(":")
        return Odds(Fraction(int(num), int(den)))
    return Odds(Fraction(s))
