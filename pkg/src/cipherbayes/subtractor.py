"""Slide distributions for multi-component letter subtractors, slide score
tables, and crib evaluation.

A subtractor built from k components, each sliding 0..q, produces net
slides with the coefficients of (1 + x + ... + x^q)^k; folding the
exponents mod 26 gives the slide distribution an aligned crib would
see.  Scoring a crib sums the per-slide half decibans and applies the
total to the prior odds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .bayes import Odds, apply_factor, round_half_away
from .corpus import letter_index


@dataclass(frozen=True)
class SlideDistribution:
    """Exact integer counts of each net slide value."""

    components: int
    max_slide: int
    coeffs: tuple                  # coefficient of x^s, s = 0..components*max_slide
    remainders: tuple              # 26 ints: coeffs folded mod 26

    @property
    def total(self) -> int:
        return (self.max_slide + 1) ** self.components


def slide_coefficients(components: int, max_slide: int) -> SlideDistribution:
    """Expand (1 + x + ... + x^max_slide)^components by repeated convolution."""
    if components < 1:
        raise ValueError("components must be >= 1")
    if max_slide < 0:
        raise ValueError("max_slide must be >= 0")
    coeffs = [1]
    for _ in range(components):
        out = [0] * (len(coeffs) + max_slide)
        for i, c in enumerate(coeffs):
            for j in range(max_slide + 1):
                out[i + j] += c
        coeffs = out
    remainders = [0] * 26
    for s, c in enumerate(coeffs):
        remainders[s % 26] += c
    return SlideDistribution(components, max_slide, tuple(coeffs), tuple(remainders))


@dataclass(frozen=True)
class SlideScoreTable:
    """Half decibans for each slide value 0..25."""

    scores: tuple

    def __post_init__(self):
        if len(self.scores) != 26:
            raise ValueError("need 26 slide scores")

    def score(self, slide: int) -> int:
        return self.scores[slide % 26]


def build_slide_table(dist: SlideDistribution) -> SlideScoreTable:
    """Half decibans of 26 * P(slide) for each mod-26 slide class."""
    total = dist.total
    scores = []
    for r in dist.remainders:
        if r == 0:
            scores.append(-99)
        else:
            scores.append(round_half_away(20 * math.log10(26 * r / total)))
    return SlideScoreTable(tuple(scores))


# The classic printed table for the 3-component, slides-0..9 subtractor.
# It disagrees with build_slide_table(slide_coefficients(3, 9)) by one
# half deciban at slides 5 and 22 (-6 printed vs -5.26 computed); crib
# regression fixtures score against this table.
REFERENCE_SLIDE_SCORES = SlideScoreTable((
    -20, -20, -16, -12, -8, -6, -3, -1, 1, 3, 4, 5, 6,
    6, 6, 6, 5, 4, 3, 1, -1, -3, -6, -8, -12, -16,
))


@dataclass(frozen=True)
class CribAlignment:
    """A crib laid against a cipher segment and the slides it implies."""

    cipher: str
    crib: str
    slides: tuple

    def __post_init__(self):
        if len(self.cipher) != len(self.crib):
            raise ValueError("cipher segment and crib must have equal length")


def slides_from_crib(cipher: str, crib: str) -> CribAlignment:
    """Per-position slides (cipher - crib) mod 26, crib aligned at offset 0."""
    if len(crib) > len(cipher):
        raise ValueError(f"crib ({len(crib)} letters) longer than cipher "
                         f"({len(cipher)} letters)")
    segment = cipher[: len(crib)]
    slides = tuple((letter_index(c) - letter_index(p)) % 26
                   for c, p in zip(segment, crib))
    return CribAlignment(segment, crib, slides)


def score_slides(slides: Sequence[int], table: SlideScoreTable) -> int:
    """Total half decibans for a slide sequence."""
    return sum(table.score(s) for s in slides)


def score_crib(alignment: CribAlignment, table: SlideScoreTable,
               prior: Odds) -> Tuple[int, Odds]:
    """Half-deciban total for the crib and the posterior odds it implies."""
    hd = score_slides(alignment.slides, table)
    return hd, apply_factor(prior, 10 ** (hd / 20))


def enumerate_slide_histogram(components: int, max_slide: int) -> List[int]:
    """Mod-26 slide histogram by direct enumeration of every combination.

    Exponential in `components`; the independent cross-check for
    slide_coefficients, not a substitute for it.
    """
    from itertools import product

    hist = [0] * 26
    for combo in product(range(max_slide + 1), repeat=components):
        hist[sum(combo) % 26] += 1
    return hist
