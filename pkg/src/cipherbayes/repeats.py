"""Depth detection from repeats: repetition figures between aligned
ciphertexts, the simple X-count scorer, local figure-pattern factors,
and the general run-length theory with parameters estimated from corpus
r-gram statistics.

Two messages enciphered with the same substitution series agree at a
position exactly when their plaintexts do, so agreements (X) arrive at
the plain-language coincidence rate for a right fit and at 1/26 for a
wrong one.  The general theory scores each maximal X-run of length r
with a tabulated decibanage and charges a per-position penalty for the
overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from .corpus import LetterDistribution, RgramCounts, count_rgrams

FigureLike = Union["RepetitionFigure", str]


@dataclass(frozen=True)
class RepetitionFigure:
    """X/O agreement string for two ciphertexts at a relative distance.

    X marks positions where the texts agree, O where they differ.  The
    overhang counts record how many letters on each side fall outside
    the overlap and which message they belong to.
    """

    symbols: str
    leading: int
    trailing: int
    leading_message: int = 1
    trailing_message: int = 1

    def __post_init__(self):
        if set(self.symbols) - {"X", "O"}:
            raise ValueError("figure symbols must be X or O")

    @property
    def length(self) -> int:
        return len(self.symbols)

    @property
    def agreements(self) -> int:
        return self.symbols.count("X")

    def runs(self) -> List[Tuple[int, int]]:
        """Maximal X-runs as (start, length) pairs."""
        out = []
        i = 0
        while i < len(self.symbols):
            if self.symbols[i] == "X":
                j = i
                while j < len(self.symbols) and self.symbols[j] == "X":
                    j += 1
                out.append((i, j - i))
                i = j
            else:
                i += 1
        return out

    def annotated(self) -> str:
        return f"^{{{self.leading}}}{self.symbols}^{{{self.trailing}}}"


def repetition_figure(msg1: str, msg2: str, distance: int) -> RepetitionFigure:
    """Compare msg2 against msg1 with msg2 starting `distance` letters in.

    Negative distance means msg1 starts inside msg2.
    """
    if distance < 0:
        fig = repetition_figure(msg2, msg1, -distance)
        return RepetitionFigure(fig.symbols, fig.leading, fig.trailing,
                                3 - fig.leading_message, 3 - fig.trailing_message)
    overlap = min(len(msg1) - distance, len(msg2))
    if overlap <= 0:
        raise ValueError(f"no overlap at distance {distance}")
    symbols = "".join(
        "X" if msg1[distance + i] == msg2[i] else "O" for i in range(overlap))
    tail1 = len(msg1) - distance - overlap
    tail2 = len(msg2) - overlap
    trailing, owner = (tail1, 1) if tail1 else (tail2, 2)
    return RepetitionFigure(symbols, distance, trailing, 1, owner)


def _figure(figure: FigureLike) -> RepetitionFigure:
    if isinstance(figure, RepetitionFigure):
        return figure
    return RepetitionFigure(figure, 0, 0)


def simple_fit_factor(figure: FigureLike, coincidence: float) -> float:
    """Decibans for a fit from agreement count alone.

    Each X is worth 10*log10(25b/(1-b)) and each position of overlap
    10*log10((26/25)(1-b)), b being the plain-language coincidence rate;
    together an X contributes a factor 26b and an O (26/25)(1-b).
    """
    if not 0 < coincidence < 1:
        raise ValueError(f"coincidence rate must be in (0, 1), got {coincidence}")
    fig = _figure(figure)
    n = fig.agreements
    per_x = 10 * math.log10(25 * coincidence / (1 - coincidence))
    per_unit = 10 * math.log10((26 / 25) * (1 - coincidence))
    return n * per_x + fig.length * per_unit


def repeat_pattern_factor(pattern: str, stats: RgramCounts) -> Tuple[float, bool]:
    """Factor for one local figure pattern, e.g. "OXXXXO".

    The pattern must be a single X-run optionally bounded by O on either
    side.  The numerator is the observed frequency of the pattern among
    all pairs of positions in the statistics sample; the denominator is
    (1/26)^#X * (25/26)^#O.  Returns (factor, ok); ok is False when the
    sample contains no occurrences at all, in which case the factor 0.0
    means "insufficient statistics", not impossibility.
    """
    if not pattern or set(pattern) - {"X", "O"}:
        raise ValueError("pattern must be a nonempty string of X and O")
    bounded_left = pattern.startswith("O")
    bounded_right = len(pattern) > 1 and pattern.endswith("O")
    run = pattern[1 if bounded_left else 0: len(pattern) - 1 if bounded_right else None]
    if not run or set(run) != {"X"}:
        raise ValueError(
            "pattern must be one X-run with at most one O on each side "
            f"(got {pattern!r}); other patterns are not derivable from "
            "contiguous r-gram counts")
    n_o = int(bounded_left) + int(bounded_right)
    r = len(run)
    need = r + n_o
    if stats.max_r < need:
        raise ValueError(f"need r-gram statistics up to r={need}, have {stats.max_r}")
    m = stats.apparent_repeats
    if bounded_left and bounded_right:
        count = m(r) - 2 * m(r + 1) + m(r + 2)
    elif bounded_left or bounded_right:
        count = m(r) - m(r + 1)
    else:
        count = m(r)
    pairs = stats.letters * (stats.letters - 1) // 2
    if count == 0:
        return 0.0, False
    numerator = count / pairs
    denominator = (1 / 26) ** r * (25 / 26) ** n_o
    return numerator / denominator, True


@dataclass(frozen=True)
class RepeatParams:
    """Estimated quantities of the general repeat theory.

    apparent[r]  pairs of equal r-grams in the statistics (any context)
    actual[r]    maximal r-runs expected over all pairwise comparisons,
                 actual[r] = apparent[r] - 2*apparent[r+1] + apparent[r+2]
    run_probs[r] probability that the stretch after an O is an r-run
                 then an O (sums to 1 over r >= 0)
    repeat_score[r]  decibans credited to a maximal r-run
    overlap_penalty  decibans charged per position of overlap (>= 0 for
                 real language; it enters the score negatively)
    """

    letters: int
    pair_count: int
    apparent: Dict[int, int]
    actual: Dict[int, int]
    disagreement_rate: float
    run_probs: Dict[int, float]
    continuation_prob: float
    repeat_score: Dict[int, float]
    overlap_penalty: float
    coincidence: Optional[float] = None
    # initial-run score series for figures whose first run abuts the
    # message start ("none" overhang) or follows an overhang ("some");
    # None means fall back to repeat_score
    initial_score_none: Optional[Dict[int, float]] = None
    initial_score_some: Optional[Dict[int, float]] = None

    @property
    def max_r(self) -> int:
        return max(self.repeat_score)

    def initial_score(self, r: int, leading: int) -> float:
        series = self.initial_score_none if leading == 0 else self.initial_score_some
        if series is not None and r in series:
            return series[r]
        return self.repeat_score[r]


def estimate_params(stats: RgramCounts, dist: Optional[LetterDistribution] = None,
                    max_r: int = 4) -> RepeatParams:
    """Estimate the general-theory parameters from r-gram statistics.

    Requires statistics deep enough that no repeats survive at the top
    two tabulated lengths, so the run-length probabilities sum to
    exactly 1; raises when the corpus is too small or too repetitive.
    """
    top = stats.max_r
    if max_r < 1:
        raise ValueError("max_r must be >= 1")
    if max_r > top - 2:
        raise ValueError(f"need r-gram statistics up to {max_r + 2} for max_r={max_r}")
    n = stats.letters
    pairs = n * (n - 1) // 2
    apparent = {r: stats.apparent_repeats(r) for r in range(1, top + 1)}
    x_pairs = apparent[1]
    if pairs - x_pairs <= 0:
        raise ValueError("corpus too small or degenerate: every pair of "
                         "positions agrees")
    # the run-probability series telescopes to 1 minus
    # (M[top-1] - M[top]) / (pairs - M[1]); completeness needs the tail
    # repeats to have died out
    shortfall = apparent[top - 1] - apparent[top]
    if shortfall * 1_000_000_000 > (pairs - x_pairs):
        raise ValueError(
            f"r-gram statistics truncated: repeats of length {top - 1} still "
            f"present ({apparent[top - 1]}); raise max_r of the statistics")
    actual = {0: pairs - 2 * apparent[1] + apparent[2]}
    for r in range(1, top - 1):
        actual[r] = apparent[r] - 2 * apparent.get(r + 1, 0) + apparent.get(r + 2, 0)
    denom = pairs - x_pairs          # = pair_count * disagreement rate
    run_probs = {r: actual[r] / denom for r in sorted(actual)}
    for r in range(1, max_r + 1):
        if actual[r] <= 0:
            raise ValueError(f"corpus too small: no length-{r} repeats observed")
    k0 = run_probs[0]
    continuation = 1 - k0
    penalty = -10 * math.log10(26 * k0 / 25)
    score = {}
    for r in range(1, max_r + 1):
        score[r] = (10 * math.log10(26 ** (r + 1) * run_probs[r] / 25)
                    + (r + 1) * penalty)
    return RepeatParams(
        letters=n,
        pair_count=pairs,
        apparent=apparent,
        actual=actual,
        disagreement_rate=(pairs - x_pairs) / pairs,
        run_probs=run_probs,
        continuation_prob=continuation,
        repeat_score=score,
        overlap_penalty=penalty,
        coincidence=dist.coincidence if dist is not None else None,
    )


def estimate_params_from_text(letters: str, dist: Optional[LetterDistribution] = None,
                              max_r: int = 4, max_tabulated: int = 64) -> RepeatParams:
    """Estimate parameters from raw corpus letters, growing the r-gram
    statistics until the repeat tail dies out (or max_tabulated is hit)."""
    counts = {}
    top = 0
    while top < max_tabulated and top < len(letters):
        top += 1
        counts[top] = count_rgrams(letters, top)
        if top >= max_r + 2 and top >= 2:
            m_prev = sum(s * (s - 1) // 2 for s in counts[top - 1].values())
            m_top = sum(s * (s - 1) // 2 for s in counts[top].values())
            if m_prev == 0 and m_top == 0:
                break
    stats = RgramCounts(counts, len(letters))
    return estimate_params(stats, dist, max_r)


def general_fit_score(figure: FigureLike, params: RepeatParams) -> float:
    """Decibans for a fit under the general run-length theory.

    Each maximal X-run of length r earns its tabulated repeat score
    (runs touching the figure start use the initial-run series), and
    every position of overlap is charged the overlap penalty.  The
    correction for a run cut off by the end of the figure is neglected.
    """
    fig = _figure(figure)
    total = -params.overlap_penalty * fig.length
    for start, length in fig.runs():
        if length > params.max_r:
            raise ValueError(
                f"figure contains a run of {length} X but scores are "
                f"tabulated only to r={params.max_r}; re-estimate with "
                f"max_r >= {length}")
        if start == 0:
            total += params.initial_score(length, fig.leading)
        else:
            total += params.repeat_score[length]
    return total
