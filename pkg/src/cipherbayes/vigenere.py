"""Vigenere cipher, half-deciban score tables, per-column key ranking,
and the exact normalized posterior over the 26 keys of one column.

Keys and letters share one numbering (A=1 .. Z=26, with Z also acting
as 0), so the decode rule is plain = cipher - key + 1 (mod 26); key A
is the identity shift.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import List, Tuple

from .bayes import round_half_away
from .corpus import ALPHABET, LetterDistribution, letter_index

# finite stand-in for 20*log10(0): keeps sums usable when a letter has
# zero corpus probability
ZERO_PROB_SCORE = -99.0


def _shift(ch: str, by: int) -> str:
    return ALPHABET[(letter_index(ch) + by) % 26]


def encipher(plain: str, key: str) -> str:
    if not key:
        raise ValueError("key must be nonempty")
    ks = [letter_index(k) for k in key]
    return "".join(_shift(c, ks[i % len(ks)]) for i, c in enumerate(plain))


def decipher(cipher: str, key: str) -> str:
    if not key:
        raise ValueError("key must be nonempty")
    ks = [letter_index(k) for k in key]
    return "".join(_shift(c, -ks[i % len(ks)]) for i, c in enumerate(cipher))


def columns_of(cipher: str, period: int) -> List[str]:
    """Split a message into its period columns."""
    if period < 1:
        raise ValueError("period must be >= 1")
    return ["".join(cipher[j::period]) for j in range(period)]


def _unrounded_score(p: float, odds_form: bool) -> float:
    if p <= 0:
        return ZERO_PROB_SCORE
    if odds_form:
        return 20 * math.log10(25 * p / (1 - p))
    return 20 * math.log10(26 * p)


@dataclass(frozen=True)
class ColumnScoreTable:
    """Integer half-deciban score per decode letter, with multiplicity rows.

    Row m holds the nearest integer to m times the unrounded letter
    score, so repeated letters are scored in one lookup instead of m
    slightly-off additions.
    """

    base: tuple                    # 26 ints, multiplicity 1
    multiples: tuple               # multiples[m-1][letter] for m = 1..max_mult

    @property
    def max_multiplicity(self) -> int:
        return len(self.multiples)

    def score(self, ch: str, multiplicity: int = 1) -> int:
        if multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")
        if multiplicity > len(self.multiples):
            raise ValueError(
                f"table built for multiplicity <= {len(self.multiples)}, "
                f"need {multiplicity}")
        return self.multiples[multiplicity - 1][letter_index(ch)]


def build_score_table(dist: LetterDistribution, max_mult: int = 9,
                      odds_form: bool = False) -> ColumnScoreTable:
    """Half-deciban table for 26p (default) or the 25p/(1-p) odds form."""
    if max_mult < 1:
        raise ValueError("max_mult must be >= 1")
    raw = [_unrounded_score(p, odds_form) for p in dist.p]
    multiples = tuple(
        tuple(round_half_away(m * s) for s in raw) for m in range(1, max_mult + 1)
    )
    return ColumnScoreTable(multiples[0], multiples)


def score_column(column: str, key: str, table: ColumnScoreTable) -> int:
    """Decode the column with one key and total the half-deciban scores,
    looking each distinct letter up in its multiplicity row."""
    if not column:
        raise ValueError("column must be nonempty")
    decoded = Counter(decipher(column, key))
    return sum(table.score(ch, m) for ch, m in decoded.items())


def rank_keys(column: str, table: ColumnScoreTable) -> List[Tuple[str, int]]:
    """All 26 keys with scores, best first; ties break alphabetically."""
    scored = [(k, score_column(column, k, table)) for k in ALPHABET]
    return sorted(scored, key=lambda ks: (-ks[1], ks[0]))


def _log_products(column: str, dist: LetterDistribution) -> List[float]:
    """log of prod_i 26*p(decode) for each key; -inf where the product is 0."""
    if not column:
        raise ValueError("column must be nonempty")
    idx = [letter_index(c) for c in column]
    out = []
    for k in range(26):
        total = 0.0
        for a in idx:
            p = dist.p[(a - k) % 26]
            if p <= 0:
                total = -math.inf
                break
            total += math.log(26 * p)
        out.append(total)
    return out

def key_posterior(column: str, dist: LetterDistribution) -> Tuple[float, ...]:
    """Exact posterior over the 26 keys for one column, computed in log space.

    posterior(key) = prod_i 26*p(decode_i) / sum over keys of the same product.
    """
    logs = _log_products(column, dist)
    top = max(logs)
    if top == -math.inf:
        raise ValueError("degenerate distribution: every key decodes to a "
                         "zero-probability letter")
    weights = [math.exp(v - top) if v > -math.inf else 0.0 for v in logs]
    total = sum(weights)
    return tuple(w / total for w in weights)


def evidence_denominator(column: str, dist: LetterDistribution) -> float:
    """Sum over keys of prod_i 26*p(decode_i).

    The posterior normalizer; useful on its own as evidence for the
    enclosing model (right cipher type, right period).
    """
    logs = _log_products(column, dist)
    top = max(logs)
    if top == -math.inf:
        return 0.0
    return math.exp(top) * sum(
        math.exp(v - top) if v > -math.inf else 0.0 for v in logs)
