"""Text normalization and corpus statistics: letter counts, bigram tables,
r-gram repeat counts, and the stats file formats shared by the CLI.

The alphabet is fixed at A-Z.  Repeat statistics treat the corpus as
circular, so every position starts an r-gram; bigram estimation supports
both circular and linear modes.
"""

from __future__ import annotations

import json
import os
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Union

import numpy as np

ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
_A = ord("A")

# Letter frequency count on 1000 letters of English message text; the
# default statistics for every scorer.
ENGLISH_LETTER_COUNTS = (
    84, 23, 21, 46, 116, 20, 25, 49, 76, 2, 5, 38, 34,
    66, 66, 15, 2, 64, 73, 81, 19, 11, 21, 16, 24, 3,
)


def normalize(text: Union[str, bytes]) -> str:
    """Uppercase ASCII letters, drop everything else."""
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="ignore")
    return "".join(ch for ch in text.upper() if "A" <= ch <= "Z")


def letter_index(ch: str) -> int:
    i = ord(ch) - _A
    if not 0 <= i < 26:
        raise ValueError(f"not an uppercase letter: {ch!r}")
    return i


@dataclass(frozen=True)
class LetterDistribution:
    """26 letter probabilities indexed A..Z."""

    p: tuple

    def __post_init__(self):
        if len(self.p) != 26:
            raise ValueError("need 26 probabilities")
        if any(x < 0 for x in self.p):
            raise ValueError("probabilities must be >= 0")
        if abs(sum(self.p) - 1) > 1e-9:
            raise ValueError(f"probabilities sum to {sum(self.p)}, not 1")

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "LetterDistribution":
        if len(counts) != 26:
            raise ValueError("need 26 counts")
        total = sum(counts)
        if total <= 0:
            raise ValueError("empty corpus: no letters counted")
        return cls(tuple(c / total for c in counts))

    @classmethod
    def uniform(cls) -> "LetterDistribution":
        return cls(tuple(1 / 26 for _ in range(26)))

    def prob(self, ch: str) -> float:
        return self.p[letter_index(ch)]

    @property
    def coincidence(self) -> float:
        """Probability that two independent draws agree: sum of p**2.

        At least 1/26, with equality only for the uniform distribution.
        """
        return float(sum(x * x for x in self.p))


ENGLISH_LETTERS = LetterDistribution.from_counts(ENGLISH_LETTER_COUNTS)


@dataclass(frozen=True)
class BigramStats:
    """Joint bigram probabilities with marginals and transition ratios."""

    joint: np.ndarray            # 26x26, sums to 1
    marginal: np.ndarray         # row marginals, P(first letter)
    transition: np.ndarray       # q[a][b] = joint[a][b] / marginal[a]

    @classmethod
    def from_joint_counts(cls, counts) -> "BigramStats":
        joint = np.asarray(counts, dtype=float)
        if joint.shape != (26, 26):
            raise ValueError("need a 26x26 count matrix")
        if (joint < 0).any():
            raise ValueError("counts must be >= 0")
        total = joint.sum()
        if total <= 0:
            raise ValueError("empty corpus: no bigrams counted")
        joint = joint / total
        marginal = joint.sum(axis=1)
        transition = np.divide(
            joint, marginal[:, None],
            out=np.zeros_like(joint), where=marginal[:, None] > 0,
        )
        return cls(joint, marginal, transition)

    @classmethod
    def from_text(cls, letters: str, circular: bool = True) -> "BigramStats":
        if len(letters) < 2:
            raise ValueError("need at least 2 letters for bigram statistics")
        counts = np.zeros((26, 26))
        idx = [letter_index(c) for c in letters]
        pairs = zip(idx, idx[1:] + idx[:1]) if circular else zip(idx, idx[1:])
        for a, b in pairs:
            counts[a][b] += 1
        return cls.from_joint_counts(counts)

    def letter_distribution(self) -> LetterDistribution:
        return LetterDistribution(tuple(self.marginal))


@dataclass(frozen=True)
class RgramCounts:
    """Occurrence counts of every r-gram, r = 1..max_r, over a circular corpus."""

    counts: Dict[int, Counter]
    letters: int

    @property
    def max_r(self) -> int:
        return max(self.counts)

    def occurrences(self, gram: str) -> int:
        return self.counts[len(gram)].get(gram, 0)

    def apparent_repeats(self, r: int) -> int:
        """Number of unordered pairs of equal r-grams: sum of S(S-1)/2."""
        return sum(s * (s - 1) // 2 for s in self.counts[r].values())


def count_rgrams(letters: str, r: int) -> Counter:
    """Counts of all r-grams of a circular corpus (each position starts one)."""
    n = len(letters)
    if r < 1 or n < r:
        raise ValueError(f"need r >= 1 and corpus length >= r (r={r}, length={n})")
    doubled = letters + letters[: r - 1]
    return Counter(doubled[i:i + r] for i in range(n))


def rgram_counts(letters: str, max_r: int) -> RgramCounts:
    if max_r < 1 or len(letters) < max_r:
        raise ValueError("need max_r >= 1 and corpus length >= max_r")
    return RgramCounts({r: count_rgrams(letters, r) for r in range(1, max_r + 1)},
                       len(letters))


# ---------------------------------------------------------------------------
# Stats files: TSV counts and the JSON bundle.

@dataclass
class StatsBundle:
    """Letter and bigram counts plus provenance metadata."""

    letter_counts: Optional[list] = None      # 26 ints
    bigram_counts: Optional[list] = None      # 26x26 ints
    rgram_summary: Optional[dict] = None      # {r: distinct r-gram count}
    meta: dict = field(default_factory=dict)

    def letter_distribution(self) -> LetterDistribution:
        if self.letter_counts is None:
            raise ValueError("stats bundle has no letter counts")
        return LetterDistribution.from_counts(self.letter_counts)

    def bigram_stats(self) -> BigramStats:
        if self.bigram_counts is None:
            raise ValueError("stats bundle has no bigram counts")
        return BigramStats.from_joint_counts(self.bigram_counts)


def stats_from_text(letters: str, source: str = "", circular: bool = True,
                    max_r: int = 0) -> StatsBundle:
    """Count letters and adjacent bigrams; optional r-gram summary."""
    if not letters:
        raise ValueError("empty corpus: no letters after normalization")
    lc = [0] * 26
    for ch in letters:
        lc[letter_index(ch)] += 1
    bc = [[0] * 26 for _ in range(26)]
    idx = [letter_index(c) for c in letters]
    if len(idx) >= 2:
        pairs = zip(idx, idx[1:] + idx[:1]) if circular else zip(idx, idx[1:])
        for a, b in pairs:
            bc[a][b] += 1
    summary = None
    if max_r >= 1:
        summary = {r: len(count_rgrams(letters, r)) for r in range(1, max_r + 1)}
    meta = {"source": source, "letters": len(letters)}
    return StatsBundle(lc, bc, summary, meta)


def bundle_to_json(bundle: StatsBundle) -> str:
    payload = {
        "letter_counts": bundle.letter_counts,
        "bigram_counts": bundle.bigram_counts,
        "meta": bundle.meta,
    }
    if bundle.rgram_summary is not None:
        payload["rgram_summary"] = {str(r): c for r, c in bundle.rgram_summary.items()}
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def letter_counts_to_tsv(counts: Sequence[int]) -> str:
    return "".join(f"{ALPHABET[i]}\t{counts[i]}\n" for i in range(26))


def bigram_counts_to_tsv(counts) -> str:
    lines = []
    for a in range(26):
        for b in range(26):
            c = counts[a][b]
            if c:
                lines.append(f"{ALPHABET[a]}{ALPHABET[b]}\t{int(c)}\n")
    return "".join(lines)


def load_stats(path: Union[str, os.PathLike]) -> StatsBundle:
    """Load a stats file: JSON bundle, or TSV of letter or bigram counts."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        summary = data.get("rgram_summary")
        if summary is not None:
            summary = {int(r): c for r, c in summary.items()}
        return StatsBundle(data.get("letter_counts"), data.get("bigram_counts"),
                           summary, data.get("meta", {}))
    letter = [0] * 26
    bigram = [[0] * 26 for _ in range(26)]
    saw_letter = saw_bigram = False
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("\t")
        key = key.strip().upper()
        n = int(value)
        if len(key) == 1:
            letter[letter_index(key)] += n
            saw_letter = True
        elif len(key) == 2:
            bigram[letter_index(key[0])][letter_index(key[1])] += n
            saw_bigram = True
        else:
            raise ValueError(f"bad stats line (want LETTER\\tCOUNT or BIGRAM\\tCOUNT): {line!r}")
    if not (saw_letter or saw_bigram):
        raise ValueError(f"no counts found in {path}")
    meta = {"source": os.fspath(path)}
    if saw_bigram and not saw_letter:
        # derive letter counts from bigram first-letter totals
        letter = [sum(row) for row in bigram]
        saw_letter = True
    return StatsBundle(letter if saw_letter else None,
                       bigram if saw_bigram else None, None, meta)
