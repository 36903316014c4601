"""Command-line interface: stats ingestion plus one subcommand family per
scoring module, emitting TSV for tables and JSON for structured
parameters.  Output is deterministic for fixed inputs."""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import List, Optional

from . import bayes, corpus, repeats, subtractor, transposition, vigenere
from .corpus import ALPHABET


def _read_letters(path: str) -> str:
    with open(path, "rb") as fh:
        raw = fh.read()
    letters = corpus.normalize(raw)
    if not letters:
        raise ValueError(f"empty corpus: no letters in {path}")
    return letters


def _load_letter_distribution(path: Optional[str]) -> corpus.LetterDistribution:
    if path is None:
        return corpus.ENGLISH_LETTERS
    return corpus.load_stats(path).letter_distribution()


def _load_bigram_stats(path: str) -> corpus.BigramStats:
    return corpus.load_stats(path).bigram_stats()


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_stats(args) -> int:
    letters = _read_letters(args.corpus)
    bundle = corpus.stats_from_text(letters, source=args.corpus,
                                    circular=not args.no_circular,
                                    max_r=args.max_r)
    if args.format == "json":
        sys.stdout.write(corpus.bundle_to_json(bundle))
    else:
        sys.stdout.write(corpus.letter_counts_to_tsv(bundle.letter_counts))
        sys.stdout.write(corpus.bigram_counts_to_tsv(bundle.bigram_counts))
    return 0


def _vigenere_columns(args):
    cipher = _read_letters(args.cipher)
    if args.period > len(cipher):
        raise ValueError(f"period {args.period} exceeds message length {len(cipher)}")
    cols = vigenere.columns_of(cipher, args.period)
    dist = _load_letter_distribution(args.stats)
    max_mult = args.max_mult or max(len(c) for c in cols)
    table = vigenere.build_score_table(dist, max_mult=max_mult)
    return cols, dist, table


def _cmd_vigenere_score(args) -> int:
    cols, _, table = _vigenere_columns(args)
    print("key\t" + "\t".join(str(j + 1) for j in range(len(cols))))
    for key in ALPHABET:
        row = [str(vigenere.score_column(col, key, table)) for col in cols]
        print(key + "\t" + "\t".join(row))
    return 0


def _cmd_vigenere_solve(args) -> int:
    cols, dist, table = _vigenere_columns(args)
    posts = [vigenere.key_posterior(col, dist) for col in cols]
    ncols = len(cols)
    header = ["key"]
    header += [f"c{j + 1}" for j in range(ncols)]
    header += [f"p{j + 1}" for j in range(ncols)]
    print("\t".join(header))
    for i, key in enumerate(ALPHABET):
        row = [key]
        row += [str(vigenere.score_column(col, key, table)) for col in cols]
        row += [f"{posts[j][i]:.6f}" for j in range(ncols)]
        print("\t".join(row))
    best = [max(range(26), key=lambda i: (posts[j][i], -i)) for j in range(ncols)]
    row = ["best"]
    row += [ALPHABET[best[j]] for j in range(ncols)]
    row += [f"{posts[j][best[j]]:.6f}" for j in range(ncols)]
    print("\t".join(row))
    return 0


def _cmd_vigenere_table(args) -> int:
    dist = _load_letter_distribution(args.stats)
    table = vigenere.build_score_table(dist, max_mult=args.max_mult or 5)
    m = table.max_multiplicity
    print("letter\t" + "\t".join(f"x{i + 1}" for i in range(m)))
    for letter in ALPHABET:
        print(letter + "\t" + "\t".join(
            str(table.score(letter, i + 1)) for i in range(m)))
    return 0


def _cmd_subtractor_table(args) -> int:
    dist = subtractor.slide_coefficients(args.components, args.max_slide)
    table = subtractor.build_slide_table(dist)
    print("slide\tscore")
    for s in range(26):
        print(f"{s}\t{table.score(s)}")
    return 0


def _cmd_subtractor_crib(args) -> int:
    if args.reference:
        table = subtractor.REFERENCE_SLIDE_SCORES
    else:
        table = subtractor.build_slide_table(
            subtractor.slide_coefficients(args.components, args.max_slide))
    cipher = corpus.normalize(args.cipher)
    crib = corpus.normalize(args.crib)
    alignment = subtractor.slides_from_crib(cipher, crib)
    prior = bayes.parse_odds(args.prior_odds)
    hd, posterior = subtractor.score_crib(alignment, table, prior)
    print("slides\t" + " ".join(str(s) for s in alignment.slides))
    print(f"score_half_decibans\t{hd}")
    print(f"posterior_odds\t{float(posterior.ratio):.6f}")
    return 0


def _cmd_repeats_figure(args) -> int:
    m1 = _read_letters(args.m1)
    m2 = _read_letters(args.m2)
    fig = repeats.repetition_figure(m1, m2, args.distance)
    print(fig.annotated())
    return 0


def _cmd_repeats_params(args) -> int:
    letters = _read_letters(args.corpus)
    params = repeats.estimate_params_from_text(letters, max_r=args.max_r)
    payload = {
        "letters": params.letters,
        "pair_count": params.pair_count,
        "apparent_repeats": {str(r): c for r, c in sorted(params.apparent.items())},
        "actual_repeats": {str(r): c for r, c in sorted(params.actual.items())},
        "disagreement_rate": params.disagreement_rate,
        "run_probs": {str(r): p for r, p in sorted(params.run_probs.items())},
        "continuation_prob": params.continuation_prob,
        "repeat_scores_db": {str(r): s for r, s in sorted(params.repeat_score.items())},
        "overlap_penalty_db": params.overlap_penalty,
    }
    print(json.dumps(payload, sort_keys=True, indent=2))
    return 0


def _cmd_repeats_score(args) -> int:
    figure = args.figure.strip().upper()
    if args.simple:
        if args.beta is None:
            raise ValueError("--simple scoring needs --beta (coincidence rate)")
        db = repeats.simple_fit_factor(figure, args.beta)
    else:
        if args.params is None:
            raise ValueError("general scoring needs --params FILE (or use --simple)")
        with open(args.params, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        params = repeats.RepeatParams(
            letters=data.get("letters", 0),
            pair_count=data.get("pair_count", 0),
            apparent={int(r): c for r, c in data.get("apparent_repeats", {}).items()},
            actual={int(r): c for r, c in data.get("actual_repeats", {}).items()},
            disagreement_rate=data.get("disagreement_rate", 0.0),
            run_probs={int(r): p for r, p in data.get("run_probs", {}).items()},
            continuation_prob=data.get("continuation_prob", 0.0),
            repeat_score={int(r): s for r, s in data["repeat_scores_db"].items()},
            overlap_penalty=data["overlap_penalty_db"],
        )
        db = repeats.general_fit_score(figure, params)
    print(f"score_decibans\t{db:.4f}")
    return 0


def _cmd_transpose_score(args) -> int:
    probe = corpus.normalize(args.probe)
    message = _read_letters(args.message)
    table = transposition.build_bigram_score_table(_load_bigram_stats(args.bigrams))
    print("offset\tas_earlier\tas_later\tself_match")
    for a in transposition.scan_alignments(probe, message, table):
        print(f"{a.offset}\t{a.as_earlier}\t{a.as_later}\t{int(a.self_match)}")
    return 0


def _parse_key_range(text: str) -> List[int]:
    if ".." in text:
        lo, _, hi = text.partition("..")
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise ValueError(f"bad key range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _cmd_transpose_bottomprob(args) -> int:
    for k in _parse_key_range(args.keys):
        p = transposition.bottom_of_column_probability(args.length, k, args.pos)
        print(f"{k}\t{p}\t{float(p):.6f}")
    return 0


def _cmd_transpose_markov_check(args) -> int:
    stats = _load_bigram_stats(args.bigrams)
    report = transposition.stationarity_check(stats, tol=args.tol, max_n=args.max_n)
    converged = "none" if report.converged_at is None else str(report.converged_at)
    print(f"converged_n\t{converged}")
    print(f"max_deviation\t{report.max_deviation:.3e}")
    print(f"projection_deviation\t{report.projection_dev:.3e}")
    print(f"idempotency_deviation\t{report.idempotency_dev:.3e}")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cipherbayes",
        description="Bayesian scoring toolkit for classical ciphers",
    )
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for randomized simulation subpaths")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="count letters and bigrams in a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.add_argument("--max-r", type=int, default=0,
                   help="include distinct r-gram counts up to this r")
    p.add_argument("--no-circular", action="store_true",
                   help="count bigrams without wrapping end to start")
    p.set_defaults(func=_cmd_stats)

    vig = sub.add_parser("vigenere", help="periodic shift cipher scoring").add_subparsers(
        dest="subcommand", required=True)
    for name, func, help_text in (
            ("score", _cmd_vigenere_score, "half-deciban score of every key per column"),
            ("solve", _cmd_vigenere_solve, "scores plus exact key posteriors")):
        p = vig.add_parser(name, help=help_text)
        p.add_argument("--period", type=int, required=True)
        p.add_argument("--cipher", required=True, help="ciphertext file")
        p.add_argument("--stats", default=None,
                       help="letter stats file (default: built-in English count)")
        p.add_argument("--max-mult", type=int, default=0,
                       help="multiplicity rows (default: column height)")
        p.set_defaults(func=func)
    p = vig.add_parser("table", help="dump the half-deciban letter score table")
    p.add_argument("--stats", default=None)
    p.add_argument("--max-mult", type=int, default=5)
    p.set_defaults(func=_cmd_vigenere_table)

    subt = sub.add_parser("subtractor", help="letter subtractor slide scoring").add_subparsers(
        dest="subcommand", required=True)
    p = subt.add_parser("table", help="slide score table from the slide distribution")
    p.add_argument("--components", type=int, default=3)
    p.add_argument("--max-slide", type=int, default=9)
    p.set_defaults(func=_cmd_subtractor_table)
    p = subt.add_parser("crib", help="evaluate a crib placed at offset 0")
    p.add_argument("--cipher", required=True)
    p.add_argument("--crib", required=True)
    p.add_argument("--prior-odds", default="1:1", help="e.g. 1:2 for 2:1 against")
    p.add_argument("--components", type=int, default=3)
    p.add_argument("--max-slide", type=int, default=9)
    p.add_argument("--reference", action="store_true",
                   help="score with the classic printed slide table")
    p.set_defaults(func=_cmd_subtractor_crib)

    rep = sub.add_parser("repeats", help="depth detection from repetition figures").add_subparsers(
        dest="subcommand", required=True)
    p = rep.add_parser("figure", help="repetition figure of two messages")
    p.add_argument("--m1", required=True, help="first message file")
    p.add_argument("--m2", required=True, help="second message file")
    p.add_argument("--distance", type=int, required=True)
    p.set_defaults(func=_cmd_repeats_figure)
    p = rep.add_parser("params", help="estimate repeat-theory parameters from a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--max-r", type=int, default=4)
    p.set_defaults(func=_cmd_repeats_params)
    p = rep.add_parser("score", help="score a repetition figure")
    p.add_argument("--figure", required=True, help="string of X and O")
    p.add_argument("--params", default=None, help="JSON from 'repeats params'")
    p.add_argument("--simple", action="store_true", help="X-count theory only")
    p.add_argument("--beta", type=float, default=None,
                   help="plain-language coincidence rate for --simple")
    p.set_defaults(func=_cmd_repeats_score)

    tr = sub.add_parser("transpose", help="columnar transposition scoring").add_subparsers(
        dest="subcommand", required=True)
    p = tr.add_parser("score", help="scan a probe column against a message")
    p.add_argument("--probe", required=True)
    p.add_argument("--message", required=True, help="message file")
    p.add_argument("--bigrams", required=True, help="bigram stats file")
    p.set_defaults(func=_cmd_transpose_score)
    p = tr.add_parser("bottomprob", help="probability a letter ends a column")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--pos", type=int, required=True)
    p.add_argument("--keys", required=True, help="key length N or range A..B")
    p.set_defaults(func=_cmd_transpose_bottomprob)
    p = tr.add_parser("markov-check", help="bigram chain convergence report")
    p.add_argument("--bigrams", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-n", type=int, default=100)
    p.set_defaults(func=_cmd_transpose_markov_check)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if args.seed is not None:
        random.seed(args.seed)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
