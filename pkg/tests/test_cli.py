import json

import pytest

from cipherbayes.cli import main
from cipherbayes.corpus import ALPHABET
from cipherbayes.subtractor import REFERENCE_SLIDE_SCORES

CIPHER_90 = ("DKQHSHZMNPRCVXUHTEAQXHPUEPPSBKTWUJAGDYOJTHWCYDZHGA"
             "PZKOXOEYAEBOKBUBPIKRWWACEJPHLPTUZYFHLRYC")


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def cipher_file(tmp_path):
    path = tmp_path / "cipher.txt"
    path.write_text(CIPHER_90)
    return str(path)


@pytest.fixture()
def corpus_file(tmp_path, markov_corpus):
    path = tmp_path / "corpus.txt"
    path.write_text(markov_corpus[:20_000])
    return str(path)


@pytest.fixture()
def bigram_stats_file(tmp_path, markov_corpus, capsys):
    corpus_path = tmp_path / "big_corpus.txt"
    corpus_path.write_text(markov_corpus)
    stats_path = tmp_path / "stats.json"
    code = main(["stats", "--corpus", str(corpus_path)])
    out = capsys.readouterr().out
    assert code == 0
    stats_path.write_text(out)
    return str(stats_path)


class TestStats:
    def test_empty_corpus_exits_1(self, tmp_path, capsys):
        empty = tmp_path / "empty.txt"
        empty.write_text("12345 !!!\n")
        code, out, err = run_cli(capsys, "stats", "--corpus", str(empty))
        assert code == 1
        assert "empty corpus" in err

    def test_missing_file_exits_1(self, capsys):
        code, _, err = run_cli(capsys, "stats", "--corpus", "/nonexistent/x.txt")
        assert code == 1
        assert err.startswith("error:")

    def test_json_bundle(self, tmp_path, capsys):
        path = tmp_path / "c.txt"
        path.write_text("Owing to war conditions.")
        code, out, _ = run_cli(capsys, "stats", "--corpus", str(path), "--max-r", "2")
        assert code == 0
        data = json.loads(out)
        assert sum(data["letter_counts"]) == 20
        assert data["meta"]["letters"] == 20
        assert sum(sum(row) for row in data["bigram_counts"]) == 20  # circular
        assert "rgram_summary" in data

    def test_tsv_format(self, tmp_path, capsys):
        path = tmp_path / "c.txt"
        path.write_text("ABAB")
        code, out, _ = run_cli(capsys, "stats", "--corpus", str(path),
                               "--format", "tsv")
        assert code == 0
        assert "A\t2" in out and "B\t2" in out and "AB\t2" in out

    def test_no_circular_flag(self, tmp_path, capsys):
        path = tmp_path / "c.txt"
        path.write_text("ABC")
        _, out, _ = run_cli(capsys, "stats", "--corpus", str(path),
                            "--no-circular", "--format", "tsv")
        assert "CA\t" not in out

    def test_byte_identical_reruns(self, tmp_path, capsys):
        path = tmp_path / "c.txt"
        path.write_text("The quick brown fox jumps over the lazy dog")
        _, first, _ = run_cli(capsys, "stats", "--corpus", str(path))
        _, second, _ = run_cli(capsys, "stats", "--corpus", str(path))
        assert first == second


class TestVigenereCommands:
    def test_score_table_shape(self, cipher_file, capsys):
        code, out, _ = run_cli(capsys, "vigenere", "score", "--period", "10",
                               "--cipher", cipher_file)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "key\t" + "\t".join(str(i) for i in range(1, 11))
        assert len(lines) == 27
        row_p = dict(zip(lines[0].split("\t"),
                         [v for v in lines[1 + ALPHABET.index("P")].split("\t")]))
        assert row_p["key"] == "P"
        assert row_p["1"] == "43"

    def test_solve_mostly_recovers_key(self, cipher_file, capsys):
        # two columns are genuinely ambiguous alone (their true key letter
        # ranks second or third); at least 8 of 10 must come out right
        code, out, _ = run_cli(capsys, "vigenere", "solve", "--period", "10",
                               "--cipher", cipher_file)
        assert code == 0
        best = out.strip().splitlines()[-1].split("\t")
        assert best[0] == "best"
        recovered = "".join(best[1:11])
        matches = sum(a == b for a, b in zip(recovered, "POIUMOLQNY"))
        assert matches >= 8

    def test_table_dump(self, capsys):
        code, out, _ = run_cli(capsys, "vigenere", "table", "--max-mult", "3")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "letter\tx1\tx2\tx3"
        rows = {ln.split("\t")[0]: ln.split("\t") for ln in lines[1:]}
        assert rows["C"][1] == "-5"
        assert rows["Q"][1] == "-26"
        assert rows["S"][3] == "17"

    def test_stats_file_accepted(self, cipher_file, tmp_path, capsys):
        stats = tmp_path / "letters.tsv"
        stats.write_text("".join(
            f"{ch}\t{c}\n" for ch, c in zip(
                ALPHABET,
                [84, 23, 21, 46, 116, 20, 25, 49, 76, 2, 5, 38, 34,
                 66, 66, 15, 2, 64, 73, 81, 19, 11, 21, 16, 24, 3])))
        code, out, _ = run_cli(capsys, "vigenere", "score", "--period", "10",
                               "--cipher", cipher_file, "--stats", str(stats))
        assert code == 0
        assert out.splitlines()[1 + ALPHABET.index("P")].split("\t")[1] == "43"


class TestSubtractorCommands:
    def test_table_within_one_of_reference(self, capsys):
        code, out, _ = run_cli(capsys, "subtractor", "table")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "slide\tscore"
        assert len(lines) == 27
        for line in lines[1:]:
            slide, score = line.split("\t")
            assert abs(int(score) - REFERENCE_SLIDE_SCORES.score(int(slide))) <= 1

    def test_crib_command(self, capsys):
        code, out, _ = run_cli(
            capsys, "subtractor", "crib", "--cipher", "NYXLNXIQHH",
            "--crib", "AMBASSADOR", "--prior-odds", "1:2", "--reference")
        assert code == 0
        lines = dict(line.split("\t") for line in out.strip().splitlines())
        assert lines["slides"] == "13 12 22 11 21 5 8 13 19 16"
        assert lines["score_half_decibans"] == "15"
        assert abs(float(lines["posterior_odds"]) - 2.811707) < 1e-6

    def test_crib_longer_than_cipher_is_data_error(self, capsys):
        code, _, err = run_cli(capsys, "subtractor", "crib",
                               "--cipher", "ABC", "--crib", "ABCD")
        assert code == 1
        assert "error:" in err


class TestRepeatsCommands:
    def test_figure_annotated(self, tmp_path, capsys):
        m1 = tmp_path / "m1.txt"
        m2 = tmp_path / "m2.txt"
        m1.write_text("GFRLIKQGVBMILAFIXMMOROGBYSKYXDAZCHMUMRKBZLDLDDOHCMVTIPRSD")
        m2.write_text("VLOVDYQCEJSOPYGBMBKYXDAZNBFIOPTFCXDOD")
        code, out, _ = run_cli(capsys, "repeats", "figure", "--m1", str(m1),
                               "--m2", str(m2), "--distance", "8")
        assert code == 0
        assert out.strip() == ("^{8}XOOOOOOOOOOXOOXXOOXXXXXXOOOOOOOOOOXOX^{12}")

    def test_params_and_score_pipeline(self, corpus_file, tmp_path, capsys):
        code, out, _ = run_cli(capsys, "repeats", "params", "--corpus",
                               corpus_file, "--max-r", "4")
        assert code == 0
        data = json.loads(out)
        assert set(data) >= {"apparent_repeats", "actual_repeats", "run_probs",
                             "repeat_scores_db", "overlap_penalty_db"}
        assert abs(sum(data["run_probs"].values()) - 1) < 1e-9
        params_file = tmp_path / "params.json"
        params_file.write_text(out)
        code, out2, _ = run_cli(capsys, "repeats", "score", "--figure",
                                "OXXOOOXO", "--params", str(params_file))
        assert code == 0
        name, value = out2.strip().split("\t")
        assert name == "score_decibans"
        mu = data["repeat_scores_db"]
        nu = data["overlap_penalty_db"]
        assert abs(float(value) - (mu["2"] + mu["1"] - 8 * nu)) < 5e-5

    def test_simple_score(self, capsys):
        code, out, _ = run_cli(capsys, "repeats", "score", "--figure", "XOX",
                               "--simple", "--beta", "0.06212")
        assert code == 0
        assert out.startswith("score_decibans\t")

    def test_simple_requires_beta(self, capsys):
        code, _, err = run_cli(capsys, "repeats", "score", "--figure", "XOX",
                               "--simple")
        assert code == 1
        assert "beta" in err

    def test_periodic_corpus_data_error(self, tmp_path, capsys):
        path = tmp_path / "p.txt"
        path.write_text("ABABABABAB")
        code, _, err = run_cli(capsys, "repeats", "params", "--corpus", str(path))
        assert code == 1
        assert "error:" in err


class TestTransposeCommands:
    def test_bottomprob_single_key(self, capsys):
        code, out, _ = run_cli(capsys, "transpose", "bottomprob", "--length",
                               "133", "--pos", "45", "--keys", "15")
        assert code == 0
        assert out == "15\t3/7\t0.428571\n"

    def test_bottomprob_range(self, capsys):
        code, out, _ = run_cli(capsys, "transpose", "bottomprob", "--length",
                               "133", "--pos", "45", "--keys", "10..20")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 11
        assert lines[2] == "12\t1/3\t0.333333"
        assert lines[9] == "19\t0\t0.000000"
        assert lines[10] == "20\t1001/7752\t0.129128"

    def test_score_scan(self, bigram_stats_file, tmp_path, capsys):
        msg = tmp_path / "msg.txt"
        msg.write_text(SAMPLE := "SATPTWSFASTAUTEEAIEUFHWTJTDDGC")
        code, out, _ = run_cli(capsys, "transpose", "score", "--probe", "SATPTW",
                               "--message", str(msg), "--bigrams", bigram_stats_file)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "offset\tas_earlier\tas_later\tself_match"
        assert len(lines) == 1 + len(SAMPLE) - 6 + 1
        assert lines[1].endswith("\t1")      # offset 0 is the probe itself

    def test_markov_check(self, bigram_stats_file, capsys):
        code, out, _ = run_cli(capsys, "transpose", "markov-check",
                               "--bigrams", bigram_stats_file, "--tol", "1e-6")
        assert code == 0
        lines = dict(line.split("\t") for line in out.strip().splitlines())
        assert lines["converged_n"] != "none"
        assert int(lines["converged_n"]) <= 100
        assert float(lines["projection_deviation"]) < 1e-8

    def test_deterministic_output(self, capsys):
        _, first, _ = run_cli(capsys, "transpose", "bottomprob", "--length",
                              "60", "--pos", "20", "--keys", "1..12")
        _, second, _ = run_cli(capsys, "transpose", "bottomprob", "--length",
                               "60", "--pos", "20", "--keys", "1..12")
        assert first == second


class TestUsageErrors:
    def test_unknown_flag_exits_2(self, capsys):
        assert main(["stats", "--corpus", "x", "--bogus"]) == 2

    def test_missing_subcommand_exits_2(self, capsys):
        assert main([]) == 2

    def test_unknown_command_exits_2(self, capsys):
        assert main(["frobnicate"]) == 2

    def test_seed_flag_accepted(self, capsys):
        code, out, _ = run_cli(capsys, "--seed", "7", "transpose", "bottomprob",
                               "--length", "10", "--pos", "5", "--keys", "2")
        assert code == 0
        assert out == "2\t1\t1.000000\n"
