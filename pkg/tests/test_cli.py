import json

import pytest

from tlab.cli import main
from tlab.corpus import save_segmented, save_text
from tlab.synth import make_affixed_lexicon, make_segmented_corpus, make_vocabulary


@pytest.fixture
def word_data(tmp_path):
    words, weights = make_vocabulary(5, size=12, min_len=2, max_len=4, alphabet="abcdef")
    train, _ = make_segmented_corpus(words, weights, 11, lines=60, min_words=3, max_words=6)
    test, gold = make_segmented_corpus(words, weights, 12, lines=10, min_words=3, max_words=6)
    paths = {
        "train": tmp_path / "train.txt",
        "test": tmp_path / "test.txt",
        "gold": tmp_path / "gold.txt",
    }
    save_text(train, paths["train"])
    save_text(test, paths["test"])
    save_segmented(gold.lines, paths["gold"])
    return paths


def test_unknown_flag_exits_one(capsys):
    assert main(["--bogus-flag", "build-model"]) == 1
    assert "usage" in capsys.readouterr().err


def test_missing_subcommand_exits_one():
    assert main([]) == 1


def test_missing_file_is_data_error(tmp_path, capsys):
    code = main(["build-model", "--in", str(tmp_path / "nope.txt"), "--n-max", "2",
                 "--out", str(tmp_path / "m.tsv")])
    assert code == 2
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert "error" in err and "message" in err


def test_build_tokenize_round_trip(word_data, tmp_path, capsys):
    model_path = tmp_path / "m.tsv"
    out_path = tmp_path / "tokens.txt"
    assert main(["build-model", "--in", str(word_data["train"]), "--n-max", "3",
                 "--out", str(model_path)]) == 0
    assert model_path.exists()
    assert main(["tokenize", "--model", str(model_path), "--n", "2", "--peak", "0.4",
                 "--prune", "0", "--mode", "union", str(word_data["test"]),
                 "--out", str(out_path)]) == 0
    produced = out_path.read_text().splitlines()
    raw = word_data["test"].read_text().splitlines()
    assert len(produced) == len(raw)
    for seg_line, raw_line in zip(produced, raw):
        rebuilt = "".join(seg_line.split()).replace("\\s", " ")
        assert rebuilt.replace(" ", "") == raw_line.replace(" ", "")
    capsys.readouterr()


def test_evaluate_emits_single_line_json(word_data, tmp_path, capsys):
    model_path = tmp_path / "m.tsv"
    pred_path = tmp_path / "pred.txt"
    main(["build-model", "--in", str(word_data["train"]), "--n-max", "3", "--out", str(model_path)])
    main(["tokenize", "--model", str(model_path), "--n", "2", "--peak", "0.4",
          str(word_data["test"]), "--out", str(pred_path)])
    capsys.readouterr()
    code = main(["evaluate", "--pred", str(pred_path), "--gold", str(word_data["gold"]),
                 "--train", str(word_data["train"]), "--test", str(word_data["test"]),
                 "--metrics", "all", "--n", "2", "--peak", "0.4", "--n-max", "3"])
    assert code == 0
    out = capsys.readouterr().out.strip()
    assert "\n" not in out
    payload = json.loads(out)
    for key in ("f1", "anti_entropy", "compression_factor", "csf1", "avg3", "avg2", "product"):
        assert key in payload and payload[key] is not None
    assert payload["config"]["subcommand"] == "evaluate"


def test_evaluate_f1_only_requires_gold(word_data, tmp_path, capsys):
    pred_path = tmp_path / "pred.txt"
    save_segmented([("ab", "cd")], pred_path)
    assert main(["evaluate", "--pred", str(pred_path), "--metrics", "f1"]) == 1
    assert "gold" in capsys.readouterr().err


def test_evaluate_span_f1_flag(tmp_path, capsys):
    pred_path = tmp_path / "pred.txt"
    gold_path = tmp_path / "gold.txt"
    save_segmented([("a", "bc", "d")], pred_path)
    gold_path.write_text("ab c d\n")
    assert main(["evaluate", "--pred", str(pred_path), "--gold", str(gold_path),
                 "--metrics", "f1"]) == 0
    boundary = json.loads(capsys.readouterr().out.strip())["f1"]
    assert main(["evaluate", "--pred", str(pred_path), "--gold", str(gold_path),
                 "--metrics", "f1", "--span-f1"]) == 0
    span = json.loads(capsys.readouterr().out.strip())["f1"]
    assert span < boundary


def test_grid_search_row_count_and_determinism(word_data, tmp_path, capsys):
    csv_a, csv_b = tmp_path / "a.csv", tmp_path / "b.csv"
    summary_path = tmp_path / "summary.json"
    grid = "n=1..2;peak=0:0.4:0.2;prune=0,1;mode=fwd,union"
    argv = ["grid-search", "--train", str(word_data["train"]), "--test", str(word_data["test"]),
            "--gold", str(word_data["gold"]), "--n-max", "2", "--grid", grid,
            "--out-csv", str(csv_a), "--out-summary", str(summary_path)]
    assert main(argv) == 0
    argv_b = argv.copy()
    argv_b[argv_b.index(str(csv_a))] = str(csv_b)
    assert main(argv_b) == 0
    capsys.readouterr()

    lines_a = csv_a.read_text().splitlines()
    assert lines_a[0].startswith("# config:")
    assert len(lines_a) == 2 + 2 * 3 * 2 * 2  # comment + header + cardinality
    body_a = "\n".join(lines_a[1:])
    body_b = "\n".join(csv_b.read_text().splitlines()[1:])
    assert body_a == body_b  # identical apart from the echoed output path

    summary = json.loads(summary_path.read_text())
    assert "pearson_f1_vs" in summary and "argmax_params" in summary
    assert summary["config"]["grid"] == grid


def test_grid_search_sample_test(word_data, tmp_path, capsys):
    out_csv = tmp_path / "s.csv"
    argv = ["--seed", "9", "grid-search", "--train", str(word_data["train"]),
            "--test", str(word_data["test"]), "--gold", str(word_data["gold"]),
            "--n-max", "1", "--grid", "n=1;peak=0.5;prune=0;mode=union",
            "--sample-test", "4", "--out-csv", str(out_csv)]
    assert main(argv) == 0
    capsys.readouterr()
    assert out_csv.exists()


@pytest.fixture
def morph_files(tmp_path):
    lex, inv = make_affixed_lexicon(3, stems=6, suffixes=2)
    lex_path = tmp_path / "lexicon.txt"
    lex_path.write_text("".join(f"{w}\t{c}\n" for w, c in lex.entries.items()))
    suffix_path = tmp_path / "suffixes.txt"
    suffix_path.write_text("# test suffixes\n" + "".join(f"{s}\n" for s in sorted(inv.suffixes)))
    return lex_path, suffix_path


def test_morph_eval_json(morph_files, capsys):
    lex_path, suffix_path = morph_files
    code = main(["morph-eval", "--lexicon", str(lex_path), "--suffixes", str(suffix_path),
                 "--min-stem", "3", "--min-word-len", "0", "--n", "2", "--peak", "0.5",
                 "--prune", "0", "--n-max", "3"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out.strip())
    for key in ("f1", "anti_entropy", "compression_factor", "avg2", "product"):
        assert key in payload


def test_grid_search_timings_flag(word_data, tmp_path, capsys):
    out_csv = tmp_path / "timed.csv"
    argv = ["grid-search", "--train", str(word_data["train"]), "--test", str(word_data["test"]),
            "--gold", str(word_data["gold"]), "--n-max", "1",
            "--grid", "n=1;peak=0.2,0.5;prune=0;mode=union",
            "--out-csv", str(out_csv), "--timings"]
    assert main(argv) == 0
    capsys.readouterr()
    rows = [line.split(",") for line in out_csv.read_text().splitlines()[2:]]
    assert all(int(row[12]) >= 0 for row in rows)  # real times recorded


@pytest.mark.parametrize("metric,key", [("se", "anti_entropy"), ("cf", "compression_factor")])
def test_evaluate_single_metric(tmp_path, capsys, metric, key):
    pred_path = tmp_path / "pred.txt"
    save_segmented([("ab", "cd"), ("ab",)], pred_path)
    assert main(["evaluate", "--pred", str(pred_path), "--metrics", metric]) == 0
    payload = json.loads(capsys.readouterr().out.strip())
    assert payload[key] is not None
    assert payload["f1"] is None and payload["csf1"] is None


def test_morph_eval_with_prefix_file(tmp_path, capsys):
    lex_path = tmp_path / "lex.txt"
    lex_path.write_text("unzip\t4\nunfold\t2\nzip\t1\n")
    prefix_path = tmp_path / "pre.txt"
    prefix_path.write_text("un\n")
    code = main(["morph-eval", "--lexicon", str(lex_path), "--prefixes", str(prefix_path),
                 "--min-stem", "3", "--n", "1", "--peak", "0.5", "--n-max", "2"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out.strip())
    assert 0.0 <= payload["f1"] <= 1.0


def test_morph_grid_csv(morph_files, tmp_path, capsys):
    lex_path, suffix_path = morph_files
    out_csv = tmp_path / "morph.csv"
    code = main(["morph-grid", "--lexicon", str(lex_path), "--suffixes", str(suffix_path),
                 "--grid", "n=1..2;peak=0.3,0.7;prune=0;mode=union", "--n-max", "2",
                 "--out-csv", str(out_csv)])
    assert code == 0
    capsys.readouterr()
    lines = out_csv.read_text().splitlines()
    assert len(lines) == 2 + 2 * 2
    first = lines[2].split(",")
    assert first[8] == "" and first[9] == ""  # csf1 and avg3 not applicable
