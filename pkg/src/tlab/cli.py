"""Single command-line entry point for the whole segmentation pipeline."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .corpus import (
    DataError,
    GoldSegmentation,
    TextCorpus,
    escape_token,
    load_gold,
    load_segmented,
    load_text,
    sample_indices,
    save_segmented,
)
from .lab import (
    DEFAULT_GRID,
    MODE_LONG,
    parse_grid_spec,
    run_grid,
    run_morph_grid,
    summarize,
    write_summary_json,
    write_trials_csv,
)
from .metrics import (
    anti_entropy,
    boundary_counts,
    compression_factor,
    cross_split_f1,
    derived_metrics,
    f1_score,
    token_span_counts,
    token_stats,
)
from .morphology import (
    AffixInventory,
    build_morph_model,
    filter_lexicon,
    load_affixes,
    load_lexicon,
    weighted_morph_f1,
)
from .ngram import build_model, load_model, save_model
from .segmenter import SegmenterParams, segment_corpus


class UsageError(Exception):
    """Invalid flag combination detected after parsing."""


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1, not argparse's default 2
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _round9(value):
    return None if value is None else float(f"{value:.9g}")


def _default_jobs() -> int:
    return os.cpu_count() or 1


def _add_params_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, required=True, help="n-gram order")
    parser.add_argument("--peak", type=float, required=True, help="peak threshold in [0,1]")
    parser.add_argument("--prune", type=int, default=0, help="minimum edge count kept")
    parser.add_argument("--mode", choices=("fwd", "bwd", "union"), default="union")


def _params_from(args: argparse.Namespace) -> SegmenterParams:
    return SegmenterParams(args.n, args.peak, args.prune, MODE_LONG[args.mode])


def _config_dict(args: argparse.Namespace) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True))


def cmd_build_model(args: argparse.Namespace) -> int:
    corpus = load_text(args.infile)
    model = build_model(corpus, args.n_max)
    save_model(model, args.out)
    print(f"built model from {len(corpus.lines)} lines -> {args.out}", file=sys.stderr)
    return 0


def cmd_tokenize(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    corpus = load_text(args.input)
    segs = segment_corpus(model, corpus, _params_from(args), jobs=args.jobs)
    token_lines = [s.tokens for s in segs]
    if args.out:
        save_segmented(token_lines, args.out)
    else:
        for tokens in token_lines:
            print(" ".join(escape_token(t) for t in tokens))
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    selected = args.metrics
    pred = load_segmented(args.pred)
    report = {k: None for k in ("f1", "anti_entropy", "compression_factor",
                                "reciprocal_cf", "csf1", "avg3", "avg2", "product")}

    if selected in ("all", "f1"):
        if not args.gold:
            raise UsageError("--gold is required for the f1 metric")
        gold = load_gold(args.gold)
        counts_of = token_span_counts if args.span_f1 else boundary_counts
        report["f1"] = f1_score(counts_of(pred.lines, gold.lines))
    if selected in ("all", "se", "cf"):
        stats = token_stats(pred.lines, drop_whitespace_tokens=not args.keep_ws_tokens)
        if selected in ("all", "se"):
            report["anti_entropy"] = anti_entropy(stats)
        if selected in ("all", "cf"):
            report["compression_factor"] = compression_factor(stats)
            report["reciprocal_cf"] = 1.0 / report["compression_factor"]
    if selected in ("all", "csf1"):
        needed = [args.train, args.test, args.n, args.peak]
        if any(v is None for v in needed):
            raise UsageError("--train, --test, --n and --peak are required for the csf1 metric")
        params = SegmenterParams(args.n, args.peak, args.prune, MODE_LONG[args.mode])
        report["csf1"] = cross_split_f1(load_text(args.train), load_text(args.test), params, args.n_max)
    if selected == "all":
        avg3, avg2, product = derived_metrics(
            report["anti_entropy"], report["compression_factor"], report["csf1"]
        )
        report["avg3"], report["avg2"], report["product"] = avg3, avg2, product

    payload = {k: _round9(v) for k, v in report.items()}
    payload["config"] = _config_dict(args)
    _emit_json(payload)
    return 0


def _sampled(test: TextCorpus, gold: GoldSegmentation, count: int | None, seed: int):
    if count is None or count >= len(test.lines):
        return test, gold
    idx = sample_indices(len(test.lines), count, seed)
    return (
        TextCorpus(tuple(test.lines[i] for i in idx), f"{test.source_id}/sample{count}s{seed}"),
        GoldSegmentation(tuple(gold.lines[i] for i in idx), gold.dropped),
    )


def cmd_grid_search(args: argparse.Namespace) -> int:
    train = load_text(args.train)
    test = load_text(args.test)
    gold = load_gold(args.gold)
    test, gold = _sampled(test, gold, args.sample_test, args.seed)
    spec = parse_grid_spec(args.grid)
    records = run_grid(train, test, gold, spec, args.n_max, jobs=args.jobs)
    config = _config_dict(args)
    write_trials_csv(records, args.out_csv, config, timings=args.timings)
    if args.out_summary:
        write_summary_json(summarize(records), args.out_summary, config)
    print(f"{len(records)} trials -> {args.out_csv}", file=sys.stderr)
    return 0


def _inventory_from(args: argparse.Namespace) -> AffixInventory:
    prefixes = load_affixes(args.prefixes) if args.prefixes else frozenset()
    suffixes = load_affixes(args.suffixes) if args.suffixes else frozenset()
    return AffixInventory(prefixes, suffixes, min_stem=args.min_stem)


def cmd_morph_eval(args: argparse.Namespace) -> int:
    lexicon = filter_lexicon(load_lexicon(args.lexicon), args.min_word_len)
    inventory = _inventory_from(args)
    model = build_morph_model(lexicon, args.n_max)
    f1, s_value, c_value = weighted_morph_f1(model, lexicon, inventory, _params_from(args))
    payload = {
        "f1": _round9(f1),
        "anti_entropy": _round9(s_value),
        "compression_factor": _round9(c_value),
        "avg2": _round9((s_value + c_value) / 2),
        "product": _round9(s_value * c_value),
        "config": _config_dict(args),
    }
    _emit_json(payload)
    return 0


def cmd_morph_grid(args: argparse.Namespace) -> int:
    lexicon = filter_lexicon(load_lexicon(args.lexicon), args.min_word_len)
    inventory = _inventory_from(args)
    spec = parse_grid_spec(args.grid)
    records = run_morph_grid(lexicon, inventory, spec, args.n_max, jobs=args.jobs)
    config = _config_dict(args)
    write_trials_csv(records, args.out_csv, config, timings=args.timings)
    if args.out_summary:
        write_summary_json(summarize(records), args.out_summary, config)
    print(f"{len(records)} trials -> {args.out_csv}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tlab", description="Unsupervised text segmentation laboratory")
    parser.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    parser.add_argument("--jobs", type=int, default=_default_jobs(), help="worker count for batch paths")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("build-model", help="count n-gram transitions of a corpus")
    p.add_argument("--in", dest="infile", required=True, help="raw corpus, one line per entry")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--out", required=True, help="model file to write")
    p.set_defaults(func=cmd_build_model)

    p = sub.add_parser("tokenize", help="segment a corpus with a trained model")
    p.add_argument("--model", required=True)
    _add_params_flags(p)
    p.add_argument("input", help="raw corpus to segment")
    p.add_argument("--out", help="output file (gold format); stdout when omitted")
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("evaluate", help="score a segmentation and report metrics")
    p.add_argument("--pred", required=True, help="tokenized file (gold format)")
    p.add_argument("--gold", help="reference segmentation")
    p.add_argument("--train", help="training corpus, needed for csf1")
    p.add_argument("--test", help="test corpus, needed for csf1")
    p.add_argument("--metrics", choices=("all", "f1", "se", "cf", "csf1"), default="all")
    p.add_argument("--n", type=int, help="order for csf1 segmentation")
    p.add_argument("--peak", type=float, help="peak threshold for csf1 segmentation")
    p.add_argument("--prune", type=int, default=0)
    p.add_argument("--mode", choices=("fwd", "bwd", "union"), default="union")
    p.add_argument("--n-max", type=int, default=7)
    p.add_argument("--keep-ws-tokens", action="store_true",
                   help="keep whitespace-only tokens in token statistics")
    p.add_argument("--span-f1", action="store_true",
                   help="score whole token spans instead of boundaries")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("grid-search", help="sweep hyper-parameters on a corpus")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--grid", default=DEFAULT_GRID, help=f"axis spec, default {DEFAULT_GRID!r}")
    p.add_argument("--out-csv", required=True)
    p.add_argument("--out-summary")
    p.add_argument("--sample-test", type=int, help="seeded sample of test lines")
    p.add_argument("--timings", action="store_true", help="record real wall times in the CSV")
    p.set_defaults(func=cmd_grid_search)

    p = sub.add_parser("morph-eval", help="score subword segmentation of a lexicon")
    p.add_argument("--lexicon", required=True, help="word<TAB>count file")
    p.add_argument("--prefixes", help="prefix dictionary file")
    p.add_argument("--suffixes", help="suffix dictionary file")
    p.add_argument("--min-stem", type=int, default=3)
    p.add_argument("--min-word-len", type=int, default=0)
    _add_params_flags(p)
    p.add_argument("--n-max", type=int, default=7)
    p.set_defaults(func=cmd_morph_eval)

    p = sub.add_parser("morph-grid", help="sweep hyper-parameters on a lexicon")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--prefixes")
    p.add_argument("--suffixes")
    p.add_argument("--min-stem", type=int, default=3)
    p.add_argument("--min-word-len", type=int, default=0)
    p.add_argument("--grid", default=DEFAULT_GRID)
    p.add_argument("--n-max", type=int, default=7)
    p.add_argument("--out-csv", required=True)
    p.add_argument("--out-summary")
    p.add_argument("--timings", action="store_true")
    p.set_defaults(func=cmd_morph_grid)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
