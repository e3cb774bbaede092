"""`neurocc` command-line entry point.

Subcommands: build-corpus, bpe (learn/apply/decode), eval, analyze.
Exit codes: 0 success, 1 fatal error (e.g. missing toolchain), 2 bad usage.
"""

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import analysis, benchmark, corpus, equivalence, metrics, subword
from .errors import DegenerateInput, NeuroccError
from .lexing import detokenize_line, lex_gas
from .toolchain import ToolchainConfig


def _load_units(src_dir):
    units = []
    for path in sorted(Path(src_dir).glob("*.c")):
        units.append(
            corpus.SourceUnit(
                id=path.stem,
                full_source=path.read_text(encoding="utf-8"),
                function_name=path.stem,
            )
        )
    return units


def cmd_build_corpus(args):
    toolchain = ToolchainConfig() if not args.config else ToolchainConfig.from_file(args.config)
    units = _load_units(args.src)
    pairs, skipped = corpus.build_pairs(units, toolchain, max_combined=args.max_len)
    spec = corpus.SplitSpec(valid_count=args.valid, test_count=args.test, seed=args.seed)
    splits = corpus.split(pairs, spec)
    corpus.write_corpus(splits, args.out)
    stats = corpus.corpus_stats(pairs)
    for unit_id, reason, detail in skipped:
        print(f"skip {unit_id}: {reason} ({detail})", file=sys.stderr)
    print(f"pairs: {stats.n_pairs} (skipped {len(skipped)})")
    for name in corpus.SPLIT_NAMES:
        print(f"  {name}: {len(splits[name])}")
    print(
        f"tokens C: {stats.total_c_tokens} (avg {stats.avg_c_tokens:.2f})  "
        f"ASM: {stats.total_asm_tokens} (avg {stats.avg_asm_tokens:.2f})"
    )
    return 0


def _read_lines(path):
    return Path(path).read_text(encoding="utf-8").splitlines()


def cmd_bpe(args):
    if args.bpe_command == "learn":
        lines = []
        for p in args.input:
            lines.extend(_read_lines(p))
        model = subword.learn_bpe(lines, args.merges)
        model.save(args.output)
        stats = subword.subword_stats(model, lines)
        print(f"merges: {len(model.merges)}")
        print(f"subwords/token: {stats.subwords_per_token:.2f} "
              f"(avg length {stats.avg_sequence_length:.2f})")
        return 0
    model = subword.SubwordModel.load(args.model) if args.bpe_command == "apply" else None
    src = open(args.input, encoding="utf-8") if args.input else sys.stdin
    dst = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        for line in src:
            line = line.rstrip("\n")
            if args.bpe_command == "apply":
                dst.write(subword.encode(model, line) + "\n")
            else:
                dst.write(subword.decode(line) + "\n")
    finally:
        if src is not sys.stdin:
            src.close()
        if dst is not sys.stdout:
            dst.close()
    return 0


def _eval_benchmark(preds_by_id, args, toolchain):
    entries = benchmark.load_benchmark(args.bench)
    runner_timeout = args.timeout

    def eval_entry(entry):
        runner = equivalence.EquivalenceRunner(
            toolchain, timeout=runner_timeout, float_tolerance=entry.float_tolerance
        )
        c_text = corpus.strip_c_boilerplate(entry.unit)
        sig = equivalence.parse_signature(c_text)
        cases = equivalence.generate_tests(sig, entry.n_cases, entry.seed)
        runner.run_reference(entry.unit, sig, cases)
        ref_stream = runner.reference_body(entry.unit)
        ref_line = " ".join(ref_stream.texts())
        pred = preds_by_id.get(entry.unit.id)
        if pred is None or not pred.hypotheses:
            return analysis.FunctionReport(
                id=entry.unit.id, io_passed=0, io_total=entry.n_cases,
                syntax_ok=False, bleu=0.0,
                metrics=analysis.function_metrics(c_text),
            ), []

        def hyp_stream(line):
            return lex_gas(detokenize_line(line.split()))

        def score(line):
            if args.criterion == "bleu":
                return metrics.sentence_bleu(line, ref_line).score
            if args.criterion == "syntax":
                return 1.0 if metrics.check_syntax(
                    hyp_stream(line), entry.unit.function_name, toolchain
                ).ok else 0.0
            result = runner.run_equivalence(hyp_stream(line), entry.unit, cases)
            return float(result.passed)

        index, _ = metrics.select_best_hypothesis(pred, score)
        best = pred.hypotheses[index]
        stream = hyp_stream(best)
        verdict = metrics.check_syntax(stream, entry.unit.function_name, toolchain)
        io_result = runner.run_equivalence(stream, entry.unit, cases)
        return analysis.FunctionReport(
            id=entry.unit.id,
            io_passed=io_result.passed,
            io_total=io_result.total,
            syntax_ok=verdict.ok,
            bleu=metrics.sentence_bleu(best, ref_line).score,
            metrics=analysis.function_metrics(c_text),
        ), ([] if verdict.ok else [verdict])

    with ThreadPoolExecutor(max_workers=toolchain.workers()) as pool:
        results = list(pool.map(eval_entry, entries))
    results.sort(key=lambda pair: pair[0].id)
    reports = [r for r, _ in results]
    verdicts = [v for _, vs in results for v in vs]
    try:
        correlations = analysis.correlation_table(reports)
    except DegenerateInput:
        correlations = None
    error_table = analysis.syntax_error_table(verdicts)
    return reports, correlations, error_table, None


def _eval_corpus(preds_by_id, args, toolchain):
    splits = corpus.read_corpus(args.corpus)
    pairs = splits[args.split]
    reports = []
    hyp_lines = []
    ref_lines = []
    verdicts = []
    for pair in pairs:
        ref_line = " ".join(pair.asm_tokens.texts())
        pred = preds_by_id.get(pair.id)
        if pred is None or not pred.hypotheses:
            reports.append(
                analysis.FunctionReport(pair.id, 0, 0, False, 0.0)
            )
            hyp_lines.append("")
            ref_lines.append(ref_line)
            continue

        def score(line):
            # corpus mode has no IO oracle, so "io" falls back to BLEU
            if args.criterion == "syntax":
                stream = lex_gas(detokenize_line(line.split()))
                return 1.0 if metrics.check_syntax(stream, pair.id, toolchain).ok else 0.0
            return metrics.sentence_bleu(line, ref_line).score

        index, _ = metrics.select_best_hypothesis(pred, score)
        best = pred.hypotheses[index]
        stream = lex_gas(detokenize_line(best.split()))
        verdict = metrics.check_syntax(stream, pair.id, toolchain)
        verdicts.append(verdict)
        reports.append(
            analysis.FunctionReport(
                pair.id, 0, 0, verdict.ok, metrics.sentence_bleu(best, ref_line).score
            )
        )
        hyp_lines.append(best)
        ref_lines.append(ref_line)
    corpus_bleu = metrics.bleu(hyp_lines, ref_lines).score
    return reports, None, analysis.syntax_error_table(verdicts), corpus_bleu


def cmd_eval(args):
    toolchain = ToolchainConfig() if not args.config else ToolchainConfig.from_file(args.config)
    preds = metrics.read_predictions(args.pred)
    preds_by_id = {p.id: p for p in preds}
    if args.bench:
        reports, correlations, error_table, corpus_bleu = _eval_benchmark(
            preds_by_id, args, toolchain
        )
    else:
        reports, correlations, error_table, corpus_bleu = _eval_corpus(
            preds_by_id, args, toolchain
        )
    payload = analysis.emit_report(
        reports,
        args.out,
        model_name=args.model_name,
        corpus_bleu=corpus_bleu,
        correlations=correlations,
        error_table=error_table,
    )
    print(json.dumps(payload["summary"], indent=2))
    return 0


def cmd_analyze(args):
    payloads = []
    for path in args.reports:
        with open(path, encoding="utf-8") as f:
            payloads.append(json.load(f))
    for payload in payloads:
        s = payload["summary"]
        io = f'{s["io_correct"]}/{s["io_evaluated"]}' if s.get("io_evaluated") else "n/a"
        print(f'{s["model"]}: IO {io}, syntax {s["syntax_ok"]}/{s["functions"]}, '
              f'BLEU {s.get("bleu_corpus", s["bleu_sentence_avg"])}')
    correct_sets = {
        p["summary"]["model"]: {
            f["id"] for f in p["functions"] if f["io_total"] and f["io_passed"] == f["io_total"]
        }
        for p in payloads
    }
    best = max(payloads, key=lambda p: p["summary"]["io_correct"])["summary"]["model"]
    print(f"\nIntersections with best model ({best}):")
    for model, (inter, size) in sorted(analysis.intersections(correct_sets, best).items()):
        print(f"  {model}: {inter}/{size}")
    all_errors = {}
    for p in payloads:
        for row in p.get("syntax_errors", []):
            all_errors[row["message"]] = all_errors.get(row["message"], 0) + row["count"]
    if all_errors:
        print("\nFrequent syntax errors:")
        for msg, count in sorted(all_errors.items(), key=lambda kv: (-kv[1], kv[0])):
            print(f"  {count} × {msg}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="neurocc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-corpus", help="compile, strip, tokenize, filter, split")
    p.add_argument("--src", required=True, help="directory of .c units (one function each)")
    p.add_argument("--out", required=True)
    p.add_argument("--max-len", type=int, default=corpus.DEFAULT_MAX_COMBINED)
    p.add_argument("--valid", type=int, default=1000)
    p.add_argument("--test", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--config", help="toolchain config JSON")
    p.set_defaults(func=cmd_build_corpus)

    p = sub.add_parser("bpe", help="learn or apply subword segmentation")
    bpe_sub = p.add_subparsers(dest="bpe_command", required=True)
    learn = bpe_sub.add_parser("learn")
    learn.add_argument("--input", nargs="+", required=True)
    learn.add_argument("--merges", type=int, required=True)
    learn.add_argument("--output", required=True)
    learn.set_defaults(func=cmd_bpe)
    for name in ("apply", "decode"):
        q = bpe_sub.add_parser(name)
        if name == "apply":
            q.add_argument("--model", required=True)
        q.add_argument("--input")
        q.add_argument("--output")
        q.set_defaults(func=cmd_bpe)

    p = sub.add_parser("eval", help="score a predictions file")
    p.add_argument("--pred", required=True, help="predictions JSONL")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--bench", help="benchmark manifest (enables IO evaluation)")
    group.add_argument("--corpus", help="corpus directory (BLEU + syntax only)")
    p.add_argument("--split", default="test")
    p.add_argument("--criterion", choices=("io", "bleu", "syntax"), default="io")
    p.add_argument("--out", default="eval-report")
    p.add_argument("--model-name", default="model")
    p.add_argument("--timeout", type=float, default=equivalence.DEFAULT_TIMEOUT)
    p.add_argument("--config", help="toolchain config JSON")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("analyze", help="cross-model analysis of eval reports")
    p.add_argument("reports", nargs="+")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NeuroccError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
