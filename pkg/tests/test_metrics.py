"""Translation metrics: BLEU, assembler syntax checking, beam selection."""

import math
import random
from collections import Counter

import pytest

from neurocc.errors import EmptyInput, LengthMismatch
from neurocc.lexing import lex_gas
from neurocc.metrics import (
    PredictionSet,
    bleu,
    check_syntax,
    length_stats,
    normalize_diagnostics,
    read_predictions,
    select_best_hypothesis,
    sentence_bleu,
    write_predictions,
)


def reference_bleu(hypotheses, references):
    """Naive BLEU-4 used as an independent cross-check.

    Re-derives everything from the definition: clipped n-gram matches over
    totals per order, geometric mean, exponential brevity penalty.
    """
    def ngrams(toks, n):
        return Counter(tuple(toks[i:i + n]) for i in range(len(toks) - n + 1))

    hyp_len = sum(len(h.split()) for h in hypotheses)
    ref_len = sum(len(r.split()) for r in references)
    product = 1.0
    for n in range(1, 5):
        match = 0
        total = 0
        for h, r in zip(hypotheses, references):
            hc = ngrams(h.split(), n)
            rc = ngrams(r.split(), n)
            match += sum(min(v, rc[g]) for g, v in hc.items())
            total += max(len(h.split()) - n + 1, 0)
        if total == 0 or match == 0:
            return 0.0
        product *= match / total
    bp = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    return 100.0 * bp * product ** 0.25


class TestBleu:
    def test_identical_is_exactly_100(self):
        lines = ["movl %eax , %edx <newline> ret <newline>"]
        assert bleu(lines, lines).score == 100.0

    def test_short_hypothesis_brevity_penalty(self):
        # 4 of 5 reference tokens, all n-grams match: score = 100 * exp(1 - 5/4)
        result = bleu(["a b c d"], ["a b c d e"])
        assert result.precisions == [1.0, 1.0, 1.0, 1.0]
        assert result.brevity_penalty == pytest.approx(math.exp(-0.25))
        assert result.score == pytest.approx(77.8800783, abs=1e-6)

    def test_counts_are_clipped(self):
        result = bleu(["the the the the"], ["the cat"])
        assert result.precisions[0] == 0.25
        assert result.score == 0.0

    def test_no_overlap_is_zero(self):
        assert bleu(["a b c d"], ["e f g h"]).score == 0.0

    def test_empty_hypothesis_is_zero(self):
        assert bleu([""], ["a b c"]).score == 0.0

    def test_length_mismatch_rejected(self):
        with pytest.raises(LengthMismatch):
            bleu(["a"], ["a", "b"])

    def test_corpus_level_pools_counts(self):
        hyps = ["a b c d", "w x y z"]
        refs = ["a b c d", "p q r s"]
        pooled = bleu(hyps, refs).score
        assert 0.0 < pooled < 100.0
        assert pooled == pytest.approx(reference_bleu(hyps, refs), abs=1e-9)

    def test_matches_naive_implementation_randomized(self):
        rng = random.Random(99)
        vocab = ["movl", "addl", "ret", "%eax", "%edx", ",", "<newline>", "$1"]
        for _ in range(50):
            hyps = [
                " ".join(rng.choices(vocab, k=rng.randint(4, 20)))
                for _ in range(rng.randint(1, 6))
            ]
            refs = [
                " ".join(rng.choices(vocab, k=rng.randint(4, 20)))
                for _ in hyps
            ]
            assert bleu(hyps, refs).score == pytest.approx(
                reference_bleu(hyps, refs), abs=1e-6
            )


class TestSentenceBleu:
    def test_smoothing_avoids_hard_zero(self):
        # 1-3 gram overlap but no 4-gram: corpus-level is 0, smoothed is not.
        hyp = "a b c x a b c"
        ref = "a b c y a b c"
        assert bleu([hyp], [ref]).score == 0.0
        assert sentence_bleu(hyp, ref).score > 0.0

    def test_identical_is_100(self):
        assert sentence_bleu("a b c d e", "a b c d e").score == 100.0


class TestDiagnostics:
    def test_location_prefix_stripped(self):
        stderr = (
            "/tmp/x.s: Assembler messages:\n"
            "/tmp/x.s:3: Error: no such instruction: `movx %eax'\n"
            "/tmp/x.s:7: Error: junk at end of line\n"
        )
        assert normalize_diagnostics(stderr) == [
            "no such instruction: `movx %eax'",
            "junk at end of line",
        ]

    def test_no_line_number_variant(self):
        assert normalize_diagnostics("x.s: Error: open CFI at the end of file; missing .cfi_endproc directive") == [
            "open CFI at the end of file; missing .cfi_endproc directive"
        ]

    def test_non_error_lines_ignored(self):
        assert normalize_diagnostics("ordinary output\n") == []


class TestCheckSyntax:
    def test_reference_assembly_accepted(self, sample_pairs, toolchain):
        pair = sample_pairs[0]
        verdict = check_syntax(pair.asm_tokens, pair.id, toolchain)
        assert verdict.ok
        assert verdict.error_messages == []

    def test_bad_mnemonic_rejected(self, toolchain):
        tokens = lex_gas("movx %eax , %edx\nret\n")
        verdict = check_syntax(tokens, "f", toolchain)
        assert not verdict.ok
        assert any("movx" in msg for msg in verdict.error_messages)

    def test_truncation_reported_as_open_cfi(self, sample_pairs, toolchain):
        pair = sample_pairs[0]
        cut = pair.asm_tokens[: int(len(pair.asm_tokens) * 0.6)]
        verdict = check_syntax(cut, pair.id, toolchain)
        assert not verdict.ok
        assert any("CFI" in msg or "cfi" in msg for msg in verdict.error_messages)


class TestLengthStats:
    def test_average_token_count(self):
        assert length_stats(["a b", "c d e f"]) == 3.0

    def test_empty_rejected(self):
        with pytest.raises(EmptyInput):
            length_stats([])


class TestBeamSelection:
    def test_picks_highest_score(self):
        pred = PredictionSet(id="f", hypotheses=["bad", "good", "best"])
        scores = {"bad": 1.0, "good": 5.0, "best": 9.0}
        index, score = select_best_hypothesis(pred, scores.__getitem__)
        assert (index, score) == (2, 9.0)

    def test_tie_keeps_beam_order(self):
        pred = PredictionSet(id="f", hypotheses=["a", "b", "c"])
        index, _ = select_best_hypothesis(pred, lambda h: 1.0)
        assert index == 0

    def test_evaluation_error_does_not_abort(self):
        pred = PredictionSet(id="f", hypotheses=["boom", "fine"])

        def score(h):
            if h == "boom":
                raise RuntimeError("scorer crashed")
            return 2.0

        index, value = select_best_hypothesis(pred, score)
        assert (index, value) == (1, 2.0)

    def test_all_errors_fall_back_to_first(self):
        pred = PredictionSet(id="f", hypotheses=["x", "y"])

        def score(h):
            raise RuntimeError

        index, value = select_best_hypothesis(pred, score)
        assert (index, value) == (0, 0.0)


class TestPredictionFiles:
    def test_round_trip(self, tmp_path):
        preds = [
            PredictionSet(id="a", hypotheses=["movl , ret", "ret"]),
            PredictionSet(id="b", hypotheses=["ret"]),
        ]
        path = tmp_path / "predictions.jsonl"
        write_predictions(preds, path)
        loaded = read_predictions(path)
        assert [(p.id, p.hypotheses) for p in loaded] == [
            ("a", ["movl , ret", "ret"]),
            ("b", ["ret"]),
        ]

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "predictions.jsonl"
        path.write_text('{"id": "a", "hypotheses": ["ret"]}\n\n')
        assert len(read_predictions(path)) == 1
