"""Scoring of predicted assembly: BLEU, syntactic accuracy, lengths.

BLEU is BLEU-4, case-sensitive, computed over pre-BPE tokens. Corpus-level
scores use raw clipped counts; sentence-level scores apply add-one
smoothing to zero n-gram counts so single functions get usable scores.
"""

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field

from .errors import EmptyInput, LengthMismatch
from .lexing import TokenStream, detokenize
from .toolchain import ToolchainConfig, assemble, wrap_function_body

MAX_NGRAM_ORDER = 4


@dataclass
class BleuScore:
    score: float  # percentage in [0, 100]
    precisions: list
    brevity_penalty: float
    hyp_len: int
    ref_len: int


@dataclass
class SyntaxVerdict:
    ok: bool
    error_messages: list = field(default_factory=list)


@dataclass
class PredictionSet:
    id: str
    hypotheses: list  # pre-BPE token lines, best beam first


def _ngram_counts(tokens, order):
    return Counter(tuple(tokens[i : i + order]) for i in range(len(tokens) - order + 1))


def bleu(hypotheses, references, corpus_level: bool = True) -> BleuScore:
    """BLEU-4 with clipped modified precision and brevity penalty.

    Inputs are parallel lists of space-separated token lines.
    """
    if len(hypotheses) != len(references):
        raise LengthMismatch(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    matches = [0] * MAX_NGRAM_ORDER
    totals = [0] * MAX_NGRAM_ORDER
    hyp_len = 0
    ref_len = 0
    for hyp_line, ref_line in zip(hypotheses, references):
        hyp = hyp_line.split()
        ref = ref_line.split()
        hyp_len += len(hyp)
        ref_len += len(ref)
        for order in range(1, MAX_NGRAM_ORDER + 1):
            hyp_counts = _ngram_counts(hyp, order)
            ref_counts = _ngram_counts(ref, order)
            totals[order - 1] += max(len(hyp) - order + 1, 0)
            matches[order - 1] += sum(
                min(c, ref_counts[g]) for g, c in hyp_counts.items()
            )
    precisions = []
    log_sum = 0.0
    degenerate = False
    for m, t in zip(matches, totals):
        if corpus_level:
            p = m / t if t > 0 else 0.0
        else:
            # add-one smoothing on zero counts, sentence-level only
            p = m / t if t > 0 and m > 0 else (m + 1) / (t + 1) if t > 0 else 0.0
        precisions.append(p)
        if p == 0.0:
            degenerate = True
        else:
            log_sum += math.log(p)
    if hyp_len == 0 or degenerate:
        return BleuScore(0.0, precisions, 0.0, hyp_len, ref_len)
    bp = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    score = 100.0 * bp * math.exp(log_sum / MAX_NGRAM_ORDER)
    return BleuScore(score, precisions, bp, hyp_len, ref_len)


def sentence_bleu(hypothesis: str, reference: str) -> BleuScore:
    return bleu([hypothesis], [reference], corpus_level=False)


# Diagnostics arrive as "path:line: Error: message"; strip the location so
# messages bucket stably across toolchain runs and scratch directories.
_DIAG = re.compile(r"^[^:\n]*:(?:\d+:)?\s*(?:Error|Warning|Fatal error):\s*(?P<msg>.+)$")


def normalize_diagnostics(stderr: str):
    messages = []
    for line in stderr.splitlines():
        m = _DIAG.match(line.strip())
        if m:
            messages.append(m.group("msg").strip())
    return messages


def check_syntax(
    asm_tokens: TokenStream, function_name: str, toolchain: ToolchainConfig
) -> SyntaxVerdict:
    """Detokenize, wrap with the canonical header/footer, and assemble."""
    text = wrap_function_body(function_name, detokenize(asm_tokens))
    ok, stderr, _ = assemble(text, toolchain)
    return SyntaxVerdict(ok=ok, error_messages=[] if ok else normalize_diagnostics(stderr))


def length_stats(prediction_lines) -> float:
    lines = list(prediction_lines)
    if not lines:
        raise EmptyInput("no prediction lines")
    return sum(len(l.split()) for l in lines) / len(lines)


def select_best_hypothesis(pred: PredictionSet, evaluate):
    """Pick the best of the beam hypotheses under a metric.

    `evaluate(hypothesis_line) -> float` scores one hypothesis under the
    chosen criterion (higher is better); evaluation errors score -inf so a
    bad hypothesis never aborts the set. Ties keep the lowest index, i.e.
    the highest beam rank.
    """
    assert pred.hypotheses, "prediction sets are never empty"
    best_index = 0
    best_score = -math.inf
    for i, hyp in enumerate(pred.hypotheses):
        try:
            score = evaluate(hyp)
        except Exception:
            score = -math.inf
        if score > best_score:
            best_index, best_score = i, score
    if best_score == -math.inf:
        best_score = 0.0
    return best_index, best_score


def read_predictions(path):
    """Read the shared JSON Lines prediction format."""
    preds = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            preds.append(PredictionSet(id=obj["id"], hypotheses=list(obj["hypotheses"])))
    return preds


def write_predictions(preds, path):
    with open(path, "w", encoding="utf-8") as f:
        for p in preds:
            f.write(json.dumps({"id": p.id, "hypotheses": p.hypotheses}) + "\n")
