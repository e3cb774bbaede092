"""Explanatory metrics and report emission.

Covers cyclomatic complexity and other per-function features, Pearson
correlations (with two-tailed p-values) between those features and IO
accuracy, syntax-error frequency tables, per-model correct-set
intersections, and JSON/Markdown/CSV report rendering.
"""

import csv
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path

from scipy.special import betainc

from . import lexing
from .equivalence import parse_signature
from .errors import DegenerateInput
from .lexing import TokenKind

log = logging.getLogger(__name__)

# Tokens that open a decision point in structured C code. For single-entry
# structured control flow, 1 + decision points equals the flow-graph
# E - N + 2P formulation without building the graph.
_DECISION_KEYWORDS = {"if", "for", "while", "case"}
_DECISION_OPERATORS = {"&&", "||", "?"}


def cyclomatic_complexity(c_function_text: str) -> int:
    """1 + number of decision points (if/for/while/case, &&, ||, ?:).

    Keyword scanning goes through the lexer, so comments and string
    literals never contribute. `do` is not counted separately: its paired
    `while` carries the loop's single decision.
    """
    stream = lexing.lex_c(c_function_text)
    count = 1
    has_goto = False
    for tok in stream:
        if tok.kind is TokenKind.KEYWORD and tok.text in _DECISION_KEYWORDS:
            count += 1
        elif tok.kind is TokenKind.OPERATOR and tok.text in _DECISION_OPERATORS:
            count += 1
        elif tok.kind is TokenKind.KEYWORD and tok.text == "goto":
            has_goto = True
    if has_goto:
        log.warning("goto present: decision-point counting may diverge from the flow graph")
    return count


@dataclass
class FunctionMetrics:
    loc: int
    tokens: int
    cyclo: int
    params: int
    pointers: int


def function_metrics(c_function_text: str) -> FunctionMetrics:
    """LOC, token count, cyclomatic complexity, and parameter features."""
    lines = [l for l in c_function_text.strip().split("\n")]
    sig = parse_signature(c_function_text)
    return FunctionMetrics(
        loc=len(lines),
        tokens=len(lexing.lex_c(c_function_text)),
        cyclo=cyclomatic_complexity(c_function_text),
        params=len(sig.params),
        pointers=sig.n_pointers,
    )


@dataclass
class CorrelationResult:
    r: float
    p_value: float
    n: int

    @property
    def significant(self):
        return self.p_value < 0.05


def _student_t_sf2(t: float, df: int) -> float:
    """Two-tailed tail probability of Student's t, via the regularized
    incomplete beta function: P(|T| >= t) = I_{df/(df+t^2)}(df/2, 1/2)."""
    x = df / (df + t * t)
    return float(betainc(df / 2.0, 0.5, x))


def pearson(x, y) -> CorrelationResult:
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    n = len(x)
    if n != len(y) or n < 3:
        raise DegenerateInput("need two vectors of equal length >= 3")
    mx = sum(x) / n
    my = sum(y) / n
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateInput("constant vector: correlation undefined")
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    r = sxy / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        p = 0.0
    else:
        t = r * math.sqrt((n - 2) / (1.0 - r * r))
        p = _student_t_sf2(abs(t), n - 2)
    return CorrelationResult(r=r, p_value=p, n=n)


# Per-function evaluation rows: the Table-10-shaped record every report
# and correlation is computed from.
@dataclass
class FunctionReport:
    id: str
    io_passed: int
    io_total: int
    syntax_ok: bool
    bleu: float
    metrics: FunctionMetrics | None = None

    @property
    def io_ok(self):
        return self.io_total > 0 and self.io_passed == self.io_total

    @property
    def io_rate(self):
        return self.io_passed / self.io_total if self.io_total else 0.0


CORRELATION_COLUMNS = ("Syntax", "BLEU", "LOC", "Tokens", "Cyclo", "Params", "Pointers")


def correlation_table(reports, io_variable: str = "binary"):
    """Pearson r of each feature against IO accuracy.

    io_variable chooses the dependent variable: "binary" (all tests
    passed, the x/64-style accounting) or "rate" (pass fraction).
    """
    rows = [r for r in reports if r.metrics is not None]
    if io_variable == "binary":
        io = [1.0 if r.io_ok else 0.0 for r in rows]
    elif io_variable == "rate":
        io = [r.io_rate for r in rows]
    else:
        raise ValueError(f"unknown io_variable: {io_variable}")
    columns = {
        "Syntax": [1.0 if r.syntax_ok else 0.0 for r in rows],
        "BLEU": [r.bleu for r in rows],
        "LOC": [float(r.metrics.loc) for r in rows],
        "Tokens": [float(r.metrics.tokens) for r in rows],
        "Cyclo": [float(r.metrics.cyclo) for r in rows],
        "Params": [float(r.metrics.params) for r in rows],
        "Pointers": [float(r.metrics.pointers) for r in rows],
    }
    return [(name, pearson(values, io)) for name, values in columns.items()]


def intersections(correct_sets: dict, reference_model: str) -> dict:
    """|A ∩ B| and |A| for each model A against the reference model's set B."""
    ref = correct_sets[reference_model]
    return {
        model: (len(ids & ref), len(ids)) for model, ids in correct_sets.items()
    }


def syntax_error_table(verdicts):
    """Normalized diagnostics ranked by frequency (count desc, then text)."""
    freqs = {}
    for v in verdicts:
        if v.ok:
            continue
        for msg in v.error_messages:
            freqs[msg] = freqs.get(msg, 0) + 1
    return sorted(freqs.items(), key=lambda kv: (-kv[1], kv[0]))


def length_comparison(model_lengths: dict, ground_truth: float):
    rows = sorted(model_lengths.items())
    rows.append(("Ground truth", ground_truth))
    return rows


def _fmt_p(p: float) -> str:
    return f"{p:.3g}" if p else "0"


def emit_report(reports, out_dir, model_name="model", corpus_bleu=None,
                correlations=None, error_table=None) -> dict:
    """Write report.json, report.md and fine_grained.csv to out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    n = len(reports)
    io_correct = sum(1 for r in reports if r.io_ok)
    io_evaluated = sum(1 for r in reports if r.io_total > 0)
    syntax_ok = sum(1 for r in reports if r.syntax_ok)
    avg_bleu = sum(r.bleu for r in reports) / n if n else 0.0
    summary = {
        "model": model_name,
        "functions": n,
        "io_correct": io_correct,
        "io_evaluated": io_evaluated,
        "syntax_ok": syntax_ok,
        "bleu_sentence_avg": round(avg_bleu, 2),
    }
    if corpus_bleu is not None:
        summary["bleu_corpus"] = round(corpus_bleu, 2)

    payload = {
        "summary": summary,
        "functions": [
            {
                "id": r.id,
                "io_passed": r.io_passed,
                "io_total": r.io_total,
                "syntax_ok": r.syntax_ok,
                "bleu": round(r.bleu, 2),
                **(
                    {
                        "loc": r.metrics.loc,
                        "tokens": r.metrics.tokens,
                        "cyclo": r.metrics.cyclo,
                        "params": r.metrics.params,
                        "pointers": r.metrics.pointers,
                    }
                    if r.metrics
                    else {}
                ),
            }
            for r in reports
        ],
    }
    if correlations:
        payload["correlations"] = {
            name: {"r": round(c.r, 3), "p": _fmt_p(c.p_value), "significant": c.significant}
            for name, c in correlations
        }
    if error_table:
        payload["syntax_errors"] = [{"message": m, "count": c} for m, c in error_table]
    with open(out / "report.json", "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")

    with open(out / "fine_grained.csv", "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(
            ["Function", "IO", "Syntax", "BLEU", "LOC", "TOKENS", "CYCLO", "PARAMS", "POINTERS"]
        )
        for r in reports:
            m = r.metrics
            writer.writerow(
                [
                    r.id,
                    int(r.io_ok),
                    int(r.syntax_ok),
                    round(r.bleu, 2),
                    m.loc if m else "",
                    m.tokens if m else "",
                    m.cyclo if m else "",
                    m.params if m else "",
                    m.pointers if m else "",
                ]
            )

    md = [f"# Evaluation report: {model_name}", ""]
    md.append(f"- Functions: {n}")
    if io_evaluated:
        md.append(f"- IO correct: {io_correct}/{io_evaluated}")
    md.append(f"- Syntactically valid: {syntax_ok}/{n}")
    if corpus_bleu is not None:
        md.append(f"- Corpus BLEU: {corpus_bleu:.2f}")
    md.append(f"- Avg sentence BLEU: {avg_bleu:.2f}")
    if correlations:
        md += ["", "## Correlations with IO accuracy", "",
               "| Metric | r | p | significant |", "|---|---|---|---|"]
        for name, c in correlations:
            md.append(f"| {name} | {c.r:.3f} | {_fmt_p(c.p_value)} | {'yes' if c.significant else 'no'} |")
    if error_table:
        md += ["", "## Frequent syntax errors", ""]
        for msg, count in error_table:
            md.append(f"- {count} × `{msg}`")
    (out / "report.md").write_text("\n".join(md) + "\n", encoding="utf-8")
    return payload
