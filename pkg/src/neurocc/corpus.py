"""Parallel C / assembly corpus construction.

Pipeline: compile each unit at -O0, strip boilerplate on both sides,
pre-tokenize, deduplicate, length-filter, split, and write
one-program-per-line token files.
"""

import hashlib
import json
import random
import re
from dataclasses import dataclass
from pathlib import Path

from . import lexing
from .errors import (
    CompileError,
    EmptyCorpus,
    FunctionNotFound,
    InsufficientPairs,
    LineCountMismatch,
    UnterminatedLiteral,
)
from .lexing import Language, NEWLINE_SENTINEL, Token, TokenKind, TokenStream
from .toolchain import ToolchainConfig, compile_to_asm

DEFAULT_MAX_COMBINED = 314
SPLIT_NAMES = ("train", "valid", "test")


@dataclass
class SourceUnit:
    """One compilable C file holding exactly one target function."""

    id: str
    full_source: str
    function_name: str


@dataclass
class FunctionPair:
    id: str
    c_tokens: TokenStream
    asm_tokens: TokenStream

    @property
    def c_len(self):
        return len(self.c_tokens)

    @property
    def asm_len(self):
        return len(self.asm_tokens)


@dataclass
class SplitSpec:
    valid_count: int = 1000
    test_count: int = 1000
    seed: int = 42


@dataclass
class CorpusStats:
    n_pairs: int
    total_c_tokens: int
    total_asm_tokens: int

    @property
    def avg_c_tokens(self):
        return self.total_c_tokens / self.n_pairs

    @property
    def avg_asm_tokens(self):
        return self.total_asm_tokens / self.n_pairs


def compile_reference(unit: SourceUnit, toolchain: ToolchainConfig) -> str:
    """Full assembly text for the unit, compiled with optimizations off."""
    return compile_to_asm(unit.full_source, toolchain)


def strip_asm_boilerplate(
    asm_text: str, function_name: str, strip_endbr64: bool = True
) -> str:
    """Keep the region from `name:` through its `.cfi_endproc`, inclusive.

    File-level directives (.file, .globl, .size, ...) fall outside that
    region and are dropped. `endbr64` lines are removed by default so
    corpora are portable across toolchain versions that differ on CET.
    """
    lines = asm_text.split("\n")
    start = None
    label = function_name + ":"
    for i, line in enumerate(lines):
        if line.strip() == label:
            start = i
            break
    if start is None:
        raise FunctionNotFound(f"no label {label} in assembly")
    end = None
    for i in range(start + 1, len(lines)):
        if lines[i].strip() == ".cfi_endproc":
            end = i
            break
    if end is None:
        raise FunctionNotFound(f"no .cfi_endproc after {label}")
    body = lines[start : end + 1]
    if strip_endbr64:
        body = [ln for ln in body if ln.strip() != "endbr64"]
    return "\n".join(body) + "\n"


def _function_def_start(source: str, function_name: str):
    """Offset of the definition (not a prototype/call) of function_name."""
    for m in re.finditer(r"\b%s\s*\(" % re.escape(function_name), source):
        # Find the matching ')' of the parameter list, then require '{'.
        depth = 0
        i = m.end() - 1
        while i < len(source):
            if source[i] == "(":
                depth += 1
            elif source[i] == ")":
                depth -= 1
                if depth == 0:
                    break
            i += 1
        else:
            continue
        j = i + 1
        while j < len(source) and source[j].isspace():
            j += 1
        if j < len(source) and source[j] == "{":
            # Back up over the return type: past the previous ';' or '}',
            # then skip preprocessor/comment/blank lines forward again.
            prefix = source[: m.start()]
            k = max(prefix.rfind(";"), prefix.rfind("}")) + 1
            for line in source[k : m.start()].split("\n"):
                stripped = line.strip()
                if stripped and not stripped.startswith(("#", "//")):
                    break
                k += len(line) + 1
            return min(k, m.start()), j
    return None


def strip_c_boilerplate(unit: SourceUnit) -> str:
    """Return only the target function's definition text.

    Includes, typedefs, macros, and auxiliary declarations are dropped.
    """
    source = unit.full_source
    found = _function_def_start(source, unit.function_name)
    if found is None:
        raise FunctionNotFound(f"no definition of {unit.function_name}")
    start, brace = found
    depth = 0
    i = brace
    in_str = None
    while i < len(source):
        c = source[i]
        if in_str:
            if c == "\\":
                i += 2
                continue
            if c == in_str:
                in_str = None
        elif c in "\"'":
            in_str = c
        elif source.startswith("//", i):
            i = source.find("\n", i)
            if i < 0:
                break
            continue
        elif source.startswith("/*", i):
            i = source.find("*/", i)
            if i < 0:
                break
            i += 2
            continue
        elif c == "{":
            depth += 1
        elif c == "}":
            depth -= 1
            if depth == 0:
                return source[start : i + 1].strip()
        i += 1
    raise FunctionNotFound(f"unbalanced braces in {unit.function_name}")


def make_pair(unit: SourceUnit, toolchain: ToolchainConfig) -> FunctionPair:
    """Compile one unit and pre-tokenize both sides."""
    asm_text = compile_reference(unit, toolchain)
    body = strip_asm_boilerplate(asm_text, unit.function_name, toolchain.strip_endbr64)
    c_text = strip_c_boilerplate(unit)
    return FunctionPair(
        id=unit.id,
        c_tokens=lexing.lex_c(c_text),
        asm_tokens=lexing.lex_gas(body),
    )


def filter_by_length(pairs, max_combined: int = DEFAULT_MAX_COMBINED):
    """Keep pairs whose combined token count fits the cap; order preserved."""
    return [p for p in pairs if p.c_len + p.asm_len <= max_combined]


def deduplicate(pairs):
    """Drop pairs whose C token sequence was already seen (leakage guard)."""
    seen = set()
    out = []
    for p in pairs:
        key = hashlib.sha256("\x00".join(p.c_tokens.texts()).encode()).hexdigest()
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


def split(pairs, spec: SplitSpec):
    """Deterministic shuffle + carve-off of valid/test; returns dict of lists."""
    if spec.valid_count + spec.test_count >= len(pairs):
        raise InsufficientPairs(
            f"{len(pairs)} pairs cannot supply valid={spec.valid_count} test={spec.test_count}"
        )
    shuffled = list(pairs)
    random.Random(spec.seed).shuffle(shuffled)
    valid = shuffled[: spec.valid_count]
    test = shuffled[spec.valid_count : spec.valid_count + spec.test_count]
    train = shuffled[spec.valid_count + spec.test_count :]
    return {"train": train, "valid": valid, "test": test}


def _pair_line(stream: TokenStream) -> str:
    return " ".join(stream.texts())


def write_corpus(splits: dict, out_dir) -> None:
    """Write `<split>.{c,asm}.tok` plus manifest.json, one program per line."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    for name in SPLIT_NAMES:
        pairs = splits.get(name, [])
        c_lines = [_pair_line(p.c_tokens) for p in pairs]
        a_lines = [_pair_line(p.asm_tokens) for p in pairs]
        (out / f"{name}.c.tok").write_text(
            "".join(l + "\n" for l in c_lines), encoding="utf-8"
        )
        (out / f"{name}.asm.tok").write_text(
            "".join(l + "\n" for l in a_lines), encoding="utf-8"
        )
        for p in pairs:
            manifest.append(
                {"id": p.id, "split": name, "c_len": p.c_len, "asm_len": p.asm_len}
            )
    with open(out / "manifest.json", "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")


def _parse_tok_line(line: str, language: Language) -> TokenStream:
    texts = line.split()
    tokens = []
    for t in texts:
        kind = TokenKind.NEWLINE if t == NEWLINE_SENTINEL else TokenKind.IDENTIFIER
        tokens.append(Token(t, kind))
    return TokenStream(tokens, language)


def read_corpus(corpus_dir) -> dict:
    """Inverse of write_corpus; token kinds other than <newline> are not
    reconstructed (corpus lines carry text only)."""
    out_dir = Path(corpus_dir)
    with open(out_dir / "manifest.json", encoding="utf-8") as f:
        manifest = json.load(f)
    ids = {name: [m["id"] for m in manifest if m["split"] == name] for name in SPLIT_NAMES}
    splits = {}
    for name in SPLIT_NAMES:
        c_lines = (out_dir / f"{name}.c.tok").read_text(encoding="utf-8").splitlines()
        a_lines = (out_dir / f"{name}.asm.tok").read_text(encoding="utf-8").splitlines()
        if len(c_lines) != len(a_lines) or len(c_lines) != len(ids[name]):
            raise LineCountMismatch(
                f"{name}: {len(c_lines)} C lines vs {len(a_lines)} ASM lines "
                f"vs {len(ids[name])} manifest entries"
            )
        splits[name] = [
            FunctionPair(
                id=i,
                c_tokens=_parse_tok_line(c, Language.C),
                asm_tokens=_parse_tok_line(a, Language.GAS),
            )
            for i, c, a in zip(ids[name], c_lines, a_lines)
        ]
    return splits


def corpus_stats(pairs) -> CorpusStats:
    pairs = list(pairs)
    if not pairs:
        raise EmptyCorpus("no pairs")
    return CorpusStats(
        n_pairs=len(pairs),
        total_c_tokens=sum(p.c_len for p in pairs),
        total_asm_tokens=sum(p.asm_len for p in pairs),
    )


def build_pairs(units, toolchain: ToolchainConfig, max_combined=DEFAULT_MAX_COMBINED):
    """Run pipeline steps 1-4 over units; returns (pairs, skip_log).

    Units that fail to compile, lex, or pass the length cap are skipped
    with a reason, never aborting the build.
    """
    pairs = []
    skipped = []
    for unit in units:
        try:
            pair = make_pair(unit, toolchain)
        except CompileError as exc:
            skipped.append((unit.id, "compile", exc.stderr.strip()))
            continue
        except (FunctionNotFound, UnterminatedLiteral) as exc:
            skipped.append((unit.id, "parse", str(exc)))
            continue
        if pair.c_len + pair.asm_len > max_combined:
            skipped.append((unit.id, "length", f"{pair.c_len}+{pair.asm_len}"))
            continue
        pairs.append(pair)
    before = len(pairs)
    pairs = deduplicate(pairs)
    if before != len(pairs):
        skipped.append(("*", "duplicate", f"{before - len(pairs)} collapsed"))
    return pairs, skipped
