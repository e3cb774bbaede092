"""Observational-equivalence testing of candidate assembly.

A generated C main drives the function under test with randomized inputs
and prints every observable (return value and final pointer contents) in a
fixed textual format. The reference compilation defines ground truth; a
candidate passes a case when its printed block matches the reference's,
with a small absolute tolerance for floats.

Observable format (bit-exact): one value per line, a `---` line between
cases, and a final `===` line.
"""

import random
import re
import tempfile
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from . import lexing
from .errors import CompileError, FunctionNotFound, HarnessBuildError, UnsupportedType
from .lexing import TokenStream, detokenize
from .toolchain import (
    ToolchainConfig,
    assemble,
    compile_object,
    compile_to_asm,
    link,
    run_binary,
    wrap_function_body,
)
from .corpus import SourceUnit, strip_asm_boilerplate
from .metrics import SyntaxVerdict, check_syntax

CASE_SEPARATOR = "---"
END_MARKER = "==="
DEFAULT_N_CASES = 9
DEFAULT_TIMEOUT = 5.0
DEFAULT_FLOAT_TOLERANCE = 1e-4
DEFAULT_ARRAY_LEN = 8

INT_RANGE = (-64, 64)
FLOAT_RANGE = (-8.0, 8.0)
ARRAY_LEN_RANGE = (1, 16)


class ParamKind(Enum):
    SCALAR_INT = "scalar_int"
    SCALAR_FLOAT = "scalar_float"
    POINTER_INT = "pointer_int"
    POINTER_FLOAT = "pointer_float"

    @property
    def is_pointer(self):
        return self in (ParamKind.POINTER_INT, ParamKind.POINTER_FLOAT)

    @property
    def is_float(self):
        return self in (ParamKind.SCALAR_FLOAT, ParamKind.POINTER_FLOAT)


class ReturnKind(Enum):
    VOID = "void"
    INT = "int"
    FLOAT = "float"


@dataclass
class Param:
    name: str
    kind: ParamKind
    c_type: str  # element type for pointers
    array_len_param: int | None = None  # index of the bounding scalar


@dataclass
class FunctionSignature:
    name: str
    return_kind: ReturnKind
    return_type: str
    params: list = field(default_factory=list)

    @property
    def n_pointers(self):
        return sum(1 for p in self.params if p.kind.is_pointer)


@dataclass
class IOTestCase:
    inputs: list  # one value (scalar) or list of values (array) per param
    observed: list | None = None  # printed lines captured from the reference


class IOVerdict(Enum):
    SYNTAX_ERROR = "SyntaxError"
    ZERO_PASSED = "ZeroPassed"
    SOME_PASSED = "SomePassed"
    ALL_PASSED = "AllPassed"


@dataclass
class IOResult:
    total: int
    passed: int
    verdict: IOVerdict
    syntax: SyntaxVerdict | None = None

    def __post_init__(self):
        if self.verdict is not IOVerdict.SYNTAX_ERROR:
            expected = (
                IOVerdict.ALL_PASSED
                if self.passed == self.total and self.total > 0
                else IOVerdict.ZERO_PASSED
                if self.passed == 0
                else IOVerdict.SOME_PASSED
            )
            assert self.verdict is expected, "verdict must match the counts"


_INT_TYPES = {"int", "long", "short", "char", "unsigned", "signed", "_Bool"}
_FLOAT_TYPES = {"float", "double"}
_QUALIFIERS = {"const", "volatile", "register", "restrict", "static", "inline"}

_SIG_RE = re.compile(
    r"^\s*(?P<ret>[A-Za-z_][A-Za-z0-9_*\s]*?)\s*\b(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*"
    r"\((?P<params>[^)]*)\)",
    re.DOTALL,
)


def _classify_type(words, stars):
    base = [w for w in words if w not in _QUALIFIERS]
    if not base:
        raise UnsupportedType("missing type words")
    if stars > 1:
        raise UnsupportedType("multi-level pointers are unsupported")
    if any(w in ("struct", "union", "enum") for w in base):
        raise UnsupportedType("aggregate types are unsupported")
    is_float = any(w in _FLOAT_TYPES for w in base)
    is_int = any(w in _INT_TYPES for w in base)
    if not (is_float or is_int):
        raise UnsupportedType(f"unsupported type: {' '.join(base)}")
    c_type = " ".join(base)
    if stars:
        kind = ParamKind.POINTER_FLOAT if is_float else ParamKind.POINTER_INT
    else:
        kind = ParamKind.SCALAR_FLOAT if is_float else ParamKind.SCALAR_INT
    return kind, c_type


def parse_signature(c_function_text: str) -> FunctionSignature:
    """Extract name, return kind, and parameter kinds from a definition.

    By convention a trailing `int n`-style scalar bounds every preceding
    pointer parameter; other pointers get a fixed harness length.
    """
    head = c_function_text.split("{", 1)[0]
    m = _SIG_RE.match(head)
    if m is None:
        raise FunctionNotFound("no function definition to parse")
    name = m.group("name")
    ret_words = m.group("ret").replace("*", " * ").split()
    if "*" in ret_words:
        raise UnsupportedType("pointer return values are unsupported")
    if ret_words == ["void"]:
        return_kind, return_type = ReturnKind.VOID, "void"
    else:
        kind, c_type = _classify_type(ret_words, 0)
        return_kind = ReturnKind.FLOAT if kind.is_float else ReturnKind.INT
        return_type = c_type

    params = []
    params_text = m.group("params").strip()
    if params_text and params_text != "void":
        for i, decl in enumerate(params_text.split(",")):
            decl = decl.strip()
            if "[" in decl:
                stars = 1
                decl = decl.split("[", 1)[0]
            else:
                stars = decl.count("*")
            if "(" in decl:
                raise UnsupportedType("function-pointer parameters are unsupported")
            words = decl.replace("*", " ").split()
            if len(words) < 2:
                raise UnsupportedType(f"cannot parse parameter: {decl!r}")
            pname = words[-1]
            kind, c_type = _classify_type(words[:-1], stars)
            params.append(Param(name=pname, kind=kind, c_type=c_type))

    # Trailing scalar-int length convention.
    if params and params[-1].kind is ParamKind.SCALAR_INT:
        len_idx = len(params) - 1
        for p in params[:-1]:
            if p.kind.is_pointer:
                p.array_len_param = len_idx
    return FunctionSignature(name, return_kind, return_type, params)


def generate_tests(sig: FunctionSignature, n_cases: int = DEFAULT_N_CASES, seed: int = 0):
    """Draw deterministic random inputs; `observed` stays unfilled until a
    reference run supplies ground truth."""
    rng = random.Random(seed)
    cases = []
    for _ in range(n_cases):
        length_values = {}
        for i, p in enumerate(sig.params):
            if p.array_len_param is not None:
                length_values.setdefault(p.array_len_param, rng.randint(*ARRAY_LEN_RANGE))
        inputs = []
        for i, p in enumerate(sig.params):
            if p.kind.is_pointer:
                n = length_values.get(p.array_len_param, DEFAULT_ARRAY_LEN)
                if p.kind.is_float:
                    inputs.append([round(rng.uniform(*FLOAT_RANGE), 3) for _ in range(n)])
                else:
                    inputs.append([rng.randint(*INT_RANGE) for _ in range(n)])
            elif i in length_values:
                inputs.append(length_values[i])
            elif p.kind.is_float:
                inputs.append(round(rng.uniform(*FLOAT_RANGE), 3))
            else:
                inputs.append(rng.randint(*INT_RANGE))
        cases.append(IOTestCase(inputs=inputs))
    return cases


def _literal(value, c_type):
    if isinstance(value, float):
        return f"{value!r}" + ("f" if c_type == "float" else "")
    return str(value)


def build_harness(sig: FunctionSignature, cases) -> str:
    """C source of a main that exercises every case and prints observables."""
    proto_params = []
    for p in sig.params:
        star = " *" if p.kind.is_pointer else " "
        proto_params.append(f"{p.c_type}{star}{p.name}")
    proto = f"{sig.return_type} {sig.name}({', '.join(proto_params) or 'void'});"

    lines = ["#include <stdio.h>", "", proto, "", "int main(void) {"]
    for ci, case in enumerate(cases):
        lines.append("  {")
        args = []
        for pi, (p, value) in enumerate(zip(sig.params, case.inputs)):
            var = f"a{ci}_{pi}"
            if p.kind.is_pointer:
                init = ", ".join(_literal(v, p.c_type) for v in value)
                lines.append(f"    {p.c_type} {var}[{len(value)}] = {{{init}}};")
                args.append(var)
            else:
                lines.append(f"    {p.c_type} {var} = {_literal(value, p.c_type)};")
                args.append(var)
        call = f"{sig.name}({', '.join(args)})"
        if sig.return_kind is ReturnKind.VOID:
            lines.append(f"    {call};")
        elif sig.return_kind is ReturnKind.FLOAT:
            lines.append(f'    printf("%.6f\\n", (double){call});')
        else:
            lines.append(f'    printf("%d\\n", (int){call});')
        for pi, p in enumerate(sig.params):
            if not p.kind.is_pointer:
                continue
            var = f"a{ci}_{pi}"
            n = len(case.inputs[pi])
            fmt = "%.6f" if p.kind.is_float else "%d"
            cast = "(double)" if p.kind.is_float else "(int)"
            lines.append(f"    for (int j_ = 0; j_ < {n}; ++j_) {{")
            lines.append(f'      printf("{fmt}\\n", {cast}{var}[j_]);')
            lines.append("    }")
        if ci + 1 < len(cases):
            lines.append(f'    printf("{CASE_SEPARATOR}\\n");')
        lines.append("  }")
    lines.append(f'  printf("{END_MARKER}\\n");')
    lines.append("  return 0;")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _split_blocks(stdout: str, n_cases: int):
    """Cut harness output into per-case blocks; incomplete blocks are None.

    A block is complete when followed by the separator (or the end marker
    for the last case); a crash mid-run leaves trailing blocks incomplete.
    """
    blocks = [None] * n_cases
    current = []
    idx = 0
    for line in stdout.splitlines():
        if line == END_MARKER:
            if idx == n_cases - 1:
                blocks[idx] = current
            break
        if line == CASE_SEPARATOR:
            if idx < n_cases:
                blocks[idx] = current
            current = []
            idx += 1
            continue
        current.append(line)
    return blocks


def _values_match(got: str, want: str, float_tolerance: float) -> bool:
    if got == want:
        return True
    if "." in want or "." in got:
        try:
            return abs(float(got) - float(want)) <= float_tolerance
        except ValueError:
            return False
    return False


def _blocks_equal(got, want, float_tolerance):
    if got is None or want is None or len(got) != len(want):
        return False
    return all(_values_match(g, w, float_tolerance) for g, w in zip(got, want))


class EquivalenceRunner:
    """Builds harnesses, executes reference and candidates, compares output.

    Each runner owns a private scratch directory, so one runner per worker
    is safe for concurrent per-function evaluation.
    """

    def __init__(self, toolchain: ToolchainConfig, timeout: float = DEFAULT_TIMEOUT,
                 float_tolerance: float = DEFAULT_FLOAT_TOLERANCE):
        self.toolchain = toolchain
        self.timeout = timeout
        self.float_tolerance = float_tolerance

    def run_reference(self, unit: SourceUnit, sig: FunctionSignature, cases) -> list:
        """Execute the reference build and fill in each case's `observed`."""
        harness = build_harness(sig, cases)
        with tempfile.TemporaryDirectory(prefix="neurocc-ref-") as tmp:
            tmp = Path(tmp)
            try:
                compile_object(unit.full_source, self.toolchain, tmp / "ref.o")
                compile_object(harness, self.toolchain, tmp / "main.o")
                link([tmp / "ref.o", tmp / "main.o"], self.toolchain, tmp / "ref")
            except CompileError as exc:
                raise HarnessBuildError(
                    f"reference build failed for {unit.id}: {exc.stderr}"
                ) from exc
            code, stdout = run_binary(tmp / "ref", self.timeout)
            if code != 0:
                raise HarnessBuildError(
                    f"reference binary for {unit.id} exited with {code}"
                )
        blocks = _split_blocks(stdout, len(cases))
        if any(b is None for b in blocks):
            raise HarnessBuildError(f"reference output for {unit.id} is incomplete")
        for case, block in zip(cases, blocks):
            case.observed = block
        return blocks

    def run_equivalence(
        self, candidate_asm: TokenStream, unit: SourceUnit, cases
    ) -> IOResult:
        """Compare a candidate's observables against reference ground truth."""
        sig = parse_signature(_unit_function_text(unit))
        if any(c.observed is None for c in cases):
            self.run_reference(unit, sig, cases)
        verdict = check_syntax(candidate_asm, unit.function_name, self.toolchain)
        if not verdict.ok:
            return IOResult(len(cases), 0, IOVerdict.SYNTAX_ERROR, syntax=verdict)
        harness = build_harness(sig, cases)
        wrapped = wrap_function_body(unit.function_name, detokenize(candidate_asm))
        total = len(cases)
        with tempfile.TemporaryDirectory(prefix="neurocc-cand-") as tmp:
            tmp = Path(tmp)
            ok, stderr, obj = assemble(wrapped, self.toolchain, tmp / "cand.o")
            if not ok:
                return IOResult(
                    total, 0, IOVerdict.SYNTAX_ERROR,
                    syntax=SyntaxVerdict(False, verdict.error_messages),
                )
            try:
                compile_object(harness, self.toolchain, tmp / "main.o")
                link([tmp / "cand.o", tmp / "main.o"], self.toolchain, tmp / "cand")
            except CompileError:
                # Assembles but does not link (e.g. wrong symbol): no case
                # can be observed, so all fail.
                return IOResult(total, 0, IOVerdict.ZERO_PASSED, syntax=verdict)
            code, stdout = run_binary(tmp / "cand", self.timeout)
        # On crash or timeout only blocks fully printed before the fault
        # remain comparable; _split_blocks leaves the rest as None.
        blocks = _split_blocks(stdout, total)
        passed = sum(
            1
            for case, block in zip(cases, blocks)
            if _blocks_equal(block, case.observed, self.float_tolerance)
        )
        if passed == total:
            v = IOVerdict.ALL_PASSED
        elif passed == 0:
            v = IOVerdict.ZERO_PASSED
        else:
            v = IOVerdict.SOME_PASSED
        return IOResult(total, passed, v, syntax=verdict)

    def reference_body(self, unit: SourceUnit) -> TokenStream:
        """Lexed stripped reference assembly for a unit (self-equivalence)."""
        asm_text = compile_to_asm(unit.full_source, self.toolchain)
        body = strip_asm_boilerplate(
            asm_text, unit.function_name, self.toolchain.strip_endbr64
        )
        return lexing.lex_gas(body)


def _unit_function_text(unit: SourceUnit) -> str:
    from .corpus import strip_c_boilerplate

    return strip_c_boilerplate(unit)


def io_error_typology(results) -> dict:
    """Count failing functions per verdict (passing ones are excluded)."""
    counts = {
        IOVerdict.SYNTAX_ERROR: 0,
        IOVerdict.ZERO_PASSED: 0,
        IOVerdict.SOME_PASSED: 0,
    }
    for r in results:
        if r.verdict in counts:
            counts[r.verdict] += 1
    return counts
