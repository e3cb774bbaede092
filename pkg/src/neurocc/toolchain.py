"""Wrappers around the system C compiler and assembler.

Everything here is subprocess plumbing: compiling units to assembly at -O0,
reassembling stripped function bodies, and building/running test binaries.
The compiler path comes from the config, overridable via ``NEUROCC_CC``.
"""

import json
import os
import shutil
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CompileError, ToolchainMissing

ENV_CC = "NEUROCC_CC"
ENV_WORKERS = "NEUROCC_WORKERS"


@dataclass
class ToolchainConfig:
    cc: str = "gcc"
    compile_flags: list = field(default_factory=lambda: ["-S", "-O0"])
    strip_endbr64: bool = True
    timeout: float = 30.0

    def __post_init__(self):
        env_cc = os.environ.get(ENV_CC)
        if env_cc:
            self.cc = env_cc

    @classmethod
    def from_file(cls, path):
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
        return cls(**data)

    def resolved_cc(self):
        path = shutil.which(self.cc)
        if path is None:
            raise ToolchainMissing(f"compiler not found: {self.cc}")
        return path

    def workers(self):
        return int(os.environ.get(ENV_WORKERS, os.cpu_count() or 1))


def _run(cmd, cwd, timeout, input_text=None):
    try:
        return subprocess.run(
            cmd,
            cwd=cwd,
            input=input_text,
            capture_output=True,
            text=True,
            timeout=timeout,
        )
    except FileNotFoundError as exc:
        raise ToolchainMissing(f"cannot execute {cmd[0]}") from exc


def compile_to_asm(source: str, toolchain: ToolchainConfig) -> str:
    """Compile a standalone C translation unit to assembly text at -O0."""
    cc = toolchain.resolved_cc()
    with tempfile.TemporaryDirectory(prefix="neurocc-") as tmp:
        src = Path(tmp, "unit.c")
        out = Path(tmp, "unit.s")
        src.write_text(source, encoding="utf-8")
        proc = _run(
            [cc, *toolchain.compile_flags, str(src), "-o", str(out)],
            tmp,
            toolchain.timeout,
        )
        if proc.returncode != 0:
            raise CompileError("compiler exited nonzero", stderr=proc.stderr)
        return out.read_text(encoding="utf-8")


def wrap_function_body(function_name: str, body: str) -> str:
    """Re-attach the canonical header/footer stripped during corpus building."""
    header = (
        "\t.text\n"
        f"\t.globl\t{function_name}\n"
        f"\t.type\t{function_name}, @function\n"
    )
    footer = f"\t.size\t{function_name}, .-{function_name}\n"
    if not body.endswith("\n"):
        body += "\n"
    return header + body + footer


def assemble(asm_text: str, toolchain: ToolchainConfig, out_object=None):
    """Assemble text to object code. Returns (ok, stderr, object_path|None)."""
    cc = toolchain.resolved_cc()
    tmp = tempfile.mkdtemp(prefix="neurocc-as-")
    try:
        src = Path(tmp, "cand.s")
        obj = Path(out_object) if out_object else Path(tmp, "cand.o")
        src.write_text(asm_text, encoding="utf-8")
        proc = _run([cc, "-c", str(src), "-o", str(obj)], tmp, toolchain.timeout)
        ok = proc.returncode == 0
        return ok, proc.stderr, (obj if ok and out_object else None)
    finally:
        if out_object is None:
            shutil.rmtree(tmp, ignore_errors=True)


def compile_object(source: str, toolchain: ToolchainConfig, out_object) -> None:
    """Compile C directly to an object file (used for harness mains)."""
    cc = toolchain.resolved_cc()
    with tempfile.TemporaryDirectory(prefix="neurocc-") as tmp:
        src = Path(tmp, "unit.c")
        src.write_text(source, encoding="utf-8")
        proc = _run([cc, "-O0", "-c", str(src), "-o", str(out_object)], tmp, toolchain.timeout)
        if proc.returncode != 0:
            raise CompileError("compiler exited nonzero", stderr=proc.stderr)


def link(objects, toolchain: ToolchainConfig, out_binary) -> None:
    cc = toolchain.resolved_cc()
    proc = _run(
        [cc, *(str(o) for o in objects), "-o", str(out_binary)],
        None,
        toolchain.timeout,
    )
    if proc.returncode != 0:
        raise CompileError("linker exited nonzero", stderr=proc.stderr)


def run_binary(binary, timeout: float, cwd=None):
    """Run a test binary jailed to its scratch directory.

    Returns (exit_code|None, stdout); exit_code None means timeout.
    """
    try:
        proc = subprocess.run(
            [str(binary)],
            cwd=cwd or str(Path(binary).parent),
            capture_output=True,
            text=True,
            timeout=timeout,
        )
        return proc.returncode, proc.stdout
    except subprocess.TimeoutExpired as exc:
        out = exc.stdout
        if isinstance(out, bytes):
            out = out.decode("utf-8", "replace")
        return None, out or ""
