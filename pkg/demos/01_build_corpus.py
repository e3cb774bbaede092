"""Build a tiny parallel corpus from C sources.

Compiles each function with gcc -S -O0, strips boilerplate from both
sides, tokenizes, filters by combined length, and writes one-program-per-
line token files plus a manifest.
"""

import tempfile
from pathlib import Path

from neurocc.corpus import (
    SourceUnit, SplitSpec, build_pairs, corpus_stats, split, write_corpus,
)
from neurocc.toolchain import ToolchainConfig

SOURCES = {
    "square": "int square(int x) { return x * x; }\n",
    "triple": "int triple(int x) { return 3 * x; }\n",
    "array_min": (
        "int array_min(int *arr, int n) {\n"
        "  int m = arr[0];\n"
        "  for (int i = 1; i < n; ++i) {\n"
        "    if (arr[i] < m) { m = arr[i]; }\n"
        "  }\n"
        "  return m;\n"
        "}\n"
    ),
    "negate": "void negate(int *arr, int n) { for (int i = 0; i < n; ++i) arr[i] = -arr[i]; }\n",
    "gcd_step": "int gcd_step(int a, int b) { return b ? a % b : a; }\n",
}


def main():
    units = [
        SourceUnit(id=name, full_source=src, function_name=name)
        for name, src in SOURCES.items()
    ]
    toolchain = ToolchainConfig()
    pairs, skipped = build_pairs(units, toolchain, max_combined=314)
    for unit_id, reason, detail in skipped:
        print(f"skipped {unit_id}: {reason} ({detail})")

    stats = corpus_stats(pairs)
    print(f"{stats.n_pairs} pairs, avg C tokens {stats.avg_c_tokens:.1f}, "
          f"avg ASM tokens {stats.avg_asm_tokens:.1f}")

    example = pairs[0]
    print(f"\n{example.id} C side:\n  {' '.join(example.c_tokens.texts())}")
    print(f"{example.id} ASM side (first 20 tokens):\n  "
          f"{' '.join(example.asm_tokens.texts()[:20])} ...")

    with tempfile.TemporaryDirectory() as out:
        splits = split(pairs, SplitSpec(valid_count=1, test_count=1, seed=42))
        write_corpus(splits, out)
        print(f"\nwrote: {sorted(p.name for p in Path(out).iterdir())}")


if __name__ == "__main__":
    main()
