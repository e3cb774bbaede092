"""Observational equivalence: compare candidates against reference IO.

Ground truth comes from running the gcc-compiled reference on generated
inputs; a candidate passes a case by matching the return value and every
pointer argument's contents.
"""

from neurocc.corpus import SourceUnit
from neurocc.equivalence import (
    EquivalenceRunner, generate_tests, parse_signature,
)
from neurocc.toolchain import ToolchainConfig

REFERENCE = (
    "int array_max(int *arr, int n) {\n"
    "  int m = arr[0];\n"
    "  for (int i = 1; i < n; ++i) {\n"
    "    if (arr[i] > m) { m = arr[i]; }\n"
    "  }\n"
    "  return m;\n"
    "}\n"
)
# subtly wrong: returns the last element instead of the max
MUTANT = (
    "int array_max(int *arr, int n) {\n"
    "  return arr[n - 1];\n"
    "}\n"
)


def main():
    toolchain = ToolchainConfig()
    runner = EquivalenceRunner(toolchain)
    unit = SourceUnit(id="array_max", full_source=REFERENCE,
                      function_name="array_max")
    sig = parse_signature(REFERENCE)
    print(f"signature: {sig.name}, {len(sig.params)} params, "
          f"{sig.n_pointers} pointer(s)")

    cases = generate_tests(sig, n_cases=9, seed=7)
    print(f"first case inputs: {cases[0].inputs}")

    for label, source in (("reference", REFERENCE), ("mutant", MUTANT)):
        candidate = runner.reference_body(
            SourceUnit(id="array_max", full_source=source,
                       function_name="array_max")
        )
        result = runner.run_equivalence(candidate, unit, cases)
        print(f"{label}: {result.passed}/{result.total} -> {result.verdict.value}")


if __name__ == "__main__":
    main()
