"""Score candidate assembly with BLEU and the assembler syntax check."""

from neurocc.corpus import SourceUnit
from neurocc.equivalence import EquivalenceRunner
from neurocc.lexing import lex_gas
from neurocc.metrics import bleu, check_syntax, sentence_bleu
from neurocc.toolchain import ToolchainConfig

SOURCE = "int square(int x) { return x * x; }\n"


def main():
    toolchain = ToolchainConfig()
    unit = SourceUnit(id="square", full_source=SOURCE, function_name="square")
    reference = EquivalenceRunner(toolchain).reference_body(unit)
    ref_line = " ".join(reference.texts())

    print(f"identical BLEU: {bleu([ref_line], [ref_line]).score:.2f}")
    mangled = ref_line.replace("imull", "addl")
    print(f"one-opcode-off BLEU: {sentence_bleu(mangled, ref_line).score:.2f}")

    verdict = check_syntax(reference, "square", toolchain)
    print(f"\nreference assembles: {verdict.ok}")

    bad = lex_gas("movq %rax\nbogus_op %eax , %edx\nret\n")
    verdict = check_syntax(bad, "square", toolchain)
    print(f"garbage assembles: {verdict.ok}")
    for msg in verdict.error_messages:
        print(f"  diagnostic: {msg}")


if __name__ == "__main__":
    main()
