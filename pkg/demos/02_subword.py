"""Learn a subword model and round-trip some token lines.

BPE merges are learned jointly over both corpus sides; `<newline>` stays
atomic and decode is the exact inverse of encode.
"""

from neurocc.subword import decode, encode, learn_bpe, subword_stats

CORPUS = [
    "movl %eax , %edx <newline> movl %edx , %eax <newline> ret <newline>",
    "pushq %rbp <newline> movq %rsp , %rbp <newline> popq %rbp <newline> ret <newline>",
    "int square ( int x ) { return x * x ; }",
    "int triple ( int x ) { return 3 * x ; }",
] * 10


def main():
    for budget in (0, 20, 100):
        model = learn_bpe(CORPUS, budget)
        stats = subword_stats(model, CORPUS)
        print(f"budget {budget:4d}: {len(model.merges):3d} merges, "
              f"{stats.subwords_per_token:.2f} subwords/token")

    model = learn_bpe(CORPUS, 40)
    line = "movl %ecx , %eax <newline> ret <newline>"
    encoded = encode(model, line)
    print(f"\nline:    {line}")
    print(f"encoded: {encoded}")
    print(f"decoded: {decode(encoded)}")
    assert decode(encoded) == line


if __name__ == "__main__":
    main()
