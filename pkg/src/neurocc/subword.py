"""Byte-pair-encoding subword segmentation over pre-tokenized corpora.

Semantics follow subword-nmt: words are whitespace tokens, split into
characters with an end-of-word marker, and the most frequent adjacent
symbol pair is merged greedily. Frequency ties break lexicographically by
(left, right) so merge files are byte-identical across runs.

Angle-bracket specials such as ``<newline>`` are treated as atomic symbols
and never split. Coverage is total for ASCII input via character fallback.
"""

import heapq
import re
from collections import Counter
from dataclasses import dataclass, field

from .errors import DanglingContinuation, EmptyCorpus

END_OF_WORD = "</w>"
CONTINUATION = "@@"
UNKNOWN_PIECE = "<unk>"
MERGE_FILE_HEADER = "#version: 0.2"

_SPECIAL = re.compile(r"^<[a-z_]+>$")


def _is_special(token: str) -> bool:
    return bool(_SPECIAL.match(token))


def _word_symbols(token: str):
    """Initial symbol sequence for one whitespace token."""
    if _is_special(token):
        return (token,)
    return tuple(token[:-1]) + (token[-1] + END_OF_WORD,)


@dataclass
class SubwordModel:
    merges: list = field(default_factory=list)  # ordered (left, right) pairs
    end_of_word_marker: str = END_OF_WORD

    def __post_init__(self):
        self._ranks = {pair: i for i, pair in enumerate(self.merges)}
        self._cache = {}
        assert len(self._ranks) == len(self.merges), "merge list is duplicate-free"

    def save(self, path):
        with open(path, "w", encoding="utf-8") as f:
            f.write(MERGE_FILE_HEADER + "\n")
            for left, right in self.merges:
                f.write(f"{left} {right}\n")

    @classmethod
    def load(cls, path):
        merges = []
        with open(path, encoding="utf-8") as f:
            header = f.readline()
            if not header.startswith("#version"):
                raise ValueError(f"not a merge file: {path}")
            for line in f:
                line = line.rstrip("\n")
                if not line:
                    continue
                left, right = line.split(" ")
                merges.append((left, right))
        return cls(merges=merges)

    def segment_token(self, token: str):
        """Split one pre-token into subword pieces (marker-free texts)."""
        cached = self._cache.get(token)
        if cached is not None:
            return cached
        symbols = list(_word_symbols(token))
        while len(symbols) > 1:
            best = None
            best_rank = None
            for pair in zip(symbols, symbols[1:]):
                rank = self._ranks.get(pair)
                if rank is not None and (best_rank is None or rank < best_rank):
                    best, best_rank = pair, rank
            if best is None:
                break
            merged = []
            i = 0
            while i < len(symbols):
                if (
                    i + 1 < len(symbols)
                    and symbols[i] == best[0]
                    and symbols[i + 1] == best[1]
                ):
                    merged.append(symbols[i] + symbols[i + 1])
                    i += 2
                else:
                    merged.append(symbols[i])
                    i += 1
            symbols = merged
        pieces = []
        for i, sym in enumerate(symbols):
            text = sym[: -len(END_OF_WORD)] if sym.endswith(END_OF_WORD) else sym
            if _is_special(sym):
                text = sym
            if not text.isascii():
                text = UNKNOWN_PIECE
            if i + 1 < len(symbols):
                text += CONTINUATION
            pieces.append(text)
        pieces = [p for p in pieces if p and p != CONTINUATION]
        if not pieces:
            pieces = [token]  # degenerate single-marker word
        self._cache[token] = pieces
        return pieces


def _merge_word(symbols, pair, joined):
    merged = []
    i = 0
    n = len(symbols)
    while i < n:
        if i + 1 < n and symbols[i] == pair[0] and symbols[i + 1] == pair[1]:
            merged.append(joined)
            i += 2
        else:
            merged.append(symbols[i])
            i += 1
    return tuple(merged)


def learn_bpe(corpus_lines, num_merges: int) -> SubwordModel:
    """Learn merge rules jointly over all supplied lines (both languages).

    Pair counts are maintained incrementally (only words containing the
    merged pair are revisited), so large merge budgets stay tractable.
    """
    word_freqs = Counter()
    for line in corpus_lines:
        word_freqs.update(line.split())
    if not word_freqs:
        raise EmptyCorpus("cannot learn BPE from an empty corpus")
    words = [[_word_symbols(w), f] for w, f in sorted(word_freqs.items())]

    pair_freqs = Counter()
    pair_index = {}  # pair -> set of word indices containing it
    for idx, (symbols, freq) in enumerate(words):
        for pair in zip(symbols, symbols[1:]):
            pair_freqs[pair] += freq
            pair_index.setdefault(pair, set()).add(idx)

    # Max-heap with lazy deletion: stale entries are re-pushed with their
    # corrected count when popped.
    heap = [(-freq, pair) for pair, freq in pair_freqs.items()]
    heapq.heapify(heap)

    merges = []
    while len(merges) < num_merges and heap:
        neg_freq, best = heapq.heappop(heap)
        current = pair_freqs.get(best, 0)
        if current <= 0:
            continue
        if -neg_freq != current:
            heapq.heappush(heap, (-current, best))
            continue
        merges.append(best)
        joined = best[0] + best[1]
        touched = set()
        for idx in sorted(pair_index.get(best, ())):
            symbols, freq = words[idx]
            for pair in zip(symbols, symbols[1:]):
                pair_freqs[pair] -= freq
                touched.add(pair)
            new_symbols = _merge_word(symbols, best, joined)
            words[idx][0] = new_symbols
            for pair in zip(new_symbols, new_symbols[1:]):
                pair_freqs[pair] += freq
                pair_index.setdefault(pair, set()).add(idx)
                touched.add(pair)
        pair_freqs.pop(best, None)
        pair_index.pop(best, None)
        touched.discard(best)
        for pair in touched:
            freq = pair_freqs.get(pair, 0)
            if freq > 0:
                heapq.heappush(heap, (-freq, pair))
    return SubwordModel(merges=merges)


def encode(model: SubwordModel, token_line: str) -> str:
    """Segment a space-separated pre-token line into subword pieces."""
    out = []
    for token in token_line.split():
        out.extend(model.segment_token(token))
    return " ".join(out)


def decode(subword_line: str) -> str:
    """Join continuation pieces back into pre-tokens; inverse of encode."""
    if subword_line.rstrip().endswith(CONTINUATION):
        raise DanglingContinuation("line ends with a continuation marker")
    return re.sub(r"@@ ", "", subword_line)


@dataclass
class SubwordStats:
    subwords_per_token: float
    avg_sequence_length: float


def subword_stats(model: SubwordModel, corpus_lines) -> SubwordStats:
    """Compression ratio of the model over one corpus side."""
    total_tokens = 0
    total_subwords = 0
    total_lines = 0
    for line in corpus_lines:
        tokens = line.split()
        total_tokens += len(tokens)
        for t in tokens:
            total_subwords += len(model.segment_token(t))
        total_lines += 1
    if total_tokens == 0:
        raise EmptyCorpus("no tokens to measure")
    return SubwordStats(
        subwords_per_token=total_subwords / total_tokens,
        avg_sequence_length=total_subwords / total_lines,
    )


def vocabulary(model: SubwordModel, corpus_lines):
    """The subword vocabulary the model induces over a corpus."""
    vocab = Counter()
    for line in corpus_lines:
        for token in line.split():
            vocab.update(model.segment_token(token))
    return vocab
