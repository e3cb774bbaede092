"""Vocabulary and batching over one-program-per-line token files.

The trainer talks to the corpus toolkit only through its file formats:
`<split>.{c,asm}.tok` (optionally BPE-encoded), `manifest.json`, and the
predictions JSON Lines format.
"""

import json
import re
from dataclasses import dataclass
from pathlib import Path

import torch

PAD, BOS, EOS, UNK = "<pad>", "<s>", "</s>", "<unk>"
SPECIALS = [PAD, BOS, EOS, UNK]


class Vocabulary:
    """Joint source/target token vocabulary, frequency-then-lex ordered."""

    def __init__(self, tokens):
        self.itos = list(SPECIALS) + [t for t in tokens if t not in SPECIALS]
        self.stoi = {t: i for i, t in enumerate(self.itos)}
        self.pad_id = self.stoi[PAD]
        self.bos_id = self.stoi[BOS]
        self.eos_id = self.stoi[EOS]
        self.unk_id = self.stoi[UNK]

    def __len__(self):
        return len(self.itos)

    def encode(self, tokens):
        return [self.stoi.get(t, self.unk_id) for t in tokens]

    def decode(self, ids):
        return [self.itos[i] for i in ids]

    @classmethod
    def build(cls, lines):
        freqs = {}
        for line in lines:
            for tok in line.split():
                freqs[tok] = freqs.get(tok, 0) + 1
        ordered = sorted(freqs, key=lambda t: (-freqs[t], t))
        return cls(ordered)

    def to_dict(self):
        return {"itos": self.itos}

    @classmethod
    def from_dict(cls, d):
        v = cls.__new__(cls)
        v.itos = list(d["itos"])
        v.stoi = {t: i for i, t in enumerate(v.itos)}
        v.pad_id = v.stoi[PAD]
        v.bos_id = v.stoi[BOS]
        v.eos_id = v.stoi[EOS]
        v.unk_id = v.stoi[UNK]
        return v


def read_lines(path):
    return Path(path).read_text(encoding="utf-8").splitlines()


def read_split_ids(corpus_dir, split):
    """Per-line ids of one split, from the corpus manifest."""
    with open(Path(corpus_dir) / "manifest.json", encoding="utf-8") as f:
        manifest = json.load(f)
    return [row["id"] for row in manifest if row["split"] == split]


def bpe_decode_line(line: str) -> str:
    """Join `@@ ` continuation pieces back into pre-BPE tokens."""
    return re.sub(r"@@ ", "", line)


@dataclass
class Batch:
    src: torch.Tensor        # (B, S) padded source ids
    tgt_in: torch.Tensor     # (B, T) decoder input, starts with <s>
    tgt_out: torch.Tensor    # (B, T) decoder target, ends with </s>


def _pad(rows, pad_id):
    width = max(len(r) for r in rows)
    return torch.tensor(
        [r + [pad_id] * (width - len(r)) for r in rows], dtype=torch.long
    )


def make_batches(src_lines, tgt_lines, vocab, batch_size, max_positions):
    """Teacher-forcing batches; sequences beyond max_positions are clipped."""
    assert len(src_lines) == len(tgt_lines)
    pairs = []
    for s, t in zip(src_lines, tgt_lines):
        src = vocab.encode(s.split())[: max_positions]
        tgt = vocab.encode(t.split())[: max_positions - 1]
        pairs.append((src, tgt))
    batches = []
    for i in range(0, len(pairs), batch_size):
        chunk = pairs[i : i + batch_size]
        src_rows = [s for s, _ in chunk]
        in_rows = [[vocab.bos_id] + t for _, t in chunk]
        out_rows = [t + [vocab.eos_id] for _, t in chunk]
        batches.append(
            Batch(
                src=_pad(src_rows, vocab.pad_id),
                tgt_in=_pad(in_rows, vocab.pad_id),
                tgt_out=_pad(out_rows, vocab.pad_id),
            )
        )
    return batches


def write_predictions(ids, hypotheses_per_line, path):
    """Shared JSON Lines prediction format: {"id": ..., "hypotheses": [...]}."""
    with open(path, "w", encoding="utf-8") as f:
        for pred_id, hyps in zip(ids, hypotheses_per_line):
            f.write(json.dumps({"id": pred_id, "hypotheses": hyps}) + "\n")
