"""Greedy and beam-search decoding to the shared prediction format."""

import torch

from .data import bpe_decode_line


def _decode_ids(ids, vocab):
    """Token ids -> pre-BPE token line (specials stripped, pieces joined)."""
    texts = [t for t in vocab.decode(ids) if t not in ("<s>", "</s>", "<pad>")]
    return bpe_decode_line(" ".join(texts)).strip()


@torch.no_grad()
def greedy_decode(model, vocab, src_ids, max_len=None):
    """Argmax decoding of one source line; returns target ids (no specials)."""
    max_len = max_len or model.config.max_positions - 1
    src = torch.tensor([src_ids], dtype=torch.long)
    memory = model.encode(src)
    out = [vocab.bos_id]
    for _ in range(max_len):
        tgt = torch.tensor([out], dtype=torch.long)
        logits = model.decode_step(memory, src, tgt)
        next_id = int(logits[0].argmax())
        if next_id == vocab.eos_id:
            break
        out.append(next_id)
    return out[1:]


@torch.no_grad()
def beam_decode(model, vocab, src_ids, k, max_len=None):
    """Top-k beam search; returns [(ids, score)] sorted by score descending.

    Scores are summed token log-probabilities; finished beams stop growing.
    """
    max_len = max_len or model.config.max_positions - 1
    src = torch.tensor([src_ids], dtype=torch.long)
    memory = model.encode(src)
    beams = [([vocab.bos_id], 0.0, False)]  # (ids, score, finished)
    for _ in range(max_len):
        if all(done for _, _, done in beams):
            break
        candidates = []
        for ids, score, done in beams:
            if done:
                candidates.append((ids, score, True))
                continue
            tgt = torch.tensor([ids], dtype=torch.long)
            log_probs = torch.log_softmax(
                model.decode_step(memory, src, tgt)[0], dim=-1
            )
            top = torch.topk(log_probs, k)
            for logp, next_id in zip(top.values.tolist(), top.indices.tolist()):
                finished = next_id == vocab.eos_id
                new_ids = ids if finished else ids + [next_id]
                candidates.append((new_ids, score + logp, finished))
        candidates.sort(key=lambda c: -c[1])
        beams = candidates[:k]
    beams.sort(key=lambda c: -c[1])
    return [(ids[1:], score) for ids, score, _ in beams]


def predict_lines(model, vocab, source_lines, k=5):
    """Beam hypotheses for each source line, best first, as token lines."""
    out = []
    for line in source_lines:
        src_ids = vocab.encode(line.split())[: model.config.max_positions]
        hyps = beam_decode(model, vocab, src_ids, k)
        out.append([_decode_ids(ids, vocab) for ids, _ in hyps])
    return out
