"""Encoder-decoder transformer with a shared source/target vocabulary."""

import math

import torch
from torch import nn

from .config import ModelConfig
from .data import Vocabulary


class CheckpointMismatch(RuntimeError):
    pass


class Seq2SeqTransformer(nn.Module):
    def __init__(self, config: ModelConfig, vocab_size: int, pad_id: int):
        super().__init__()
        self.config = config
        self.pad_id = pad_id
        self.embed = nn.Embedding(vocab_size, config.embed_dim, padding_idx=pad_id)
        self.positions = nn.Embedding(config.max_positions, config.embed_dim)
        self.scale = math.sqrt(config.embed_dim)
        self.transformer = nn.Transformer(
            d_model=config.embed_dim,
            nhead=config.heads,
            num_encoder_layers=config.encoder_layers,
            num_decoder_layers=config.decoder_layers,
            dim_feedforward=config.ff_dim,
            dropout=config.dropout,
            batch_first=True,
        )
        # keep the reference eager path; the nested-tensor fast path is
        # prototype-stage and warns on every forward
        self.transformer.encoder.enable_nested_tensor = False
        self.transformer.encoder.use_nested_tensor = False
        self.out = nn.Linear(config.embed_dim, vocab_size)

    def _embed(self, ids):
        pos = torch.arange(ids.size(1), device=ids.device).unsqueeze(0)
        return self.embed(ids) * self.scale + self.positions(pos)

    @staticmethod
    def _causal_mask(size, device):
        return torch.triu(
            torch.ones(size, size, dtype=torch.bool, device=device), diagonal=1
        )

    def forward(self, src, tgt_in):
        """(B, S), (B, T) -> (B, T, V) logits under causal target masking."""
        tgt_mask = self._causal_mask(tgt_in.size(1), src.device)
        hidden = self.transformer(
            self._embed(src),
            self._embed(tgt_in),
            tgt_mask=tgt_mask,
            src_key_padding_mask=src == self.pad_id,
            tgt_key_padding_mask=tgt_in == self.pad_id,
            memory_key_padding_mask=src == self.pad_id,
        )
        return self.out(hidden)

    def encode(self, src):
        memory = self.transformer.encoder(
            self._embed(src), src_key_padding_mask=src == self.pad_id
        )
        return memory

    def decode_step(self, memory, src, tgt_in):
        tgt_mask = self._causal_mask(tgt_in.size(1), src.device)
        hidden = self.transformer.decoder(
            self._embed(tgt_in),
            memory,
            tgt_mask=tgt_mask,
            memory_key_padding_mask=src == self.pad_id,
        )
        return self.out(hidden[:, -1, :])


def save_checkpoint(model, vocab, config, loss_log, path):
    torch.save(
        {
            "config": config.to_dict(),
            "vocab": vocab.to_dict(),
            "state": model.state_dict(),
            "loss_log": loss_log,
        },
        path,
    )


def load_checkpoint(path):
    payload = torch.load(path, map_location="cpu", weights_only=True)
    config = ModelConfig.from_dict(payload["config"])
    vocab = Vocabulary.from_dict(payload["vocab"])
    model = Seq2SeqTransformer(config, len(vocab), vocab.pad_id)
    state = payload["state"]
    want = model.embed.weight.shape
    got = state["embed.weight"].shape
    if tuple(got) != tuple(want):
        raise CheckpointMismatch(
            f"checkpoint embedding {tuple(got)} does not match vocab/config {tuple(want)}"
        )
    model.load_state_dict(state)
    model.eval()
    return model, vocab, config, payload.get("loss_log", [])
