"""Maximum-likelihood training with teacher forcing."""

import math
from dataclasses import dataclass, field
from pathlib import Path

import torch
from torch import nn

from .config import ConfigError, ModelConfig
from .data import Vocabulary, make_batches
from .model import Seq2SeqTransformer, save_checkpoint


@dataclass
class TrainingRun:
    config: ModelConfig
    seed: int
    train_loss: list = field(default_factory=list)  # one entry per epoch
    valid_loss: list = field(default_factory=list)

    def check(self):
        assert len(self.train_loss) == self.config.epochs
        assert all(math.isfinite(v) for v in self.train_loss + self.valid_loss)


def _inverse_sqrt_lr(step, base, warmup):
    """Linear warmup to `base`, then inverse-square-root decay."""
    step = max(step, 1)
    return base * min(step / warmup, math.sqrt(warmup / step))


def _epoch_loss(model, batches, criterion, optimizer=None, schedule=None):
    total_loss = 0.0
    total_tokens = 0
    for batch in batches:
        logits = model(batch.src, batch.tgt_in)
        n_tokens = int((batch.tgt_out != model.pad_id).sum())
        loss = criterion(logits.transpose(1, 2), batch.tgt_out)
        if optimizer is not None:
            optimizer.zero_grad()
            loss.backward()
            torch.nn.utils.clip_grad_norm_(model.parameters(), 1.0)
            if schedule is not None:
                schedule()
            optimizer.step()
        total_loss += float(loss.detach()) * n_tokens
        total_tokens += n_tokens
    return total_loss / max(total_tokens, 1)


def _dry_run(model, batches):
    """Shape-validate one tiny forward pass before committing to training."""
    if not batches:
        raise ConfigError("training corpus is empty")
    first = batches[0]
    if first.src.size(1) > model.config.max_positions:
        raise ConfigError("source length exceeds max_positions")
    with torch.no_grad():
        model(first.src[:2], first.tgt_in[:2])


def train(config, src_lines, tgt_lines, out_dir,
          valid_src=None, valid_tgt=None, log=print):
    """Train on parallel token lines; checkpoint each epoch into out_dir.

    Returns (model, vocab, TrainingRun). Deterministic under config.seed to
    the extent the numeric backend permits.
    """
    torch.manual_seed(config.seed)
    vocab = Vocabulary.build(list(src_lines) + list(tgt_lines))
    model = Seq2SeqTransformer(config, len(vocab), vocab.pad_id)
    batches = make_batches(src_lines, tgt_lines, vocab,
                           config.batch_size, config.max_positions)
    _dry_run(model, batches)
    valid_batches = None
    if valid_src is not None:
        valid_batches = make_batches(valid_src, valid_tgt, vocab,
                                     config.batch_size, config.max_positions)

    criterion = nn.CrossEntropyLoss(
        ignore_index=vocab.pad_id, label_smoothing=config.label_smoothing
    )
    optimizer = torch.optim.Adam(
        model.parameters(), lr=config.learning_rate, betas=(0.9, 0.98)
    )
    step = 0

    def schedule():
        nonlocal step
        step += 1
        lr = _inverse_sqrt_lr(step, config.learning_rate, config.warmup_steps)
        for group in optimizer.param_groups:
            group["lr"] = lr

    run = TrainingRun(config=config, seed=config.seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for epoch in range(config.epochs):
        model.train()
        loss = _epoch_loss(model, batches, criterion, optimizer, schedule)
        run.train_loss.append(loss)
        line = f"epoch {epoch + 1}/{config.epochs}: train loss {loss:.4f}"
        if valid_batches:
            model.eval()
            with torch.no_grad():
                vloss = _epoch_loss(model, valid_batches, criterion)
            run.valid_loss.append(vloss)
            line += f", valid loss {vloss:.4f}"
        log(line)
        save_checkpoint(model, vocab, config, run.train_loss,
                        out / "checkpoint_last.pt")
    if config.epochs == 0:
        save_checkpoint(model, vocab, config, [], out / "checkpoint_last.pt")
    run.check()
    model.eval()
    return model, vocab, run


def initial_loss(config, src_lines, tgt_lines):
    """Teacher-forced loss of a freshly initialized model (no updates)."""
    torch.manual_seed(config.seed)
    vocab = Vocabulary.build(list(src_lines) + list(tgt_lines))
    model = Seq2SeqTransformer(config, len(vocab), vocab.pad_id)
    model.eval()
    batches = make_batches(src_lines, tgt_lines, vocab,
                           config.batch_size, config.max_positions)
    criterion = nn.CrossEntropyLoss(ignore_index=vocab.pad_id)
    with torch.no_grad():
        return _epoch_loss(model, batches, criterion), len(vocab)
