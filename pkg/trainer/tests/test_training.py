"""Configuration, objective, and optimization behavior."""

import math

import pytest
import torch

from conftest import tiny_config, toy_parallel_lines
from neurocc_trainer.config import ConfigError, ModelConfig, PRESETS
from neurocc_trainer.data import Vocabulary
from neurocc_trainer.model import Seq2SeqTransformer, load_checkpoint
from neurocc_trainer.train import initial_loss, train


class TestConfig:
    def test_presets(self):
        small = PRESETS["small"]
        assert (small.encoder_layers, small.decoder_layers) == (6, 6)
        assert (small.embed_dim, small.heads) == (512, 4)
        assert (PRESETS["med"].embed_dim, PRESETS["med"].heads,
                PRESETS["med"].ff_dim) == (1024, 8, 2048)
        assert (PRESETS["big"].embed_dim, PRESETS["big"].heads,
                PRESETS["big"].ff_dim) == (1024, 16, 4096)
        assert all(p.beam_k == 5 for p in PRESETS.values())
        assert all(p.max_positions == 512 for p in PRESETS.values())

    def test_embed_dim_must_divide_heads(self):
        with pytest.raises(ConfigError):
            ModelConfig(embed_dim=100, heads=3)

    def test_negative_epochs_rejected(self):
        with pytest.raises(ConfigError):
            ModelConfig(epochs=-1)

    def test_config_file_with_preset_override(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text('{"preset": "small", "epochs": 2, "beam_k": 3}')
        cfg = ModelConfig.from_file(path)
        assert cfg.embed_dim == 512
        assert cfg.epochs == 2
        assert cfg.beam_k == 3


class TestObjective:
    def test_initial_loss_is_uniform_baseline(self, toy_corpus):
        src, tgt = toy_corpus
        loss, vocab_size = initial_loss(tiny_config(), src, tgt)
        baseline = math.log(vocab_size)
        assert abs(loss - baseline) / baseline < 0.20

    def test_loss_decreases_over_first_epochs(self, toy_corpus):
        src, tgt = toy_corpus
        _, _, run = train(tiny_config(epochs=2), src, tgt, "/tmp/ck-two",
                          log=lambda s: None)
        assert run.train_loss[1] < run.train_loss[0]

    def test_doubling_epochs_never_increases_final_loss(self, toy_corpus):
        src, tgt = toy_corpus
        _, _, short = train(tiny_config(epochs=4), src, tgt, "/tmp/ck-short",
                            log=lambda s: None)
        _, _, long = train(tiny_config(epochs=8), src, tgt, "/tmp/ck-long",
                           log=lambda s: None)
        assert long.train_loss[-1] <= short.train_loss[-1]
        # same seed: the shared prefix of the loss trajectory is identical
        assert long.train_loss[:4] == pytest.approx(short.train_loss, abs=1e-6)

    def test_zero_epochs_is_initialization(self, toy_corpus, tmp_path):
        src, tgt = toy_corpus
        cfg = tiny_config(epochs=0)
        model, vocab, run = train(cfg, src, tgt, tmp_path, log=lambda s: None)
        assert run.train_loss == []
        loaded, _, _, loss_log = load_checkpoint(tmp_path / "checkpoint_last.pt")
        assert loss_log == []
        torch.manual_seed(cfg.seed)
        fresh = Seq2SeqTransformer(cfg, len(vocab), vocab.pad_id)
        for (name, got), (_, want) in zip(
            loaded.state_dict().items(), fresh.state_dict().items()
        ):
            assert torch.equal(got, want), name

    def test_empty_corpus_rejected_before_training(self, tmp_path):
        with pytest.raises(ConfigError):
            train(tiny_config(), [], [], tmp_path)

    def test_loss_log_length_matches_epochs(self, overfit_run):
        _, _, run, _ = overfit_run
        assert len(run.train_loss) == run.config.epochs
        run.check()


class TestOverfit:
    def test_toy_corpus_memorized(self, overfit_run, toy_corpus):
        from neurocc_trainer.decode import greedy_decode

        model, vocab, run, _ = overfit_run
        assert run.train_loss[-1] < 0.1
        src, tgt = toy_corpus
        exact = 0
        for s, t in zip(src, tgt):
            ids = greedy_decode(model, vocab, vocab.encode(s.split()))
            if " ".join(vocab.decode(ids)) == t:
                exact += 1
        assert exact >= 95


class TestVocabulary:
    def test_specials_first_and_stable(self):
        vocab = Vocabulary.build(["b a a", "c b a"])
        assert vocab.itos[:4] == ["<pad>", "<s>", "</s>", "<unk>"]
        assert vocab.itos[4:] == ["a", "b", "c"]  # freq desc, then lex

    def test_unknown_token_maps_to_unk(self):
        vocab = Vocabulary.build(["a b"])
        assert vocab.encode(["a", "zzz"]) == [4, vocab.unk_id]

    def test_round_trip_serialization(self):
        vocab = Vocabulary.build(["movl %eax , %edx"])
        again = Vocabulary.from_dict(vocab.to_dict())
        assert again.itos == vocab.itos
        assert again.pad_id == vocab.pad_id


@pytest.mark.slow
class TestFullScaleOverfit:
    def test_small_preset_memorizes_toy_corpus_within_budget(self, tmp_path):
        """Published-size small model on 100 pairs: loss < 0.1, >= 95%
        top-1 beam reproduction, total run under 30 minutes."""
        import copy
        import time

        from neurocc_trainer.decode import beam_decode

        src, tgt = toy_parallel_lines(100)
        cfg = copy.deepcopy(PRESETS["small"])
        cfg.epochs = 45
        cfg.batch_size = 10
        cfg.warmup_steps = 100
        cfg.learning_rate = 3e-4
        cfg.dropout = 0.0
        cfg.seed = 3
        start = time.monotonic()
        model, vocab, run = train(cfg, src, tgt, tmp_path, log=lambda s: None)
        exact = 0
        for s, t in zip(src, tgt):
            ids, _ = beam_decode(model, vocab, vocab.encode(s.split()),
                                 k=1, max_len=64)[0]
            if " ".join(vocab.decode(ids)) == t:
                exact += 1
        elapsed = time.monotonic() - start
        assert run.train_loss[-1] < 0.1
        assert exact >= 95
        assert elapsed < 1800.0
        print(f"\nsmall preset: loss {run.train_loss[-1]:.4f}, "
              f"{exact}/100 exact, {elapsed / 60:.1f} min")
