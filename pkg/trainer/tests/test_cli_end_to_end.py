"""CLI round trips, including the full pipeline against the corpus toolkit.

The integration test talks to the corpus/eval toolkit exclusively through
its command line and file formats: build-corpus and bpe produce the
training files, the trainer produces predictions.jsonl, and `neurocc eval`
scores them.
"""

import json
import random
import shutil
import subprocess
import sys

import pytest

from conftest import tiny_config, toy_parallel_lines
from neurocc_trainer.cli import main


@pytest.fixture(scope="module")
def toy_corpus_dir(tmp_path_factory):
    """A corpus directory in the toolkit's file format, no toolchain needed."""
    d = tmp_path_factory.mktemp("toy-corpus")
    src, tgt = toy_parallel_lines(100)
    manifest = []
    for split, lo, hi in (("train", 0, 90), ("valid", 90, 95), ("test", 95, 100)):
        (d / f"{split}.c.tok").write_text("".join(l + "\n" for l in src[lo:hi]))
        (d / f"{split}.asm.tok").write_text("".join(l + "\n" for l in tgt[lo:hi]))
        manifest += [{"id": f"f{i}", "split": split} for i in range(lo, hi)]
    (d / "manifest.json").write_text(json.dumps(manifest))
    return d


class TestTrainerCli:
    def test_train_then_predict(self, toy_corpus_dir, tmp_path, capsys):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(tiny_config(epochs=60).to_dict()))
        ckpt_dir = tmp_path / "ckpt"
        rc = main([
            "train", "--corpus", str(toy_corpus_dir), "--out", str(ckpt_dir),
            "--config", str(cfg_path),
        ])
        assert rc == 0
        assert (ckpt_dir / "checkpoint_last.pt").exists()

        pred_path = tmp_path / "predictions.jsonl"
        rc = main([
            "predict", "--checkpoint", str(ckpt_dir / "checkpoint_last.pt"),
            "--corpus", str(toy_corpus_dir), "--split", "train",
            "--k", "2", "--out", str(pred_path),
        ])
        assert rc == 0
        rows = [json.loads(l) for l in pred_path.read_text().splitlines()]
        assert len(rows) == 90
        assert all(len(r["hypotheses"]) <= 2 for r in rows)
        # the overfit model reproduces most training references exactly
        tgt = (toy_corpus_dir / "train.asm.tok").read_text().splitlines()
        exact = sum(1 for r, t in zip(rows, tgt) if r["hypotheses"][0] == t)
        assert exact >= 85

    def test_bad_config_is_exit_1(self, toy_corpus_dir, tmp_path):
        cfg_path = tmp_path / "bad.json"
        cfg_path.write_text('{"embed_dim": 100, "heads": 3}')
        rc = main([
            "train", "--corpus", str(toy_corpus_dir), "--out", str(tmp_path),
            "--config", str(cfg_path),
        ])
        assert rc == 1


def _neurocc(*args):
    return subprocess.run(
        [sys.executable, "-m", "neurocc.cli", *args],
        capture_output=True, text=True,
    )


def _toy_c_sources(count):
    """Small single-function C files in a few near-identical shapes."""
    rng = random.Random(5)
    sources = {}
    for i in range(count):
        name = f"fn{i}"
        k = rng.randint(2, 9)
        c = rng.randint(1, 9)
        shape = i % 3
        if shape == 0:
            body = f"int {name}(int a, int b) {{ return a * {k} + b - {c}; }}\n"
        elif shape == 1:
            body = f"int {name}(int a, int b) {{ return a - b * {k} + {c}; }}\n"
        else:
            body = f"int {name}(int a) {{ return a * {k} - {c}; }}\n"
        sources[name] = body
    return sources


@pytest.mark.skipif(
    shutil.which("gcc") is None, reason="needs the gcc toolchain"
)
class TestEndToEndTrend:
    def test_trained_model_beats_shuffled_baseline(self, tmp_path):
        src_dir = tmp_path / "sources"
        src_dir.mkdir()
        for name, source in _toy_c_sources(70).items():
            (src_dir / f"{name}.c").write_text(source)
        corpus = tmp_path / "corpus"
        result = _neurocc(
            "build-corpus", "--src", str(src_dir), "--out", str(corpus),
            "--valid", "5", "--test", "8", "--seed", "42",
        )
        assert result.returncode == 0, result.stderr

        merges = tmp_path / "merges.bpe"
        result = _neurocc(
            "bpe", "learn", "--input", str(corpus / "train.c.tok"),
            str(corpus / "train.asm.tok"), "--merges", "400",
            "--output", str(merges),
        )
        assert result.returncode == 0, result.stderr
        for split in ("train", "valid", "test"):
            for side in ("c", "asm"):
                result = _neurocc(
                    "bpe", "apply", "--model", str(merges),
                    "--input", str(corpus / f"{split}.{side}.tok"),
                    "--output", str(corpus / f"{split}.{side}.bpe"),
                )
                assert result.returncode == 0, result.stderr

        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(tiny_config(epochs=80).to_dict()))
        ckpt_dir = tmp_path / "ckpt"
        rc = main([
            "train", "--corpus", str(corpus), "--suffix", "bpe",
            "--config", str(cfg_path), "--out", str(ckpt_dir),
        ])
        assert rc == 0

        pred_path = tmp_path / "predictions.jsonl"
        rc = main([
            "predict", "--checkpoint", str(ckpt_dir / "checkpoint_last.pt"),
            "--corpus", str(corpus), "--split", "test", "--suffix", "bpe",
            "--k", "2", "--out", str(pred_path),
        ])
        assert rc == 0

        # baseline: the same predictions with each line's tokens shuffled,
        # which keeps the vocabulary but destroys instruction order
        rng = random.Random(13)
        baseline_path = tmp_path / "baseline.jsonl"
        with open(baseline_path, "w") as f:
            for line in pred_path.read_text().splitlines():
                row = json.loads(line)
                shuffled = []
                for hyp in row["hypotheses"]:
                    tokens = hyp.split()
                    rng.shuffle(tokens)
                    shuffled.append(" ".join(tokens))
                f.write(json.dumps({"id": row["id"], "hypotheses": shuffled}) + "\n")

        bleu = {}
        for label, path in (("model", pred_path), ("baseline", baseline_path)):
            out = tmp_path / f"report-{label}"
            result = _neurocc(
                "eval", "--pred", str(path), "--corpus", str(corpus),
                "--split", "test", "--criterion", "bleu", "--out", str(out),
            )
            assert result.returncode == 0, result.stderr
            payload = json.loads((out / "report.json").read_text())
            bleu[label] = payload["summary"]["bleu_corpus"]
        print(f"\ncorpus BLEU: model {bleu['model']}, baseline {bleu['baseline']}")
        assert bleu["model"] > 50.0
        assert bleu["model"] > bleu["baseline"] + 20.0
