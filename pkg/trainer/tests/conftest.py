import pytest

from neurocc_trainer.config import ModelConfig
from neurocc_trainer.train import train


def toy_parallel_lines(count=100):
    """Token-line pairs in the corpus file format, trivially memorizable."""
    src = [f"int f{i} ( int x ) {{ return x + {i % 10} ; }}" for i in range(count)]
    tgt = [
        f"f{i}: <newline> movl %edi , %eax <newline> "
        f"addl ${i % 10} , %eax <newline> ret <newline>"
        for i in range(count)
    ]
    return src, tgt


def tiny_config(**overrides):
    """A configuration small enough to overfit on one CPU core in seconds."""
    base = dict(
        encoder_layers=2, decoder_layers=2, embed_dim=128, heads=4,
        ff_dim=256, epochs=60, batch_size=20, warmup_steps=60,
        learning_rate=1e-3, dropout=0.0, seed=3,
    )
    base.update(overrides)
    return ModelConfig(**base)


@pytest.fixture(scope="session")
def toy_corpus():
    return toy_parallel_lines(100)


@pytest.fixture(scope="session")
def overfit_run(toy_corpus, tmp_path_factory):
    src, tgt = toy_corpus
    out = tmp_path_factory.mktemp("overfit-ckpt")
    model, vocab, run = train(tiny_config(), src, tgt, out, log=lambda s: None)
    return model, vocab, run, out


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: full-scale runs excluded unless -m slow is given"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("-m"):
        return
    skip = pytest.mark.skip(reason="slow: run with -m slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
