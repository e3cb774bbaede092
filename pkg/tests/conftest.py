import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from synth import generate_units  # noqa: E402

from neurocc.benchmark import bundled_benchmark  # noqa: E402
from neurocc.corpus import build_pairs  # noqa: E402
from neurocc.toolchain import ToolchainConfig  # noqa: E402


@pytest.fixture(scope="session")
def toolchain():
    tc = ToolchainConfig()
    tc.resolved_cc()  # fail fast if no compiler
    return tc


@pytest.fixture(scope="session")
def benchmark_entries():
    return bundled_benchmark()


@pytest.fixture(scope="session")
def sample_units():
    """200 synthetic compilable units (the pipeline-scale sample corpus)."""
    return generate_units(200, seed=7)


@pytest.fixture(scope="session")
def sample_pairs(sample_units, toolchain):
    """Unfiltered pairs built from the sample units (compiled once)."""
    pairs, skipped = build_pairs(sample_units, toolchain, max_combined=10**9)
    assert not [s for s in skipped if s[1] in ("compile", "parse")], skipped
    return pairs
