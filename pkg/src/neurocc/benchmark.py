"""Loaders for the bundled IO benchmark and the fine-grained fixture table.

The benchmark is a set of small self-contained C functions (arithmetic
loops and array operations with the trailing-length convention), each
paired with an IO-testing seed via `benchmark_manifest.json`. The fixture
CSV carries per-function results of a fully trained model for correlation
and report testing.
"""

import csv
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .corpus import SourceUnit
from .equivalence import DEFAULT_FLOAT_TOLERANCE, DEFAULT_N_CASES


@dataclass
class BenchmarkEntry:
    unit: SourceUnit
    n_cases: int = DEFAULT_N_CASES
    seed: int = 0
    float_tolerance: float = DEFAULT_FLOAT_TOLERANCE


def _data_root() -> Path:
    return Path(resources.files("neurocc")) / "benchmark_data"


def load_benchmark(manifest_path) -> list:
    """Load a benchmark manifest: JSON list of per-function entries."""
    manifest_path = Path(manifest_path)
    with open(manifest_path, encoding="utf-8") as f:
        raw = json.load(f)
    entries = []
    for obj in raw:
        src_path = manifest_path.parent / obj["c_source_path"]
        source = src_path.read_text(encoding="utf-8")
        entries.append(
            BenchmarkEntry(
                unit=SourceUnit(
                    id=obj["id"], full_source=source, function_name=obj["id"]
                ),
                n_cases=obj.get("n_cases", DEFAULT_N_CASES),
                seed=obj.get("seed", 0),
                float_tolerance=obj.get("float_tolerance", DEFAULT_FLOAT_TOLERANCE),
            )
        )
    return entries


def bundled_benchmark() -> list:
    return load_benchmark(_data_root() / "benchmark_manifest.json")


def bundled_benchmark_manifest_path() -> Path:
    return _data_root() / "benchmark_manifest.json"


def fine_grained_fixture() -> list:
    """The shipped per-function results table of a fully trained model."""
    rows = []
    with open(_data_root() / "fine_grained_best_model.csv", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            rows.append(
                {
                    "Function": row["Function"],
                    "IO": int(row["IO"]),
                    "Syntax": int(row["Syntax"]),
                    "BLEU": float(row["BLEU"]),
                    "LOC": int(row["LOC"]),
                    "TOKENS": int(row["TOKENS"]),
                    "CYCLO": int(row["CYCLO"]),
                    "PARAMS": int(row["PARAMS"]),
                    "POINTERS": int(row["POINTERS"]),
                }
            )
    return rows
