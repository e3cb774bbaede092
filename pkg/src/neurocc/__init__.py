"""neurocc: corpus construction and evaluation toolkit for neural compilation.

Builds parallel C / x86-assembly datasets from compilable C functions and
evaluates predicted assembly on syntactic correctness, BLEU, and
observational equivalence, with the accompanying error-analysis suite.
"""

from . import analysis, benchmark, corpus, equivalence, lexing, metrics, subword, toolchain
from .errors import NeuroccError

__version__ = "0.1.0"

__all__ = [
    "analysis",
    "benchmark",
    "corpus",
    "equivalence",
    "lexing",
    "metrics",
    "subword",
    "toolchain",
    "NeuroccError",
    "__version__",
]
