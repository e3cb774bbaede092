"""Exception hierarchy shared across the toolkit."""


class NeuroccError(Exception):
    """Base class for all toolkit errors."""


class UnterminatedLiteral(NeuroccError):
    """Unclosed string, character literal, or comment in the input."""


class CompileError(NeuroccError):
    """The external compiler exited nonzero."""

    def __init__(self, message, stderr=""):
        super().__init__(message)
        self.stderr = stderr


class ToolchainMissing(NeuroccError):
    """The configured compiler/assembler binary is not available."""


class FunctionNotFound(NeuroccError):
    """The requested function definition was not found in the input."""


class InsufficientPairs(NeuroccError):
    """Not enough pairs to satisfy the requested split sizes."""


class LineCountMismatch(NeuroccError):
    """Parallel corpus files disagree on line counts."""


class EmptyCorpus(NeuroccError):
    """An operation that needs at least one pair/line got none."""


class EmptyInput(NeuroccError):
    """An aggregate statistic was requested over empty input."""


class LengthMismatch(NeuroccError):
    """Hypothesis and reference line counts differ."""


class DanglingContinuation(NeuroccError):
    """A subword line ends with a continuation marker."""


class UnsupportedType(NeuroccError):
    """A function signature uses types the harness cannot handle."""


class HarnessBuildError(NeuroccError):
    """The reference side of an equivalence run failed to build.

    This always indicates a pipeline bug, never a model error.
    """


class DegenerateInput(NeuroccError):
    """Statistical input on which the requested quantity is undefined."""


class CheckpointMismatch(NeuroccError):
    """A model checkpoint does not match the supplied vocabulary."""
