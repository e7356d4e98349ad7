"""Exception hierarchy shared by every package.

Each error carries a stable ``error_code`` (reported in run reports) and the
process ``exit_code`` the command line uses when the error reaches it.
"""

from typing import Optional


class BPGCError(ValueError):
    """Base class for all library errors."""

    error_code = 'BPGC_ERROR'
    exit_code = 2


class InvalidParameter(BPGCError):
    """A parameter vector failed validation."""

    error_code = 'INVALID_PARAMETER'

    def __init__(self, name: str, message: str):
        super().__init__(f"{name}: {message}")
        self.name = name


class NonPositiveParameter(InvalidParameter):
    error_code = 'NON_POSITIVE_PARAMETER'

    def __init__(self, name: str, value: float):
        super().__init__(name, f"must be > 0 (got {value!r})")


class NegativeInteraction(InvalidParameter):
    error_code = 'NEGATIVE_INTERACTION'

    def __init__(self, name: str, value: float):
        super().__init__(name, f"must be >= 0 (got {value!r})")


class NonFiniteParameter(InvalidParameter):
    error_code = 'NON_FINITE_PARAMETER'

    def __init__(self, name: str, value: float):
        super().__init__(name, f"must be finite (got {value!r})")


class DivergentSeries(InvalidParameter):
    """The normalizing series does not converge for these parameters."""

    error_code = 'DIVERGENT_SERIES'

    def __init__(self, message: str):
        super().__init__('m11/m12', message)


class NoConvergence(BPGCError):
    """A series needed more terms than the hard cap allows."""

    error_code = 'NO_CONVERGENCE'

    def __init__(self, terms: int):
        super().__init__(f"series not converged after {terms} terms")
        self.terms = terms


class NumericalOverflow(BPGCError):
    error_code = 'OVERFLOW'


class InvalidObservation(BPGCError):
    error_code = 'INVALID_OBSERVATION'


class InvalidProbability(BPGCError):
    error_code = 'INVALID_PROBABILITY'


class InvalidGrid(BPGCError):
    error_code = 'INVALID_GRID'


class InvalidDistributionParameter(BPGCError):
    error_code = 'INVALID_DISTRIBUTION_PARAMETER'


class InvalidConfig(BPGCError):
    error_code = 'INVALID_CONFIG'


class NonIdentifiable(BPGCError):
    error_code = 'NON_IDENTIFIABLE'


class DidNotConverge(BPGCError):
    """The optimizer stopped without meeting its tolerances.

    ``result`` holds the last iterate and the full convergence trace.
    """

    error_code = 'DID_NOT_CONVERGE'
    exit_code = 4

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class SingularInformation(BPGCError):
    error_code = 'SINGULAR_INFORMATION'


class BoundaryOptimum(BPGCError):
    error_code = 'BOUNDARY_OPTIMUM'

    def __init__(self, names):
        super().__init__(f"optimum on the boundary for {', '.join(names)}; standard errors withheld")
        self.names = tuple(names)


class DegenerateSample(BPGCError):
    error_code = 'DEGENERATE_SAMPLE'


class DatasetParseError(BPGCError):
    """A dataset file has rows that do not parse to valid observations."""

    error_code = 'DATASET_PARSE_ERROR'

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class DatasetIOError(BPGCError):
    error_code = 'IO_ERROR'
    exit_code = 3
