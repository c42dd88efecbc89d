"""Exception hierarchy shared by every layer.

Each error carries a machine-readable ``code`` so the HTTP service can map
failures onto structured error bodies without string matching.
"""


class PopGenError(Exception):
    """Base class for all domain errors."""

    code = "error"


class EmptyPopulationError(PopGenError):
    """An operation that divides by N was given an empty population."""

    code = "empty_population"

    def __init__(self, message: str = "empty population"):
        super().__init__(message)


class OddPoolError(PopGenError):
    """A gamete pool with an odd token count cannot be paired."""

    code = "odd_pool"


class ExtinctionError(PopGenError):
    """Selection left no survivors."""

    code = "extinct"

    def __init__(self, message: str = "population extinct under selection"):
        super().__init__(message)


class MeanFitnessZeroError(PopGenError):
    """The selection recurrence is undefined when mean fitness is zero."""

    code = "mean_fitness_zero"

    def __init__(self, message: str = "mean fitness zero"):
        super().__init__(message)


class NotNormalizedError(PopGenError):
    """An operation required allele frequencies with p + q = 1."""

    code = "not_normalized"


class ValidationError(PopGenError):
    """One or more input fields are out of range.

    ``fields`` maps field name -> human-readable problem.
    """

    code = "validation"

    def __init__(self, fields: dict[str, str]):
        self.fields = dict(fields)
        detail = "; ".join(f"{k}: {v}" for k, v in sorted(self.fields.items()))
        super().__init__(f"invalid parameters: {detail}")


class SequenceError(PopGenError):
    """A generation was entered out of order."""

    code = "sequence"


class WrongTotalError(PopGenError):
    """Entered counts do not add up to the population size the kind expects."""

    code = "wrong_total"


class TerminalSessionError(PopGenError):
    """The session reached extinction or fixation; further steps are refused."""

    code = "terminal"


class NoDataError(PopGenError):
    """Charts and exports need at least one complete record."""

    code = "no_data"

    def __init__(self, message: str = "no data"):
        super().__init__(message)


class SessionNotFoundError(PopGenError):
    """Unknown session id."""

    code = "not_found"


class SchemaVersionError(PopGenError):
    """A persisted document declares a schema version this code cannot read."""

    code = "schema_version"


class CorruptPayloadError(PopGenError):
    """A persisted document is not a well-formed session."""

    code = "corrupt_payload"
