"""Exception hierarchy.

Every error carries a short ``category`` string which the command line
interface prints so callers can branch on failures without parsing text.
"""


class NoiseBenchError(Exception):
    category = "error"


class InvalidParameterError(NoiseBenchError, ValueError):
    category = "invalid-parameter"


class InvalidInputError(NoiseBenchError, ValueError):
    category = "invalid-input"


class NumericalDesignError(NoiseBenchError, ArithmeticError):
    category = "numerical-design"


class EmbeddingError(NoiseBenchError, ArithmeticError):
    category = "embedding-failure"


class DegenerateInputError(InvalidInputError):
    category = "degenerate-input"


class DegenerateFitError(NoiseBenchError, ArithmeticError):
    category = "degenerate-fit"


class NoConvergenceError(NoiseBenchError, ArithmeticError):
    category = "no-convergence"


class FormatError(NoiseBenchError, ValueError):
    category = "format"


class CorruptFileError(FormatError):
    category = "corrupt-file"


class ParseError(FormatError):
    category = "parse"


class EmptyDatasetError(InvalidInputError):
    category = "empty-dataset"
