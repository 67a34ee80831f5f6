"""Exception hierarchy.

Errors fall in three families that the CLI maps to exit codes: hypothesis
rejections (a formula does not apply to the data), scene input errors, and
plain misuse of the algebra (bad arguments to ring operations).
"""


class SegreError(Exception):
    """Base class for every error raised by segrecalc."""


# algebra misuse


class NonUnitConstantTerm(SegreError, ValueError):
    pass


class DimensionOverflow(SegreError, ValueError):
    pass


class BaseMismatch(SegreError, ValueError):
    pass


class RankUnderflow(SegreError, ValueError):
    pass


class NotDegreeOne(SegreError, ValueError):
    pass


class EmptyList(SegreError, ValueError):
    pass


class GradingMismatch(SegreError, ValueError):
    pass


class InvalidDimensions(SegreError, ValueError):
    pass


# hypothesis rejections (exit code 1)


class HypothesisError(SegreError):
    """A formula's hypotheses are not met by the supplied data."""


class TransversalityViolated(HypothesisError):
    pass


class HypothesisNotDeclared(HypothesisError):
    pass


class RankInconsistency(HypothesisError):
    pass


class OracleInapplicable(HypothesisError):
    pass


class NoApplicableFormula(HypothesisError):
    pass


# scene input (exit code 2)


class SceneError(SegreError):
    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if path:
            where.append(f"at {path}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class SchemaError(SceneError):
    pass


class SemanticError(SceneError):
    pass
