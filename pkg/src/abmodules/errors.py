"""Exception hierarchy.

Every error carries a module-qualified ``code`` used by the command line
front-end for its reports and exit status.
"""


class AbModulesError(Exception):
    code = "abmodules.error"
    #: exit status used by the CLI: 1 for mathematical failures, 2 for input errors
    exit_status = 1


class InputError(AbModulesError):
    code = "io.input"
    exit_status = 2


class ParseError(InputError):
    code = "ab_algebra.SyntaxError"

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class NotAUnit(AbModulesError, ArithmeticError):
    code = "scalars.NotAUnit"


class DivisorNotMonic(AbModulesError):
    code = "ab_algebra.DivisorNotMonic"


class NotFullySplit(AbModulesError):
    code = "ab_algebra.NotFullySplit"


class NotHomogeneous(AbModulesError):
    code = "ab_algebra.NotHomogeneous"


class PrecisionExhausted(AbModulesError):
    code = "ab_module.PrecisionExhausted"


class NotStabilized(AbModulesError):
    code = "ab_module.NotStabilized"


class NotRegular(AbModulesError):
    code = "ab_module.NotRegular"


class NotGeometric(AbModulesError):
    code = "ab_module.NotGeometric"


class InvalidTheta(AbModulesError):
    code = "ab_module.InvalidTheta"


class NotAFresco(AbModulesError):
    code = "fresco.NotAFresco"


class NotNormal(AbModulesError):
    code = "fresco.NotNormal"


class SelectionAmbiguous(AbModulesError):
    code = "fresco.SelectionAmbiguous"


class InternalConsistencyError(AbModulesError):
    code = "fresco.InternalConsistency"


class RankNotStabilized(AbModulesError):
    code = "xi.RankNotStabilized"


class FieldTooSmall(AbModulesError):
    code = "xi.FieldTooSmall"


class NotMinimalEmbedding(AbModulesError):
    code = "xi.NotMinimalEmbedding"


class NotPrimitive(AbModulesError):
    code = "theme.NotPrimitive"


class NotATheme(AbModulesError):
    code = "theme.NotATheme"


class CanonicalizationFailed(AbModulesError):
    code = "theme.CanonicalizationFailed"
