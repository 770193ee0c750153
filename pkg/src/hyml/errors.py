"""Exception hierarchy shared across the package."""


class HymlError(Exception):
    """Base class for all errors raised by this package."""


class UnknownSymbolError(HymlError):
    """A symbol is not declared in the signature with the expected kind and sort."""


class ArityMismatchError(HymlError):
    """An operation symbol is applied to the wrong number of arguments."""


class SortMismatchError(HymlError):
    """Two positions that must share a sort do not."""


class NotSubstitutableError(HymlError):
    """Substitution would capture a free variable."""


class FeatureNotInSystemError(HymlError):
    """A formula uses a construct that the selected deductive system lacks."""


class NotForm0Error(HymlError):
    """Frame-level evaluation requires a formula with only state variables."""


class UnboundVariableError(HymlError):
    """A valuation or assignment does not cover a variable that is read."""


class ValidationError(HymlError):
    """A structural invariant of a value or document is violated."""

    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)
        self.line = line
        self.col = col


class SexprSyntaxError(ValidationError):
    """Malformed s-expression input."""


class ProofError(HymlError):
    """Base class for proof-step rejections."""


class SchemeMismatchError(ProofError):
    """The step formula is not the stated instantiation of the scheme."""


class SideConditionViolatedError(ProofError):
    """A scheme or rule side condition fails."""

    def __init__(self, name, message):
        super().__init__(f"{name}: {message}")
        self.name = name


class NotInSystemError(ProofError):
    """The cited scheme or rule is not available in the script's system."""


class RuleShapeMismatchError(ProofError):
    """Premises and conclusion do not fit the rule's shape."""


class BadReferenceError(ProofError):
    """A step cites a premise or step that is not available."""
