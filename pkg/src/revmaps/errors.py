"""Exception types shared across the toolkit.

Every error corresponds to a violated precondition or an honestly
undecidable situation at the working truncation; nothing is swallowed.
"""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class FieldMismatch(ToolkitError):
    """Operands live in different cyclotomic fields."""


class DivisionByZero(ToolkitError, ZeroDivisionError):
    """Exact division by the zero element."""


class OrderNotInField(ToolkitError):
    """Requested root of unity does not exist in the configured field."""


class RootNotInField(ToolkitError):
    """A needed k-th root has no exact representative in the field.

    Carries enough context (the unscaled coefficient data) for the caller
    to report the obstruction instead of guessing.
    """

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


class TruncMismatch(ToolkitError):
    """Series with different truncation degrees were mixed."""


class ConstantTermInInner(ToolkitError):
    """Composition f(g) requires g to vanish at the origin."""


class NotInvertible(ToolkitError):
    """Map has no compositional inverse (singular linear part)."""


class NotUnit(ToolkitError):
    """Series has zero constant term, so no multiplicative inverse."""


class BadBranch(ToolkitError):
    """Chosen root does not match the constant term it should branch from."""


class NotTangentToIdentity(ToolkitError):
    """Operation requires a map of the form t + higher order terms."""


class IdentityInput(ToolkitError):
    """Invariant extraction is undefined for the identity map."""


class TruncationTooLow(ToolkitError):
    """Truncation degree too small to decide the question."""


class BadOmega(ToolkitError):
    """Rotation parameter fails its defining power condition."""


class NotFiniteOrder(ToolkitError):
    """Map is not of the claimed finite order at this truncation."""


class HypothesisFails(ToolkitError):
    """Stated hypothesis of a dichotomy check does not hold."""


class NotReversibleClass(ToolkitError):
    """One-variable invariants rule out the reversible conjugacy class."""


class BadShape(ToolkitError):
    """Series does not have the shape required by the solver."""


class BadLinearPart(ToolkitError):
    """Linear part is not of the diagonal paired-eigenvalue form."""


class ZeroDivisorEncountered(ToolkitError):
    """A homological divisor vanished: the eigenvalue has finite order."""


class Singular(ToolkitError):
    """Linear map is singular."""


class WrongParity(ToolkitError):
    """Centralizer element has the wrong parity for this operation."""


class OrderNotOne(ToolkitError):
    """Lifting requires a series of order exactly one."""


class NotResonantShape(ToolkitError):
    """Map is not of resonant or inverse-resonant monomial shape."""


class NotReversible(ToolkitError):
    """Map is provably not reversible at this truncation."""


class BadSymmetry(ToolkitError):
    """Input series lacks the required rotational equivariance."""


class BadDeterminant(ToolkitError):
    """Factorization requires linear part of determinant +-1."""


class SearchFailed(ToolkitError):
    """Bounded search exhausted its budget without a certificate.

    Existence may still hold; the failure is a fact about the search at
    this truncation, recorded with diagnostics.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class SubfactorizationFailed(ToolkitError):
    """The one-variable factorization step failed at this truncation."""
