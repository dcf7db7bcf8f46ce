"""Exception hierarchy for the fbelos package.

Every error raised by the library derives from :class:`FbelosError`, so
callers can catch library failures without also trapping programming errors.
"""


class FbelosError(Exception):
    """Base class for all fbelos errors."""


# --- expression language ---------------------------------------------------

class ExpressionSyntaxError(FbelosError):
    """Malformed expression text.

    Attributes:
        offset: character offset of the failure in the source string.
        expected: frozenset of token descriptions that would have been legal.
    """

    def __init__(self, message, offset, expected=frozenset()):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.expected = frozenset(expected)


class UnknownIdentifier(ExpressionSyntaxError):
    """Identifier outside {x, pi, e} and the supported function set."""

    def __init__(self, name, offset):
        super().__init__(f"unknown identifier {name!r}", offset)
        self.name = name


class DomainError(FbelosError):
    """Evaluation left the real domain (sqrt of a negative, log of a
    non-positive, division by zero, overflow to non-finite).

    Attributes:
        node: the offending AST node.
        value: the argument that caused the violation.
    """

    def __init__(self, message, node=None, value=None):
        super().__init__(message)
        self.node = node
        self.value = value


class NonDifferentiable(FbelosError):
    """Expression contains a node with no symbolic derivative (abs)."""


# --- numerics ---------------------------------------------------------------

class NoConvergence(FbelosError):
    """Quadrature failed to converge within the level cap.

    The best available estimate is attached as ``result``.
    """

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


class NoBracket(FbelosError):
    """Root finder called without a sign change over the interval."""


# --- profiles ---------------------------------------------------------------

class NotAdmissible(FbelosError):
    """Profile violates the admissibility conditions.

    ``violations`` lists (x, value, reason) triples for every failed sample.
    """

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class UnknownPreset(FbelosError):
    """Preset name not in the catalog."""


class BadCusp(FbelosError):
    """Cusp parameter outside the open unit interval."""


class BadParameter(FbelosError):
    """Operation parameter outside its legal range."""


# --- figure construction & propositions -------------------------------------

class NestingViolation(FbelosError):
    """Lower arcs are not below the upper arc for the chosen cusp."""


class BadSection(FbelosError):
    """Section point ordering violated (requires a < c < b)."""


class DegenerateParallelogram(FbelosError):
    """Parallelogram has a side shorter than the degeneracy threshold."""


class InfiniteSlope(FbelosError):
    """Endpoint tangent is vertical; tangent-line operations unavailable."""


class ParallelTangents(FbelosError):
    """Endpoint tangents are parallel; no tangent parallelogram exists."""


class NotARectangle(FbelosError):
    """Operation requires the tangent parallelogram to be a rectangle."""


class DegenerateDenominator(FbelosError):
    """Diagonal-line denominator vanished; incidence formulas undefined."""


class NoMeanValuePoint(FbelosError):
    """No interior point attains the mean value (guarded; cannot occur for
    admissible continuous profiles)."""


# --- rendering ---------------------------------------------------------------

class OverlayUnavailable(FbelosError):
    """Requested overlay's precondition does not hold for this figure."""
