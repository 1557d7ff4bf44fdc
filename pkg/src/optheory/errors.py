"""Exception types raised by the workbench."""


class InputError(ValueError):
    """Malformed input: dimension mismatch, schema violation, unknown name."""


class FaithfulnessError(ValueError):
    """The bipartite form is singular, so transposition is undefined."""


class ZeroProbabilityError(ValueError):
    """Conditioning on a transformation that never occurs on the given state."""


class CoexistenceError(ValueError):
    """A physical sum was requested for transformations that are not coexistent."""


class NotPreparableError(ValueError):
    """No local transformation prepares the requested target with nonzero probability."""


class PositivityError(ValueError):
    """The Gram matrix has a significantly negative eigenvalue."""


class IdentifiabilityError(ValueError):
    """The calibration design matrix does not determine the transformation."""
