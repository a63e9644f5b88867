"""Exception hierarchy.

Two families: input problems (malformed documents, bad gluing data) and
mathematical degeneracies hit at run time (singular matrices, shapes on the
excluded locus, failed preconditions of a transformation). The CLI maps the
former to exit code 2 and the latter to exit code 3.
"""


class FslGeomError(Exception):
    """Base class for all library errors."""


class InputError(FslGeomError):
    """A document, descriptor, or argument is structurally invalid."""


class MalformedGluing(InputError):
    """Face gluings violate the pairing or incidence rules."""


class MathError(FslGeomError):
    """A computation hit a mathematical degeneracy."""


class DegenerateShape(MathError):
    """A shape parameter is within tolerance of {0, 1} (or a denominator of 0)."""


class DegenerateQuadratic(MathError):
    """The leading quadratic coefficient A vanishes; no explicit root."""


class SingularGram(MathError):
    """det of a Gram matrix is within tolerance of 0 (non-regular character)."""


class SingularJacobian(MathError):
    """A Jacobian determinant is within tolerance of 0."""


class NoConvergence(MathError):
    """Newton iteration exhausted its budget without meeting the tolerance."""


class InvalidSplit(MathError):
    """A 0-2 move split does not sum to the edge row, or supplied shapes are inconsistent."""


class FlatteningBroken(MathError):
    """A transformation produced a flattening that fails its exact validity conditions."""


class PatternMismatch(MathError):
    """Rows/columns handed to a fold do not carry the required local pattern."""


class DegenerateFill(MathError):
    """A core-curve holonomy gives sinh(H/2) = 0; the surgery factor is undefined."""
