"""Exception hierarchy shared by all modules."""


class ContactLabError(Exception):
    """Base class for every error raised by contactlab."""


class ContractViolation(ContactLabError, ValueError):
    """An argument breaks the documented pre-conditions (shape, sign, domain)."""


class DegenerateInputError(ContactLabError, ValueError):
    """The input is well-formed but geometrically degenerate for the request.

    Typical cases: a non-immersed curve, the Reeb field tangent to a curve,
    overlapping planar traces where chords form a continuum.
    """


class IntegrationAccuracyError(ContactLabError, RuntimeError):
    """The step-doubling error monitor of a flow exceeded its tolerance."""
