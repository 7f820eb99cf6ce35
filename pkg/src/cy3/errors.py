"""Exception hierarchy shared by all modules."""


class Cy3Error(Exception):
    """Base class for all library errors."""


class IncompatibleFields(Cy3Error):
    """Two surds live in distinct real quadratic fields."""


class ComplexRoots(Cy3Error):
    """t^2 - s*t + 1 has no real roots (|s| < 2)."""


class ZeroVector(Cy3Error):
    pass


class NotUnimodular(Cy3Error):
    pass


class DoesNotPreserveL(Cy3Error):
    pass


class NotUnipotent(Cy3Error):
    pass


class IsIdentity(Cy3Error):
    pass


class NotFiniteOrder(Cy3Error):
    pass


class InconsistentTag(Cy3Error):
    """Internal check failure: order and eigenvalue tag disagree."""


class GeometricInconsistency(Cy3Error):
    """Input lattice data violates a consequence of Calabi-Yau geometry.

    `mechanism` names the classical theorem whose conclusion fails for the
    input: the Hodge index theorem, the Lefschetz hyperplane theorem, or
    the full-Jordan-block requirement on unipotent actions.
    """

    def __init__(self, mechanism: str, detail: str = ""):
        self.mechanism = mechanism
        self.detail = detail
        msg = mechanism if not detail else f"{mechanism}: {detail}"
        super().__init__(msg)


class RelationsNotVerified(Cy3Error):
    pass


class NotOnQuadric(Cy3Error):
    pass


class SingularPoint(Cy3Error):
    pass


class NotUnipotentInFrame(Cy3Error):
    pass


class ConstraintViolated(Cy3Error):
    pass


class NonIntegral(Cy3Error):
    pass


class LinesNotPreserved(Cy3Error):
    pass


class BoundTooLarge(Cy3Error):
    pass


class NonPreservingGenerator(Cy3Error):
    pass


class ParseError(Cy3Error):
    pass


class ValidationError(Cy3Error):
    pass
