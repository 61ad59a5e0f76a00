"""Exception hierarchy.

Every numerical failure raised by the package derives from
:class:`TritospecError`, so the CLI can map the whole family onto one exit code
and print the class name verbatim.
"""


class TritospecError(Exception):
    """Base class for all numerical errors raised by tritospec."""


class NonConvergence(TritospecError):
    pass


class DegenerateCase(TritospecError):
    """The product sigma*tau vanishes, so the closed forms do not apply."""


class ScaleOverflow(TritospecError):
    """Powers of the eigenvector ratio are not representable in float64."""


class NotNormal(TritospecError):
    pass


class NotHermitian(TritospecError):
    pass


class NotSymmetric(TritospecError):
    pass


class NotTraceless(TritospecError):
    pass


class RankDeficient(TritospecError):
    pass


class SubspaceMismatch(TritospecError):
    pass


class ZeroProjection(TritospecError):
    pass


class AmbiguousMatch(TritospecError):
    pass


class LengthMismatch(TritospecError):
    pass
