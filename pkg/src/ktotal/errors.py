"""Exception hierarchy shared by all modules."""


class KTotalError(Exception):
    """Base class for every error raised by the package."""


class DomainMismatch(KTotalError):
    pass


class NotWellDefined(KTotalError):
    """A proposed homomorphism does not respect the relations of its domain."""


class InfiniteGroup(KTotalError):
    pass


class BoundExceeded(KTotalError):
    pass


class OwnerMismatch(KTotalError):
    pass


class ShapeMismatch(KTotalError):
    pass


class NotAMember(ShapeMismatch):
    """A well-shaped payload violates the defining constraints of its group."""


class UnsupportedKind(KTotalError):
    """The operation is outside the closed class of expressions handled here."""


class UnsupportedGroup(KTotalError):
    pass


class OutOfRange(KTotalError):
    pass


class BoundMismatch(KTotalError):
    pass


class UnknownFixture(KTotalError):
    pass


class GroupMismatch(KTotalError):
    pass


class InputError(KTotalError):
    pass
