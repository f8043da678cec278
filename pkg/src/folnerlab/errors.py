"""Error types shared by all folnerlab modules."""


class DomainError(ValueError):
    """An input violates an operation's domain contract."""


class CapacityError(RuntimeError):
    """A desk-scale enumeration cap would be exceeded.

    The message always names the violated cap.
    """
