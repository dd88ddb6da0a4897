"""Exception hierarchy shared by every module of the package."""


class IsoError(Exception):
    """Base class for all errors raised by bidiso."""


class TableError(IsoError, ValueError):
    """A table does not describe the structure it claims to."""


class TableShapeError(TableError):
    pass


class EntryOutOfRange(TableError):
    def __init__(self, row, col, value, n):
        self.row, self.col, self.value = row, col, value
        super().__init__(f"entry table[{row}][{col}] = {value} is outside [0, {n})")


class NoIdentity(TableError):
    def __init__(self):
        super().__init__("no two-sided identity element")


class MissingInverse(TableError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"element {element} has no unique two-sided inverse")


class NotAssociative(TableError):
    def __init__(self, a, b, c):
        self.triple = (a, b, c)
        super().__init__(f"(a*b)*c != a*(b*c) for (a, b, c) = {(a, b, c)}")


class InvalidOrder(IsoError, ValueError):
    pass


class NotASubgroup(IsoError, ValueError):
    pass


class NotNormal(IsoError, ValueError):
    pass


class NotGenerating(IsoError, ValueError):
    pass


class OrderMismatch(IsoError, ValueError):
    def __init__(self, n, m):
        self.orders = (n, m)
        super().__init__(f"structures have different orders {n} and {m}")


class NotAPGroup(IsoError, ValueError):
    pass


class ChoiceOutOfRange(IsoError, IndexError):
    pass


class AddNotAbelianGroup(TableError):
    pass


class MulNotAssociative(TableError):
    def __init__(self, a, b, c):
        self.triple = (a, b, c)
        super().__init__(f"multiplication not associative at (a, b, c) = {(a, b, c)}")


class NotDistributive(TableError):
    def __init__(self, a, b, c, side):
        self.triple = (a, b, c)
        self.side = side
        super().__init__(f"{side} distributivity fails at (a, b, c) = {(a, b, c)}")


class SpecError(IsoError, ValueError):
    """Unknown or malformed constructor expression."""


class TooLarge(IsoError, ValueError):
    pass


class TableSyntaxError(IsoError, ValueError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class ValidationError(IsoError, ValueError):
    """A parsed file failed structural validation; wraps the underlying error."""

    def __init__(self, cause):
        self.cause = cause
        super().__init__(f"{type(cause).__name__}: {cause}")


class UnknownSpec(SpecError):
    """Constructor name not recognised."""
