"""Exception hierarchy. Everything derives from ``ArithError`` (a ValueError)."""


class ArithError(ValueError):
    pass


class SpecError(ArithError):
    """Malformed task spec or subgroup expression."""


class DomainError(ArithError):
    """Operand outside the task's operand domain."""


class CompletionParseError(ArithError):
    """Completion text contains something other than digits and spaces."""


class WidthOverflowError(ArithError):
    """Completion has more digits than the task's output width."""


class CapacityError(ArithError):
    """Requested sample is larger than the population."""


class BudgetError(ArithError):
    """Exact enumeration would exceed the configured pair budget."""


class WidthMismatchError(ArithError):
    """Reports with different output widths were combined."""


class RecordFormatError(ArithError):
    def __init__(self, path, lineno, msg):
        self.path = str(path)
        self.lineno = lineno
        super().__init__(f"{self.path}:{lineno}: {msg}")
