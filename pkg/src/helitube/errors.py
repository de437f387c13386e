"""Exception hierarchy shared by the library and the CLI."""


class DomainError(ValueError):
    """An argument lies outside the domain of a formula."""


class OutOfMeyerhoffRange(DomainError):
    """Real length is at or above Meyerhoff's constant; no maximal tube exists."""

    def __init__(self, ell: float, bound: float):
        self.ell = ell
        self.bound = bound
        super().__init__(
            f"real length {ell!r} is not below the Meyerhoff constant {bound!r}; "
            "the maximal solid tube is undefined"
        )


class SpectrumFormatError(ValueError):
    """Base class for malformed spectrum input."""


class ParseError(SpectrumFormatError):
    def __init__(self, reason: str, line: int | None = None, column: int | None = None):
        self.reason = reason
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}, column {column}: " if column is not None else f"line {line}: "
        super().__init__(where + reason)


class SchemaError(SpectrumFormatError):
    def __init__(self, reason: str, path: str = ""):
        self.reason = reason
        self.path = path
        super().__init__(f"{path}: {reason}" if path else reason)
