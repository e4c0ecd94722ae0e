"""Exception hierarchy shared by all tagforge modules."""


class TagError(Exception):
    """Base class for every error raised by tagforge."""


class NoSuchAddress(TagError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NodeNotInTree(TagError, ValueError):
    pass


class NotSubstitutionSite(TagError):
    pass


class LabelMismatch(TagError):
    pass


class FillerNotInitial(TagError):
    pass


class AdjunctionForbidden(TagError):
    pass


class AuxNotAuxiliary(TagError):
    pass


class IncompleteTree(TagError):
    pass


class PosMismatch(TagError):
    pass


class MissingToken(TagError):
    pass


class UnexpectedToken(TagError):
    pass


class GrammarInvalid(TagError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class EmptySentence(TagError, ValueError):
    pass


class GrammarNotLexicalized(TagError):
    pass


class InvalidDerivation(TagError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class NoSuchNode(TagError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class BudgetExceeded(TagError):
    pass


class GrammarSyntaxError(TagError):
    """Malformed grammar text; carries a 1-based line and column."""

    def __init__(self, message, line, column):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class ValidationError(TagError):
    """Grammar text parsed but failed validation.

    ``located`` pairs each diagnostic with the (line, column) of the
    offending tree or node, when known.
    """

    def __init__(self, located):
        self.located = list(located)
        self.diagnostics = [d for d, _ in self.located]
        lines = []
        for diag, loc in self.located:
            prefix = f"{loc[0]}:{loc[1]}: " if loc else ""
            lines.append(prefix + str(diag))
        super().__init__("\n".join(lines))


class TokenFormatError(TagError, ValueError):
    def __init__(self, message, line, column):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")
