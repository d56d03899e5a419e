"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid arguments or a structure that violates its invariants."""


class UnsupportedKindError(InputError):
    """Operation is undefined for the sample-set kind it was given."""


class ParseError(ValueError):
    """Malformed input file. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EquilibriumError(ArithmeticError):
    """The two forms of the CRP difference equation disagree."""

    def __init__(self, message, step, discrepancy, where):
        super().__init__(message)
        self.step = step
        self.discrepancy = discrepancy
        self.where = where
