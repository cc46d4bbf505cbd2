class SeqcmError(Exception):
    def __init__(self, msg, inner=None):
        super().__init__(msg)
        self.inner = inner


class RingMismatchError(SeqcmError):
    pass


class AmbientMismatchError(SeqcmError):
    pass


class HomogeneityError(SeqcmError):
    pass


class ZeroModuleError(SeqcmError):
    pass


class InfiniteLengthError(SeqcmError):
    pass


class NotMonomialError(SeqcmError):
    pass


class NotSystemOfParametersError(SeqcmError):
    pass


class IndexOutOfRangeError(SeqcmError):
    pass


class InvariantViolation(SeqcmError):
    """ Two independent computations of the same quantity disagree. """


class SearchExhausted(SeqcmError):
    pass


class SessionParseError(SeqcmError):
    def __init__(self, msg, line=None, column=None, token=None, source_line=None, inner=None):
        super().__init__(msg, inner)
        self.line = line
        self.column = column
        self.token = token
        self.source_line = source_line

    def __str__(self):
        msg = super().__str__()
        if self.line is None:
            return msg
        where = f"line {self.line}, column {self.column}: {msg}"
        if self.source_line is None:
            return where
        caret = " " * (self.column - 1) + "^"
        return f"{where}\n  {self.source_line}\n  {caret}"
