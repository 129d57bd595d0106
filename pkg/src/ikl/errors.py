class IklError(Exception):
    """Base class for errors raised by this package."""


class InputError(IklError):
    """Malformed input: bad symbols, mismatched alphabets, bad files or formulas."""


class TeacherError(IklError):
    """The system under test violated the query protocol or died mid-query."""
