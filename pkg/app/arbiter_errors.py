# app/arbiter_errors.py

from typing import Optional

class ArbiterError(ValueError):
    """ Base class for all errors raised by the arbiter toolkit. """


class ConfigurationError(ArbiterError):
    """ An ArbiterConfig, WorkloadSpec or command-line option is invalid. """


class DimensionError(ArbiterError):
    """
    A vector or row does not have the expected number of ports. `cycle` is
    set when the mismatch happened while driving a trace.
    """
    def __init__(self, message: str, cycle: Optional[int] = None):
        if cycle is not None:
            message = f"cycle {cycle}: {message}"
        super().__init__(message)
        self.cycle = cycle


class TraceParseError(ArbiterError):
    """ A trace file row could not be parsed; carries the 1-based line. """
    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class TraceDimensionError(TraceParseError, DimensionError):
    """ A trace file row has the wrong number of columns. """
    def __init__(self, message: str, line: Optional[int] = None):
        TraceParseError.__init__(self, message, line)
        self.cycle = None


class StructuralError(ArbiterError):
    """ A gate graph is malformed, e.g. it has a combinational cycle. """


class InputAssignmentError(ArbiterError):
    """ A gate graph was evaluated without a value for every source. """
