"""
Exception hierarchy shared by every backend, the circuit layer and the CLI
"""


class SimulatorError(Exception):
    """Base class; exit_code is what the CLI returns when this escapes a command"""

    exit_code = 3


class DimensionError(SimulatorError):
    """Length or shape mismatch"""


class DomainError(SimulatorError):
    """Parameter outside its supported range"""


class ConfigurationError(SimulatorError):
    """Invalid grid, config file or command-line configuration"""

    exit_code = 4


class DegenerateStateError(SimulatorError):
    """A constructor produced an all-zero amplitude vector"""


class WraparoundError(SimulatorError):
    """A shift would carry probability mass across the periodic grid boundary"""


class ContractError(SimulatorError):
    """A precondition on the inputs does not hold"""


class TruncationError(SimulatorError):
    """Fock-space leakage above the error threshold"""


class ResourceError(SimulatorError):
    """Requested matrix exceeds the dimension guard"""


class CapabilityError(SimulatorError):
    """The circuit uses an operation the chosen backend cannot run"""


class ParseError(SimulatorError):
    """DSL diagnostic with 1-based line and column"""

    exit_code = 2

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column
