"""
Error types for the T-depth synthesis toolkit
"""

from typing import Optional


class ToolkitError(Exception):
    """Base class for every error raised by the toolkit"""


class AnfFormatError(ToolkitError, ValueError):
    """Truth table or header does not match the expected format"""


class AnfSyntaxError(ToolkitError, ValueError):
    """ANF text does not follow the grammar"""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class CircuitParseError(ToolkitError, ValueError):
    """Circuit text does not follow the export dialect"""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class CircuitValidationError(ToolkitError, ValueError):
    """A gate references unknown qubits or unwritten classical bits"""


class GranularityError(ToolkitError):
    """Operation is not defined at the circuit's granularity"""


class AllocationError(ToolkitError):
    """Lowering needs qubits the synthesis plan did not reserve"""


class SimulationSizeError(ToolkitError):
    """Circuit is too wide for statevector simulation"""


class EstimateDomainError(ToolkitError, ValueError):
    """Closed forms are undefined for the requested parameters"""


class IntegrityError(ToolkitError):
    """Embedded data or a gadget template failed its self-check"""
