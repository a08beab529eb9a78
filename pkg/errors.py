"""
Exception hierarchy shared by every service module.
Each error carries a stable machine-readable code so the CLI can report it.
"""

from typing import Any, Dict, Optional


class ParadeductionError(Exception):
    """Base error with a stable code and optional structured details"""

    code = "PARADEDUCTION_ERROR"

    def __init__(self, message: str, code: Optional[str] = None, **details: Any):
        super().__init__(message)
        self.message = message
        if code is not None:
            self.code = code
        self.details: Dict[str, Any] = details

    def __str__(self) -> str:
        return self.message


class FormulaSyntaxError(ParadeductionError):
    """Raised when formula text does not conform to the grammar"""

    code = "FORMULA_SYNTAX"

    def __init__(self, message: str, position: int, code: Optional[str] = None):
        super().__init__(f"{message} (at position {position})", code=code, position=position)
        self.position = position


class SignatureError(ParadeductionError):
    code = "SIGNATURE"


class UnboundVariableError(ParadeductionError):
    code = "UNBOUND_SCHEMA_VARIABLE"


class UniverseTooLargeError(ParadeductionError):
    """Raised by size guards; reports the projected count"""

    code = "UNIVERSE_TOO_LARGE"

    def __init__(self, message: str, projected: int, cap: int):
        super().__init__(message, projected=projected, cap=cap)
        self.projected = projected
        self.cap = cap


class SystemDefinitionError(ParadeductionError):
    """Raised for malformed systems and system-definition files"""

    code = "SYSTEM_DEFINITION"

    def __init__(self, message: str, line: Optional[int] = None):
        text = f"line {line}: {message}" if line is not None else message
        super().__init__(text, line=line)
        self.line = line


class BudgetError(ParadeductionError):
    code = "INVALID_BUDGET"


class SubsetCapError(ParadeductionError):
    code = "SUBSET_CAP_EXCEEDED"


class CarrierError(ParadeductionError):
    code = "CARRIER_MISMATCH"


class ValuationStructureError(ParadeductionError):
    code = "VALUATION_STRUCTURE"


class UndecidedError(ParadeductionError):
    """Raised when an Unknown verdict makes an answer undecidable"""

    code = "UNDECIDED"


class DegenerateSystemError(ParadeductionError):
    code = "DEGENERATE_SYSTEM"


class PreconditionError(ParadeductionError):
    code = "PRECONDITION"


class PresetNotFoundError(ParadeductionError):
    code = "UNKNOWN_PRESET"


class LemmaFalsifiedError(ParadeductionError):
    """An executable lemma instance failed: this is an implementation bug"""

    code = "LEMMA_FALSIFIED"


class WitnessFormatError(ParadeductionError):
    code = "WITNESS_FORMAT"

    def __init__(self, message: str, line: Optional[int] = None):
        text = f"line {line}: {message}" if line is not None else message
        super().__init__(text, line=line)
        self.line = line


class UsageError(ParadeductionError):
    code = "USAGE"
