from enum import Enum


class ArithmeticMode(str, Enum):
    FLOATING = "floating"
    RATIONAL = "rational"


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"


class ProfileFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


class SEndpoint(str, Enum):
    MIN = "min"
    MAX = "max"
    ZERO = "zero"


class BonferroniCoincidence(str, Enum):
    UPPER = "upper-coincides"
    LOWER = "lower-coincides"
    NEITHER = "neither"


class RowKind(str, Enum):
    MAKAROV_LOWER = "makarov_lower"
    SHARP_LOWER = "sharp_lower"
    EXACT = "exact"
    SHARP_UPPER = "sharp_upper"
    MAKAROV_UPPER = "makarov_upper"


class TablePreset(str, Enum):
    TABLE_1 = "paper-table-1"
    TABLE_2 = "paper-table-2"


TABLE_ROWS = (
    RowKind.MAKAROV_LOWER,
    RowKind.SHARP_LOWER,
    RowKind.EXACT,
    RowKind.SHARP_UPPER,
    RowKind.MAKAROV_UPPER,
)

# Dense atom vectors beyond this are refused regardless of settings.
HARD_ENUMERATION_CAP = 20
