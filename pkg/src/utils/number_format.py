from decimal import ROUND_HALF_UP, Decimal, localcontext
from fractions import Fraction

from core.settings import settings

# Enough digits to hold any float exactly, so rounding happens only once
DECIMAL_PRECISION = 1100


def to_decimal(value) -> Decimal:
    if isinstance(value, Fraction):
        return Decimal(value.numerator) / Decimal(value.denominator)
    # Decimal(float) is the exact binary value
    return Decimal(value)


def format_scientific(value, significant: int | None = None) -> str:
    """Scientific notation such as 5.6953e-01, rounding half up.

    Half-up matters on exact binary ties: 1/256 renders as 3.9063e-03.
    """
    digits = significant or settings.app_precision
    with localcontext() as context:
        context.prec = DECIMAL_PRECISION
        decimal = to_decimal(value)
        if decimal == 0:
            return f"{0:.{digits - 1}e}"

        quantum = Decimal(1).scaleb(-(digits - 1))
        exponent = decimal.adjusted()
        mantissa = decimal.scaleb(-exponent).quantize(
            quantum, rounding=ROUND_HALF_UP
        )
        if abs(mantissa) >= 10:
            exponent += 1
            mantissa = decimal.scaleb(-exponent).quantize(
                quantum, rounding=ROUND_HALF_UP
            )
    return f"{mantissa}e{exponent:+03d}"
