import math
from fractions import Fraction
from numbers import Real

import numpy as np

from core.constants import ArithmeticMode
from core.settings import settings

Number = float | Fraction


def to_number(value, mode: ArithmeticMode) -> Number:
    if mode is ArithmeticMode.RATIONAL:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, float):
            # repr is the shortest round-trip form, so 0.1 becomes 1/10
            return Fraction(repr(value))
        if isinstance(value, np.floating):
            return Fraction(repr(float(value)))
        return Fraction(value)
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            return float(Fraction(value))
    return float(value)


def array_dtype(mode: ArithmeticMode):
    return object if mode is ArithmeticMode.RATIONAL else np.float64


def as_array(values, mode: ArithmeticMode) -> np.ndarray:
    return np.array(
        [to_number(value, mode) for value in values],
        dtype=array_dtype(mode),
    )


def tolerance(mode: ArithmeticMode) -> float:
    if mode is ArithmeticMode.RATIONAL:
        return 0
    return settings.app_tolerance


def is_close(left: Real, right: Real, mode: ArithmeticMode) -> bool:
    if mode is ArithmeticMode.RATIONAL:
        return left == right
    tol = tolerance(mode)
    return math.isclose(
        float(left), float(right), rel_tol=tol, abs_tol=tol
    )


def close_mask(
    left: np.ndarray, right: np.ndarray, mode: ArithmeticMode
) -> np.ndarray:
    """Elementwise `is_close` for atom-sized vectors."""
    if mode is ArithmeticMode.RATIONAL:
        return np.asarray(left == right, dtype=bool)
    tol = tolerance(mode)
    return np.isclose(
        left.astype(np.float64),
        right.astype(np.float64),
        rtol=tol,
        atol=tol,
    )


def binomial(z: int, j: int) -> int:
    if j < 0 or z < 0:
        return 0
    return math.comb(z, j)


def scaled(coefficient: int, value: Number) -> Number:
    """coefficient * value without overflowing floats on huge binomials."""
    if coefficient == 0 or value == 0:
        return value * 0
    if isinstance(value, Fraction):
        return coefficient * value
    try:
        return float(coefficient) * value
    except OverflowError:
        magnitude = math.exp(math.log(coefficient) + math.log(abs(value)))
        return math.copysign(magnitude, value)


def to_scalar(value, mode: ArithmeticMode) -> Number:
    if mode is ArithmeticMode.RATIONAL:
        return Fraction(value)
    return float(value)


def exact_product(values, mode: ArithmeticMode) -> Number:
    return math.prod(values, start=to_number(1, mode))


def next_binomial(z: int, j: int, previous: int) -> int:
    """C(z, j) from C(z, j - 1) without another factorial."""
    if j <= 0:
        return binomial(z, j)
    return previous * (z - j + 1) // j


def log_atom(inside, outside) -> float:
    """log of prod(inside) * prod(1 - a for a in outside).

    An exact zero factor gives -inf, never an underflowed product.
    """
    if any(a == 0 for a in inside) or any(a == 1 for a in outside):
        return -math.inf
    return math.fsum(
        [math.log(a) for a in inside] + [math.log1p(-a) for a in outside]
    )


def scaled_endpoint(
    coefficient: int, endpoint: Number, log_magnitude: float
) -> Number:
    """coefficient * |endpoint|, with floats taken from log|endpoint|.

    A float endpoint may underflow to 0.0 while the product stays well
    inside the float range.
    """
    if coefficient == 0 or log_magnitude == -math.inf:
        return endpoint * 0
    if isinstance(endpoint, Fraction):
        return coefficient * abs(endpoint)
    return math.exp(math.log(coefficient) + log_magnitude)
