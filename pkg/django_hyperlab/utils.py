"""
Utility functions for django-hyperlab.

Parsing of exact parameters, numeric coercion and text formatting shared
by the domain modules and the command line.
"""

import cmath
import math
from fractions import Fraction
from typing import Any, Iterable, Sequence, Union

from .exceptions import PreconditionViolated

ParamValue = Union[Fraction, complex]


def parse_rational(value: Union[str, int, Fraction]) -> Fraction:
    """
    Parse an exact rational from "p/q", an integer or an exact decimal string.

    Args:
        value: Raw value

    Returns:
        Fraction in lowest terms

    Raises:
        ValueError: If the value is not rational syntax or has a zero denominator

    Example:
        >>> parse_rational("4/3")
        Fraction(4, 3)
        >>> parse_rational("0.25")
        Fraction(1, 4)
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"Not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)

    text = str(value).strip()
    if not text:
        raise ValueError("Empty rational")
    if "/" in text:
        numer, _, denom = text.partition("/")
        if int(denom) == 0:
            raise ValueError(f"Zero denominator in {text!r}")
        return Fraction(int(numer), int(denom))
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Not a rational: {text!r}") from e


def parse_complex(value: Union[str, int, float, complex, Fraction]) -> complex:
    """
    Parse a finite complex number.

    Accepts Python complex syntax ("0.1+0.2j") and rationals ("1/3").

    Raises:
        ValueError: If the value is not finite or cannot be parsed
    """
    if isinstance(value, Fraction):
        result = complex(float(value))
    elif isinstance(value, (int, float, complex)):
        result = complex(value)
    else:
        text = str(value).strip().replace(" ", "").replace("i", "j")
        if "/" in text and "j" not in text:
            result = complex(float(parse_rational(text)))
        else:
            result = complex(text)
    if not cmath.isfinite(result):
        raise ValueError(f"Non-finite value: {value!r}")
    return result


def parse_param(value: Union[str, int, float, complex, Fraction]) -> ParamValue:
    """
    Parse a series parameter.

    Rational syntax yields an exact Fraction; anything else (floats, complex
    literals) yields an inexact complex value.
    """
    if isinstance(value, (Fraction, int)) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, (float, complex)):
        return parse_complex(value)
    try:
        return parse_rational(value)
    except ValueError:
        return parse_complex(value)


def require_exact(name: str, value: Any) -> Fraction:
    """Return value as a Fraction or raise PreconditionViolated for inexact input."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    raise PreconditionViolated(
        f"Parameter {name} must be an exact rational for this operation, got {value!r}"
    )


def is_integer(value: Any) -> bool:
    """Check whether an exact or numeric value is an integer."""
    if isinstance(value, Fraction):
        return value.denominator == 1
    if isinstance(value, int):
        return True
    number = complex(value)
    return number.imag == 0 and float(number.real).is_integer()


def is_nonpositive_integer(value: Any) -> bool:
    """Check whether a value lies in {0, -1, -2, ...}."""
    if not is_integer(value):
        return False
    return complex(value).real <= 0


def to_complex(value: Any) -> complex:
    """Coerce a Fraction, number or object with ``to_complex`` to complex."""
    if hasattr(value, "to_complex"):
        return value.to_complex()
    if isinstance(value, Fraction):
        return complex(float(value))
    return complex(value)


def format_complex(value: complex, digits: int = 15) -> str:
    """Format a complex number with a fixed number of significant digits."""
    value = complex(value)
    real = f"{value.real:.{digits}g}"
    imag = f"{abs(value.imag):.{digits}g}"
    sign = "-" if math.copysign(1.0, value.imag) < 0 else "+"
    return f"{real}{sign}{imag}j"


def format_matrix(rows: Sequence[Sequence[Any]], formatter=None) -> str:
    """
    Format a matrix as an aligned text table.

    Args:
        rows: Matrix rows
        formatter: Entry formatter (defaults to ``str``)

    Returns:
        Multi-line string with right-aligned columns
    """
    formatter = formatter or str
    cells = [[formatter(entry) for entry in row] for row in rows]
    if not cells:
        return ""
    widths = [max(len(row[col]) for row in cells) for col in range(len(cells[0]))]
    lines = ["  ".join(cell.rjust(width) for cell, width in zip(row, widths)) for row in cells]
    return "\n".join(f"[ {line} ]" for line in lines)


def max_abs(values: Iterable[Any]) -> float:
    """Maximum absolute value of an iterable (0.0 when empty)."""
    return max((abs(to_complex(value)) for value in values), default=0.0)
