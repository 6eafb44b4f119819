"""Exact rational probabilities (backed by :class:`fractions.Fraction`)."""

from __future__ import annotations

import re
from fractions import Fraction

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"int"`` or ``"int/int"``. Decimals are rejected on purpose."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def check_probability(p: Fraction, name: str = "p") -> Fraction:
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"{name}={p} outside [0, 1]")
    return p


def complement(p: Fraction) -> Fraction:
    return 1 - check_probability(p)
