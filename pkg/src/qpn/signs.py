"""
Qualitative sign algebra.

⊗ (product) chains influences along a trail; ⊕ (combine) is the join of
the lattice zero < {plus, minus} < ambiguous.
"""

from enum import Enum
from functools import reduce
from typing import Iterable


class Sign(str, Enum):
    """Qualitative influence sign."""
    PLUS = "+"
    MINUS = "-"
    ZERO = "0"
    AMBIGUOUS = "?"

    @classmethod
    def parse(cls, text: str) -> "Sign":
        aliases = {"plus": cls.PLUS, "minus": cls.MINUS, "zero": cls.ZERO, "ambiguous": cls.AMBIGUOUS}
        key = text.strip().lower()
        if key in aliases:
            return aliases[key]
        return cls(text.strip())


def sign_product(a: Sign, b: Sign) -> Sign:
    if a == Sign.ZERO or b == Sign.ZERO:
        return Sign.ZERO
    if a == Sign.AMBIGUOUS or b == Sign.AMBIGUOUS:
        return Sign.AMBIGUOUS
    return Sign.PLUS if a == b else Sign.MINUS


def sign_combine(a: Sign, b: Sign) -> Sign:
    if a == Sign.ZERO:
        return b
    if b == Sign.ZERO:
        return a
    if a == b:
        return a
    return Sign.AMBIGUOUS


def product_of(signs: Iterable[Sign]) -> Sign:
    """⊗ over a sequence; the empty product is plus."""
    return reduce(sign_product, signs, Sign.PLUS)


def combine_all(signs: Iterable[Sign]) -> Sign:
    """⊕ over a sequence; the empty combination is zero."""
    return reduce(sign_combine, signs, Sign.ZERO)
