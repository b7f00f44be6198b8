"""
Parameter sets for the E2 system and its reducibility predicates.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from .exceptions import ArityMismatch
from .utils import is_integer, parse_rational


@dataclass(frozen=True)
class ParamSet:
    """
    The five E2 parameters (a, b, b', c, c') as exact rationals.

    Example:
        >>> p = ParamSet.parse("4/3", "2/3", "2/3", "4/3", "4/3")
        >>> p.reducibility_witnesses()
        ['c-a', "c'-a"]
    """

    a: Fraction
    b: Fraction
    bp: Fraction
    c: Fraction
    cp: Fraction

    def __post_init__(self):
        for name in ("a", "b", "bp", "c", "cp"):
            object.__setattr__(self, name, parse_rational(getattr(self, name)))

    @classmethod
    def parse(cls, *values) -> "ParamSet":
        """Build from five rational strings or numbers."""
        if len(values) != 5:
            raise ArityMismatch(f"ParamSet needs 5 parameters, got {len(values)}")
        return cls(*(parse_rational(value) for value in values))

    def as_tuple(self) -> Tuple[Fraction, ...]:
        return (self.a, self.b, self.bp, self.c, self.cp)

    @property
    def mu(self):
        """Derived mu-vector (exact when every exponent lies in (1/6)Z)."""
        from .monodromy import mu_from_params

        return mu_from_params(self)

    def _e2_quantities(self) -> Dict[str, Fraction]:
        a, b, bp, c, cp = self.as_tuple()
        return {
            "a": a,
            "b": b,
            "b'": bp,
            "c-b": c - b,
            "c'-b'": cp - bp,
            "c-a": c - a,
            "c'-a": cp - a,
            "c+c'-a": c + cp - a,
        }

    def reducibility_witnesses(self) -> List[str]:
        """Names of the quantities whose integrality makes E2 reducible."""
        return [name for name, value in self._e2_quantities().items() if is_integer(value)]

    def is_e2_reducible(self) -> bool:
        return bool(self.reducibility_witnesses())

    def condition_31(self) -> bool:
        """
        Genericity condition required by the intersection matrix.

        None of a, b, b', c-b, c'-b', a-c-c' may be an integer.
        """
        a, b, bp, c, cp = self.as_tuple()
        return not any(is_integer(value) for value in (a, b, bp, c - b, cp - bp, a - c - cp))

    def to_dict(self) -> Dict[str, str]:
        names = ("a", "b", "bp", "c", "cp")
        return {name: str(value) for name, value in zip(names, self.as_tuple())}


def is_e1_reducible(a, b, bp, c) -> bool:
    """E1(a,b,b',c) is reducible iff one of b+b'-c, b, b', c-a, a is an integer."""
    a, b, bp, c = (parse_rational(value) for value in (a, b, bp, c))
    return any(is_integer(value) for value in (b + bp - c, b, bp, c - a, a))


# Parameters of the system studied in the reducible example
E2_SPECIAL = ParamSet(
    Fraction(4, 3), Fraction(2, 3), Fraction(2, 3), Fraction(4, 3), Fraction(4, 3)
)
