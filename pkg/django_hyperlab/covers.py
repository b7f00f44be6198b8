"""
Classification of cyclic covers of the line branched at four points.

An n-fold cyclic cover with branching indices k1..k4 has Euler
characteristic 2n - sum(n/k_i (k_i - 1)). The search enumerates index
tuples dividing n, keeps those with lcm n and the requested Euler
characteristic, then drops the ones no cyclic cover realizes.
"""

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Dict, List, Tuple

from .exceptions import PreconditionViolated

logger = logging.getLogger(__name__)

GENUS2_EULER_CHAR = -2

_SIGNATURE_RE = re.compile(r"^\(?\s*(\d+)\s*;\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)?$")


@dataclass(frozen=True, order=True)
class CoverSignature:
    """
    Degree n and sorted branching indices of a four-point cyclic cover.

    Example:
        >>> CoverSignature(6, (3, 2, 3, 2))
        CoverSignature(n=6, k=(2, 2, 3, 3))
    """

    n: int
    k: Tuple[int, int, int, int]

    def __post_init__(self):
        k = tuple(sorted(int(v) for v in self.k))
        if len(k) != 4:
            raise PreconditionViolated(f"Expected four branching indices, got {len(k)}")
        if self.n < 2 or k[0] < 2:
            raise PreconditionViolated(f"Degree and indices must be >= 2, got ({self.n}; {k})")
        object.__setattr__(self, "k", k)

    @classmethod
    def parse(cls, text: str) -> "CoverSignature":
        """Parse the ``(n;k1,k2,k3,k4)`` form."""
        match = _SIGNATURE_RE.match(text.strip())
        if not match:
            raise PreconditionViolated(f"Cannot parse cover signature {text!r}")
        n, *k = (int(group) for group in match.groups())
        return cls(n, tuple(k))

    @property
    def euler_characteristic(self) -> Fraction:
        return euler_characteristic(self)

    @property
    def genus(self) -> Fraction:
        return 1 - self.euler_characteristic / 2

    def __str__(self) -> str:
        return f"({self.n};{','.join(str(v) for v in self.k)})"

    def to_dict(self) -> Dict:
        data = {"n": self.n, "k": list(self.k), "signature": str(self)}
        curve = CURVE_ANNOTATIONS.get(self)
        if curve:
            data["curve"] = curve
        return data


def euler_characteristic(sig: CoverSignature) -> Fraction:
    """2n - sum n/k_i (k_i - 1), exact."""
    n = Fraction(sig.n)
    return 2 * n - sum(n / k * (k - 1) for k in sig.k)


def satisfies_index_equation(sig: CoverSignature) -> bool:
    """sum 1/k_i + 2/n == 2, the genus-2 condition rewritten in the indices."""
    return sum(Fraction(1, k) for k in sig.k) + Fraction(2, sig.n) == 2


def _elements_of_order(n: int, k: int) -> List[int]:
    step = n // k
    return [step * u for u in range(k) if math.gcd(u, k) == 1]


def is_realizable(sig: CoverSignature) -> bool:
    """
    True when residues g_i in Z/n of orders k_i exist with sum g_i = 0.

    Those residues are the local monodromies of the cover, so this is
    exactly the condition for the cyclic cover to exist.
    """
    if any(sig.n % k for k in sig.k):
        return False
    choices = [_elements_of_order(sig.n, k) for k in sig.k]
    return any(sum(g) % sig.n == 0 for g in product(*choices))


def _divisors(n: int) -> List[int]:
    return [d for d in range(2, n + 1) if n % d == 0]


def classify(max_n: int, euler_char: int, realizable_only: bool = True) -> List[CoverSignature]:
    """
    All signatures with n <= max_n, lcm(k) = n and the given Euler characteristic.

    Args:
        max_n: Largest cover degree searched
        euler_char: Required Euler characteristic
        realizable_only: Drop signatures no cyclic cover realizes

    Returns:
        Sorted, deduplicated list of signatures
    """
    if max_n < 2:
        raise PreconditionViolated(f"max_n must be at least 2, got {max_n}")
    found = set()
    for n in range(2, max_n + 1):
        for k in combinations_with_replacement(_divisors(n), 4):
            if math.lcm(*k) != n:
                continue
            sig = CoverSignature(n, k)
            if euler_characteristic(sig) != euler_char:
                continue
            if realizable_only and not is_realizable(sig):
                logger.debug(f"Dropping unrealizable signature {sig}")
                continue
            found.add(sig)
    return sorted(found)


def classify_genus2(max_n: int = 60) -> List[CoverSignature]:
    """Genus-2 four-point cyclic covers up to degree ``max_n``."""
    return classify(max_n, GENUS2_EULER_CHAR)


CURVE_EXPONENTS: Dict[CoverSignature, Tuple[int, int, int]] = {
    CoverSignature(3, (3, 3, 3, 3)): (2, 1, 2),
    CoverSignature(6, (2, 2, 3, 3)): (2, 4, 3),
    CoverSignature(4, (2, 2, 4, 4)): (2, 2, 1),
}


def branching_indices(n: int, exponents: Tuple[int, int, int]) -> Tuple[int, int, int, int]:
    """
    Indices of S^n = s^e0 (1-s)^e1 (t-s)^et over 0, 1, t and infinity.

    The residue at infinity is -(e0 + e1 + et) mod n; a residue e has
    order n / gcd(e, n).
    """
    residues = (*exponents, -sum(exponents))
    if any(e % n == 0 for e in residues):
        raise PreconditionViolated(f"Exponents {exponents} leave a point unbranched for n={n}")
    return tuple(sorted(n // math.gcd(e % n, n) for e in residues))


def curve_equation(n: int, exponents: Tuple[int, int, int]) -> str:
    """Render S^n = s^e0(1-s)^e1(t-s)^et, dropping unit exponents."""
    factors = ("s", "(1-s)", "(t-s)")
    rendered = "".join(f if e == 1 else f"{f}^{e}" for f, e in zip(factors, exponents))
    return f"S^{n} = {rendered}"


CURVE_ANNOTATIONS: Dict[CoverSignature, str] = {
    sig: curve_equation(sig.n, exponents) for sig, exponents in CURVE_EXPONENTS.items()
}
