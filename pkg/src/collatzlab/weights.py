"""The explicit six-weight system for the accelerated Collatz map T.

Pairs (x, y) of positive integers split into nine parity cases (x and y each
being 1, even, or odd >= 3). Each case carries a constant weight six-tuple
except the odd-odd case, whose entries depend on the reduced coordinates
k, l (x = 2k+1, y = 2l+1) through four auxiliary integer tables. For every
case the six-term quadratic form collapses to a small closed-form polynomial
in k and l; those closed forms and their per-case upper bounds live here too.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .arith import format_rational
from .framework import Exact, LambdaSpec, WeightVector


class ParityCase(enum.Enum):
    """Nine-way classification of a pair by (1 | even | odd>=3) coordinates."""

    ONE_ONE = "1-1"
    ONE_EVEN = "1-even"
    ONE_ODD = "1-odd"
    EVEN_ONE = "even-1"
    EVEN_EVEN = "even-even"
    EVEN_ODD = "even-odd"
    ODD_ONE = "odd-1"
    ODD_EVEN = "odd-even"
    ODD_ODD = "odd-odd"

    @property
    def label(self) -> str:
        return self.value

    @property
    def transpose(self) -> "ParityCase":
        """The case of the swapped pair (y, x)."""
        return _TRANSPOSE[self]


_TRANSPOSE = {
    ParityCase.ONE_ONE: ParityCase.ONE_ONE,
    ParityCase.ONE_EVEN: ParityCase.EVEN_ONE,
    ParityCase.ONE_ODD: ParityCase.ODD_ONE,
    ParityCase.EVEN_ONE: ParityCase.ONE_EVEN,
    ParityCase.EVEN_EVEN: ParityCase.EVEN_EVEN,
    ParityCase.EVEN_ODD: ParityCase.ODD_EVEN,
    ParityCase.ODD_ONE: ParityCase.ONE_ODD,
    ParityCase.ODD_EVEN: ParityCase.EVEN_ODD,
    ParityCase.ODD_ODD: ParityCase.ODD_ODD,
}

CASE_ORDER = (
    ParityCase.ONE_ONE, ParityCase.ONE_EVEN, ParityCase.ONE_ODD,
    ParityCase.EVEN_ONE, ParityCase.EVEN_EVEN, ParityCase.EVEN_ODD,
    ParityCase.ODD_ONE, ParityCase.ODD_EVEN, ParityCase.ODD_ODD,
)

CASE_BY_LABEL = {c.value: c for c in ParityCase}


class OddOddSubcase(enum.Enum):
    """Five-way split of the odd-odd case by the offset k - l and the two
    linear gates 11k - 10l + 1 <= 0 and -10k + 11l + 1 <= 0.

    "low" means k - l <= -2, "high" means k - l >= 2; "deep" marks the gated
    region far from the diagonal where an extra square term activates.
    """

    LOW_DEEP = "low-deep"
    LOW_BAND = "low-band"
    DIAGONAL = "diagonal"
    HIGH_BAND = "high-band"
    HIGH_DEEP = "high-deep"

    @property
    def label(self) -> str:
        return self.value


@dataclass(frozen=True)
class PairClass:
    """A parity case plus the reduced coordinates that recover the pair:
    x = 2k (even) or 2k+1 (odd >= 3), k absent when x = 1; same for (y, l)."""

    case: ParityCase
    k: Optional[int] = None
    l: Optional[int] = None

    def pair(self) -> tuple[int, int]:
        cx, cy = self.case.value.split("-")
        x = 1 if cx == "1" else (2 * self.k if cx == "even" else 2 * self.k + 1)
        y = 1 if cy == "1" else (2 * self.l if cy == "even" else 2 * self.l + 1)
        return x, y


def classify(x: int, y: int) -> PairClass:
    """Total, unambiguous classification of any pair of positive integers."""
    if x < 1 or y < 1:
        raise ValueError(f"pair must be positive integers, got ({x}, {y})")
    if x == 1:
        k = None
        cx = 0
    elif x % 2 == 0:
        k = x // 2
        cx = 1
    else:
        k = (x - 1) // 2
        cx = 2
    if y == 1:
        l = None
        cy = 0
    elif y % 2 == 0:
        l = y // 2
        cy = 1
    else:
        l = (y - 1) // 2
        cy = 2
    return PairClass(CASE_ORDER[3 * cx + cy], k, l)


def beta0(k: int, l: int) -> int:
    """Offset k - l clamped to [-2, 2]."""
    d = k - l
    if d <= -2:
        return -2
    if d >= 2:
        return 2
    return d


def delta0(k: int, l: int) -> int:
    """-2 in either deep gated region, -1 otherwise."""
    d = k - l
    if d <= -2 and 11 * k - 10 * l + 1 <= 0:
        return -2
    if d >= 2 and -10 * k + 11 * l + 1 <= 0:
        return -2
    return -1


def eps0(k: int, l: int) -> int:
    """2 in the low deep region, else 0."""
    if k - l <= -2 and 11 * k - 10 * l + 1 <= 0:
        return 2
    return 0


def zeta0(k: int, l: int) -> int:
    """2 in the high deep region, else 0."""
    if k - l >= 2 and -10 * k + 11 * l + 1 <= 0:
        return 2
    return 0


def odd_odd_subcase(k: int, l: int) -> OddOddSubcase:
    """The unique subcase containing (k, l); the five labels partition all
    k, l >= 1 because an integer is <= 0 exactly when it is not >= 1."""
    d = k - l
    if d <= -2:
        if 11 * k - 10 * l + 1 <= 0:
            return OddOddSubcase.LOW_DEEP
        return OddOddSubcase.LOW_BAND
    if d >= 2:
        if -10 * k + 11 * l + 1 <= 0:
            return OddOddSubcase.HIGH_DEEP
        return OddOddSubcase.HIGH_BAND
    return OddOddSubcase.DIAGONAL


# Constant (alpha, beta, gamma, delta, epsilon, zeta) per non-odd-odd case.
CASE_WEIGHTS: dict[ParityCase, tuple[int, int, int, int, int, int]] = {
    ParityCase.ONE_ONE: (1, 0, 0, 0, -1, 1),
    ParityCase.ONE_EVEN: (1, 0, 0, -1, 0, 1),
    ParityCase.ONE_ODD: (0, 0, 0, -2, 1, 2),
    ParityCase.EVEN_ONE: (1, 0, 1, -1, 0, 1),
    ParityCase.EVEN_EVEN: (1, 0, -1, 0, -1, 1),
    ParityCase.EVEN_ODD: (0, 0, -2, 1, -2, 2),
    ParityCase.ODD_ONE: (1, 0, -1, -1, 0, 1),
    ParityCase.ODD_EVEN: (0, -2, 0, 1, 2, -2),
}


def weight_vector(x: int, y: int) -> WeightVector:
    """The tabulated six weights at (x, y); every component lies in [-2, 2]."""
    pc = classify(x, y)
    if pc.case is ParityCase.ODD_ODD:
        k, l = pc.k, pc.l
        b = beta0(k, l)
        return WeightVector(2, b, -b, delta0(k, l), eps0(k, l), zeta0(k, l))
    return WeightVector(*CASE_WEIGHTS[pc.case])


def odd_odd_master(k: int, l: int) -> int:
    """Odd-odd quadratic form grouped in the reduced coordinates, before the
    per-subcase factorization:

        (18 + 4*delta0)(k-l)^2 - 5*beta0*(k-l)(k+l+2)
            + eps0*(k+1)^2 + zeta0*(l+1)^2
    """
    d = k - l
    return ((18 + 4 * delta0(k, l)) * d * d
            - 5 * beta0(k, l) * d * (k + l + 2)
            + eps0(k, l) * (k + 1) ** 2
            + zeta0(k, l) * (l + 1) ** 2)


def simplified_lhs(x: int, y: int) -> int:
    """Per-case closed form of the six-term quadratic form at (x, y).

    Must agree with the direct six-term evaluation identically; the odd-odd
    case uses the factorized form of its subcase.
    """
    pc = classify(x, y)
    case = pc.case
    k, l = pc.k, pc.l
    if case is ParityCase.ONE_ONE:
        return 0
    if case is ParityCase.ONE_EVEN:
        return -2 * l * l + 2 * l
    if case is ParityCase.ONE_ODD:
        return -6 * l * l + 4 * l + 2
    if case is ParityCase.EVEN_ONE:
        return -2 * k * k + 1
    if case is ParityCase.EVEN_EVEN:
        return -k * k + 2 * k * l - 2 * l * l
    if case is ParityCase.EVEN_ODD:
        return -2 * l * l + 1
    if case is ParityCase.ODD_ONE:
        return -4 * k * k
    if case is ParityCase.ODD_EVEN:
        return -2 * k * k + 1
    sub = odd_odd_subcase(k, l)
    if sub is OddOddSubcase.LOW_DEEP:
        return 2 * (k + 1) * (11 * k - 10 * l + 1)
    if sub is OddOddSubcase.LOW_BAND:
        return 4 * (k - l) * (6 * k - l + 5)
    if sub is OddOddSubcase.HIGH_DEEP:
        return 2 * (l + 1) * (-10 * k + 11 * l + 1)
    if sub is OddOddSubcase.HIGH_BAND:
        return 4 * (k - l) * (k - 6 * l - 5)
    return (k - l) ** 2 * (4 - 5 * (k + l))


_CASE_BOUNDS: dict[ParityCase, int] = {
    ParityCase.ONE_ONE: 0,
    ParityCase.ONE_EVEN: 0,
    ParityCase.ONE_ODD: 0,
    ParityCase.EVEN_ONE: -1,
    ParityCase.EVEN_EVEN: -1,
    ParityCase.EVEN_ODD: -1,
    ParityCase.ODD_ONE: -4,
    ParityCase.ODD_EVEN: -1,
}

_SUBCASE_BOUNDS: dict[OddOddSubcase, int] = {
    OddOddSubcase.LOW_DEEP: 0,
    OddOddSubcase.LOW_BAND: -8,
    OddOddSubcase.DIAGONAL: 0,
    OddOddSubcase.HIGH_BAND: -8,
    OddOddSubcase.HIGH_DEEP: 0,
}


def case_bound(pc: PairClass) -> int:
    """The sharpened upper bound asserted for the pair's case (odd-odd pairs
    get their subcase bound)."""
    if pc.case is ParityCase.ODD_ODD:
        return _SUBCASE_BOUNDS[odd_odd_subcase(pc.k, pc.l)]
    return _CASE_BOUNDS[pc.case]


def tally_key(x: int, y: int) -> str:
    """Report cell for a pair: the case label, refined by subcase for
    odd-odd pairs (e.g. "odd-odd:diagonal")."""
    pc = classify(x, y)
    if pc.case is ParityCase.ODD_ODD:
        return f"odd-odd:{odd_odd_subcase(pc.k, pc.l).label}"
    return pc.case.label


TALLY_KEYS = tuple(
    [c.label for c in CASE_ORDER if c is not ParityCase.ODD_ODD]
    + [f"odd-odd:{s.label}" for s in (
        OddOddSubcase.LOW_DEEP, OddOddSubcase.LOW_BAND, OddOddSubcase.DIAGONAL,
        OddOddSubcase.HIGH_BAND, OddOddSubcase.HIGH_DEEP)]
)


def bound_for_key(key: str) -> int:
    """case_bound keyed by tally label."""
    if key.startswith("odd-odd:"):
        return _SUBCASE_BOUNDS[OddOddSubcase(key.split(":", 1)[1])]
    return _CASE_BOUNDS[CASE_BY_LABEL[key]]


def case_lambda(table: Mapping[ParityCase, Exact]) -> LambdaSpec:
    """LambdaSpec reading one rational per parity case; all nine cases must
    be given explicitly."""
    missing = [c.label for c in CASE_ORDER if c not in table]
    if missing:
        raise ValueError(f"lambda table missing cases: {', '.join(missing)}")
    values = {c: Fraction(table[c]) for c in CASE_ORDER}
    for c, v in values.items():
        if not 0 <= v <= 1:
            raise ValueError(
                f"lambda[{c.label}] = {format_rational(v)} is outside [0, 1]")
    label = ",".join(f"{c.label}:{format_rational(values[c])}" for c in CASE_ORDER)
    distinct = set(values.values())
    constant = distinct.pop() if len(distinct) == 1 else None

    def fn(x: int, y: int) -> Fraction:
        return values[classify(x, y).case]

    return LambdaSpec(fn, label, constant=constant)
