"""Picard lattice of the plane blown up at n points.

A class is written ``degree*L - sum(mults[i] * E_i)``, so a linear system
``L_d(m_1, ..., m_n)`` is the class ``DivisorClass(d, (m_1, ..., m_n))``.
All arithmetic is checked against the signed 64-bit range.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

INT64_MAX = 2**63 - 1
INT64_MIN = -(2**63)


class LatticeError(ValueError):
    """Structural misuse: mismatched lengths, bad parameters, bad notation."""


def checked(value: int) -> int:
    if not INT64_MIN <= value <= INT64_MAX:
        raise OverflowError(f"lattice value {value} leaves the signed 64-bit range")
    return value


@dataclass(frozen=True)
class DivisorClass:
    degree: int
    mults: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "mults", tuple(int(m) for m in self.mults))
        checked(self.degree)
        for m in self.mults:
            checked(m)

    @property
    def n(self) -> int:
        return len(self.mults)

    def _same_ambient(self, other: "DivisorClass") -> None:
        if self.n != other.n:
            raise LatticeError(
                f"classes live on different blow-ups ({self.n} vs {other.n} points); pad explicitly"
            )

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._same_ambient(other)
        return DivisorClass(
            checked(self.degree + other.degree),
            tuple(checked(a + b) for a, b in zip(self.mults, other.mults)),
        )

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + (-1) * other

    def __rmul__(self, k: int) -> "DivisorClass":
        return DivisorClass(checked(k * self.degree), tuple(checked(k * m) for m in self.mults))

    def __neg__(self) -> "DivisorClass":
        return (-1) * self

    def padded(self, n: int) -> "DivisorClass":
        if n < self.n:
            raise LatticeError(f"cannot pad {self.n} points down to {n}")
        return DivisorClass(self.degree, self.mults + (0,) * (n - self.n))

    def is_zero(self) -> bool:
        return self.degree == 0 and not any(self.mults)

    def stripped(self) -> "DivisorClass":
        """Drop zero multiplicities; the result lives on a smaller blow-up."""
        return DivisorClass(self.degree, tuple(m for m in self.mults if m != 0))

    def __str__(self) -> str:
        return format_class(self)


def intersect(a: DivisorClass, b: DivisorClass) -> int:
    a._same_ambient(b)
    total = a.degree * b.degree - sum(x * y for x, y in zip(a.mults, b.mults))
    return checked(total)


def canonical_class(n: int) -> DivisorClass:
    if n < 0:
        raise LatticeError("number of points must be non-negative")
    return DivisorClass(-3, (-1,) * n)


def line_class(n: int) -> DivisorClass:
    """A general line, missing every blown-up point."""
    return DivisorClass(1, (0,) * n)


def exceptional_class(n: int, i: int) -> DivisorClass:
    """E_i as a class: degree 0 with multiplicity -1 in slot i."""
    if not 0 <= i < n:
        raise LatticeError(f"point index {i} out of range for {n} points")
    mults = [0] * n
    mults[i] = -1
    return DivisorClass(0, tuple(mults))


def virtual_dim(a: DivisorClass) -> int:
    """Expected projective dimension d(d+3)/2 - sum m(m+1)/2 over positive m."""
    if a.degree < 0:
        raise LatticeError("virtual dimension needs a non-negative degree")
    d = a.degree
    return checked(d * (d + 3) // 2 - sum(m * (m + 1) // 2 for m in a.mults if m > 0))


def simple_point_count(d: int, m: int) -> int:
    return m * (2 * d - m)


def xi_class(d: int, m: int, k: int = 1) -> DivisorClass:
    """k times the class of degree-d curves with a (d-m)-fold point and m(2d-m) simple points."""
    if d < 1 or not 0 <= m <= d:
        raise LatticeError(f"need 0 <= m <= d and d >= 1, got d={d}, m={m}")
    if k < 1:
        raise LatticeError(f"multiple k must be >= 1, got {k}")
    return DivisorClass(checked(k * d), (checked(k * (d - m)),) + (k,) * simple_point_count(d, m))


def minus_one_curve_C(n: int) -> DivisorClass:
    """The (-1)-class L_n(n-1, 1^{2n})."""
    if n < 1:
        raise LatticeError("n must be positive")
    return DivisorClass(n, (n - 1,) + (1,) * (2 * n))


def is_minus_one_class(a: DivisorClass) -> bool:
    # numerical test only; irreducibility is assumed by the caller
    return intersect(a, a) == -1 and intersect(a, canonical_class(a.n)) == -1


# -- textual notation ---------------------------------------------------------

_ENTRY = re.compile(r"^(-?\d+)(?:\^(\d+))?$")


def parse_class(text: str) -> DivisorClass:
    """Parse ``"d; m1, m2^r, ..."``; whitespace is ignored, ``^r`` repeats an entry."""
    compact = re.sub(r"\s+", "", text)
    if ";" not in compact:
        if re.fullmatch(r"-?\d+", compact):
            return DivisorClass(int(compact))
        raise LatticeError(f"class notation needs 'degree;mults', got {text!r}")
    head, _, tail = compact.partition(";")
    try:
        degree = int(head)
    except ValueError:
        raise LatticeError(f"bad degree {head!r} in {text!r}") from None
    mults: list[int] = []
    if tail:
        for item in tail.split(","):
            match = _ENTRY.match(item)
            if match is None:
                raise LatticeError(f"bad multiplicity entry {item!r} in {text!r}")
            value, rep = int(match.group(1)), match.group(2)
            mults.extend([value] * (int(rep) if rep is not None else 1))
    return DivisorClass(degree, tuple(mults))


def format_class(a: DivisorClass, compact: bool = False) -> str:
    if not compact:
        return f"{a.degree};" + ",".join(str(m) for m in a.mults)
    return f"{a.degree};" + ",".join(_runs(a.mults))


def _runs(values: Sequence[int]) -> Iterable[str]:
    i = 0
    while i < len(values):
        j = i
        while j < len(values) and values[j] == values[i]:
            j += 1
        yield str(values[i]) if j - i == 1 else f"{values[i]}^{j - i}"
        i = j
