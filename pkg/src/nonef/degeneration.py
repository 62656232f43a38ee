"""Bookkeeping for the two-component degeneration of the plane.

The central fibre is P u F, with P the plane and F = F_1 the blow-up of the
plane at a vertex, glued along R: a line on P and the (-1)-section on F.
Systems on F are written as plane systems whose slot 0 is the vertex
multiplicity, so ``L_d(e, ...)`` on F restricts to R with degree e.

Twisting by -lP turns degree d on the general fibre into degree d+l on P and
vertex multiplicity d+l on F. For the m=2 family the twist is quoted through
t = l + k (so L_P has degree kn+t with n = d-1).

For a (-1)-curve thrown from P meeting R at m points, blowing it up m times
in the threefold creates a stack of ruled surfaces Q_0, ..., Q_{m-1}, with
Q_i = F_i appearing with multiplicity m-i in the central fibre.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .lattice import DivisorClass, LatticeError, intersect, simple_point_count, xi_class

P_SIDE, F_SIDE = "P", "F"


class NotDivisible(LatticeError):
    """The throw degree s is not a multiple of the number of meeting points m."""


@dataclass(frozen=True)
class LimitPair:
    L_P: DivisorClass
    L_F: DivisorClass
    twist: int
    point_split: tuple[int, int]  # (points on P incl. p_0, points on F)

    def __post_init__(self) -> None:
        if restriction_degree(self, P_SIDE) != restriction_degree(self, F_SIDE):
            raise LatticeError(f"restrictions to R disagree for {self.L_P} / {self.L_F}")


def restriction_degree(pair: LimitPair, side: str) -> int:
    if side == P_SIDE:
        return pair.L_P.degree  # R is a general line on P
    if side == F_SIDE:
        r = DivisorClass(0, (-1,) + (0,) * (pair.L_F.n - 1))  # the (-1)-section, E_0
        return intersect(pair.L_F, r)
    raise ValueError(f"side must be 'P' or 'F', got {side!r}")


def kernel_system(pair: LimitPair, side: str) -> DivisorClass:
    """Members on one side that contain the double curve R."""
    if side == P_SIDE:
        return DivisorClass(pair.L_P.degree - 1, pair.L_P.mults)
    if side == F_SIDE:
        m = list(pair.L_F.mults)
        m[0] += 1
        return DivisorClass(pair.L_F.degree, tuple(m))
    raise ValueError(f"side must be 'P' or 'F', got {side!r}")


def limit_pair(
    general_degree: int,
    p0_mult: int,
    p_mults: tuple[int, ...],
    f_mults: tuple[int, ...],
    twist: int,
) -> LimitPair:
    """Limit of L_deg(p0_mult, p_mults, f_mults) twisted by -l*P, with p_0 and p_mults on P."""
    L_P = DivisorClass(general_degree + twist, (p0_mult,) + tuple(p_mults))
    L_F = DivisorClass(general_degree, (general_degree + twist,) + tuple(f_mults))
    return LimitPair(L_P, L_F, twist, (1 + len(p_mults), len(f_mults)))


def limit_pair_m2(d: int, k: int, t: int) -> LimitPair:
    """L_P = L_{kn+t}(k(n-1), k^{2n}) and L_F = L_{k(n+1)}(kn+t, k^{2n}), n = d-1."""
    if d < 4 or k < 1 or t < 0:
        raise LatticeError(f"need d >= 4, k >= 1, t >= 0; got d={d}, k={k}, t={t}")
    n = d - 1
    pair = limit_pair(k * (n + 1), k * (n - 1), (k,) * (2 * n), (k,) * (2 * n), t - k)
    assert pair.L_P == DivisorClass(k * n + t, (k * (n - 1),) + (k,) * (2 * n))
    assert pair.L_F == DivisorClass(k * (n + 1), (k * n + t,) + (k,) * (2 * n))
    return pair


def limit_pair_induction(d: int, m: int, k: int) -> LimitPair:
    """L_P = k*xi_{d-2,m-2} and L_F = k*xi_{d,2}, from twisting k*xi_{d,m} by 2k."""
    if not 3 <= m <= d - 2 or k < 1:
        raise LatticeError(f"need 3 <= m <= d-2 and k >= 1; got d={d}, m={m}, k={k}")
    on_p = simple_point_count(d - 2, m - 2)
    on_f = simple_point_count(d, 2)
    if on_p + on_f != simple_point_count(d, m):
        raise LatticeError("simple points are not conserved")
    pair = limit_pair(k * d, k * (d - m), (k,) * on_p, (k,) * on_f, -2 * k)
    if pair.L_P != xi_class(d - 2, m - 2, k) or pair.L_F != xi_class(d, 2, k):
        raise LatticeError("limit pair does not match k*xi_{d-2,m-2} / k*xi_{d,2}")
    return pair


# -- ruled surfaces F_i --------------------------------------------------------

@dataclass(frozen=True)
class RuledClass:
    """b*B_i + f*f on F_i, with B_i the negative section and f a fibre."""

    index: int
    b_coeff: Fraction | int = 0
    f_coeff: Fraction | int = 0

    def __add__(self, other: "RuledClass") -> "RuledClass":
        self._same(other)
        return RuledClass(self.index, self.b_coeff + other.b_coeff, self.f_coeff + other.f_coeff)

    def __sub__(self, other: "RuledClass") -> "RuledClass":
        return self + (-1) * other

    def __rmul__(self, c) -> "RuledClass":
        return RuledClass(self.index, c * self.b_coeff, c * self.f_coeff)

    def _same(self, other: "RuledClass") -> None:
        if self.index != other.index:
            raise LatticeError(f"classes on F_{self.index} and F_{other.index} do not combine")

    def dot(self, other: "RuledClass") -> Fraction | int:
        self._same(other)
        # B.B = -i, B.f = 1, f.f = 0
        return (
            -self.index * self.b_coeff * other.b_coeff
            + self.b_coeff * other.f_coeff
            + self.f_coeff * other.b_coeff
        )

    def is_zero(self) -> bool:
        return self.b_coeff == 0 and self.f_coeff == 0

    def normalized(self) -> "RuledClass":
        def tidy(x):
            x = Fraction(x)
            return int(x) if x.denominator == 1 else x

        return RuledClass(self.index, tidy(self.b_coeff), tidy(self.f_coeff))

    def __str__(self) -> str:
        return f"{self.b_coeff}B_{self.index} + {self.f_coeff}f"


def B(i: int) -> RuledClass:
    return RuledClass(i, 1, 0)


def fibre(i: int) -> RuledClass:
    return RuledClass(i, 0, 1)


def S(i: int) -> RuledClass:
    """The positive section, B_i + i*f."""
    return RuledClass(i, 1, i)


def normal_bundle(m: int, i: int) -> RuledClass:
    """Normal bundle of Q_i, solved from the central fibre restricting trivially to Q_i.

    The fibre contains P (mult 1), F-bar (mult 1) and Q_j (mult m-j). On Q_i
    these restrict to: B_0 from P (i=0) or B_i from Q_{i-1}; S_i from Q_{i+1};
    m fibres from F-bar.
    """
    if m < 2 or not 0 <= i < m:
        raise LatticeError(f"need m >= 2 and 0 <= i < m; got m={m}, i={i}")
    below = B(i) if i == 0 else (m - i + 1) * B(i)
    above = (m - i - 1) * S(i) if i < m - 1 else RuledClass(i)
    rest = below + above + m * fibre(i)
    return (Fraction(-1, m - i) * rest).normalized()


def normal_bundle_displayed(m: int, i: int) -> RuledClass:
    """Closed forms: -B_0 - f; -2B_i - (i+1)f in the middle; -2B_{m-1} - m f."""
    if m < 2 or not 0 <= i < m:
        raise LatticeError(f"need m >= 2 and 0 <= i < m; got m={m}, i={i}")
    if i == 0:
        return RuledClass(0, -1, -1)
    if i == m - 1:
        return RuledClass(i, -2, -m)
    return RuledClass(i, -2, -(i + 1))


def q_stack(m: int) -> list[tuple[RuledClass, int]]:
    """(normal bundle, multiplicity in the central fibre) for Q_0, ..., Q_{m-1}."""
    if m < 2:
        raise LatticeError("the stack needs m >= 2")
    return [(normal_bundle(m, i), m - i) for i in range(m)]


def _restriction_of_component(m: int, j: int, i: int) -> RuledClass:
    """Q_j restricted to Q_i."""
    if j == i:
        return normal_bundle(m, i)
    if j == i - 1:
        return B(i)  # S_{i-1} on Q_{i-1} is glued to B_i
    if j == i + 1:
        return S(i)
    return RuledClass(i)


def twisted_restriction(m: int, h: int, i: int) -> RuledClass:
    """Pull-back of the bundle (-s f on each Q_i, s = hm) twisted by -h * sum (m-j) Q_j, on Q_i."""
    if m < 2 or h < 1 or not 0 <= i < m:
        raise LatticeError(f"need m >= 2, h >= 1, 0 <= i < m; got m={m}, h={h}, i={i}")
    s = h * m
    out = -s * fibre(i)
    for j in range(m):
        out = out - (h * (m - j)) * _restriction_of_component(m, j, i)
    return out.normalized()


def restriction_on_thrown_curve(s: int, c_self: int = -1) -> int:
    """Degree on C of L|_P twisted by -s Q_0, which removes s*C: -s - s*C.C."""
    return -s - s * c_self


@dataclass(frozen=True)
class MatchingSpec:
    h: int
    m: int
    points: tuple[str, ...]
    correspondence_conditions: int

    @property
    def s(self) -> int:
        return self.h * self.m

    @property
    def chain_type(self) -> tuple[int, int]:
        """[h^m]: m infinitely near points of multiplicity h."""
        return (self.h, self.m)

    @property
    def chain_rows_per_point(self) -> int:
        return self.m * self.h * (self.h + 1) // 2

    def __str__(self) -> str:
        return f"[{self.h}^{self.m}] at {self.m} point(s), +{self.correspondence_conditions} correspondence"


def refined_matching(s: int, m: int) -> MatchingSpec:
    """Matching data on the far side for a (-1)-curve with C.L = -s meeting R at m points."""
    if s <= 0 or m < 1:
        raise LatticeError(f"need s > 0 and m >= 1; got s={s}, m={m}")
    if s % m:
        raise NotDivisible(f"{m} does not divide {s}")
    h = s // m
    return MatchingSpec(h, m, tuple(f"p{i + 1}" for i in range(m)), h * (m - 1))
