"""Quadratic transformations acting on divisor classes.

Only lattice-level bookkeeping lives here. The coordinate formulas of the
plane maps, used to build explicit model curves, are in ``nonef.oracle.curves``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .lattice import DivisorClass, LatticeError, checked, intersect, is_minus_one_class


class CremonaError(LatticeError):
    pass


class ReductionFailed(CremonaError):
    """Greedy reduction ran past its step bound."""


@dataclass(frozen=True)
class QuadTransform:
    base: tuple[int, int, int]

    def __post_init__(self) -> None:
        base = tuple(int(i) for i in self.base)
        if len(base) != 3 or len(set(base)) != 3 or min(base) < 0:
            raise CremonaError(f"quadratic transform needs three distinct indices, got {self.base}")
        object.__setattr__(self, "base", base)

    def check(self, n: int) -> None:
        if max(self.base) >= n:
            raise CremonaError(f"base {self.base} out of range for a class on {n} points")

    def __str__(self) -> str:
        i, j, k = self.base
        return f"q {i} {j} {k}"


@dataclass(frozen=True)
class TransformLog:
    steps: tuple[QuadTransform, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def reversed(self) -> "TransformLog":
        # each step is an involution, so the inverse is the reversed sequence
        return TransformLog(tuple(reversed(self.steps)))

    def then(self, other: "TransformLog") -> "TransformLog":
        return TransformLog(self.steps + other.steps)

    def to_text(self) -> str:
        return "".join(f"{step}\n" for step in self.steps)

    @classmethod
    def from_text(cls, text: str) -> "TransformLog":
        steps = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 4 or parts[0] != "q":
                raise CremonaError(f"line {lineno}: expected 'q i j k', got {line!r}")
            steps.append(QuadTransform(tuple(int(p) for p in parts[1:])))
        return cls(tuple(steps))


@dataclass(frozen=True)
class SplitResult:
    multiplicity: int
    residual: DivisorClass


def quadratic_transform(a: DivisorClass, t: QuadTransform) -> DivisorClass:
    t.check(a.n)
    i, j, k = t.base
    d, m = a.degree, list(a.mults)
    mi, mj, mk = m[i], m[j], m[k]
    m[i], m[j], m[k] = d - mj - mk, d - mi - mk, d - mi - mj
    return DivisorClass(checked(2 * d - mi - mj - mk), tuple(checked(x) for x in m))


def image_under_log(a: DivisorClass, log: TransformLog) -> DivisorClass:
    for step in log:
        a = quadratic_transform(a, step)
    return a


def fixed_chain(n_points: int, base: int = 0, pairs: Sequence[tuple[int, int]] | None = None) -> TransformLog:
    """Transforms based at ``base`` and successive fresh pairs in ascending index order."""
    if pairs is None:
        rest = [i for i in range(n_points) if i != base]
        pairs = [(rest[2 * s], rest[2 * s + 1]) for s in range(len(rest) // 2)]
    used: set[int] = set()
    steps = []
    for p, q in pairs:
        if p in used or q in used or base in (p, q):
            raise CremonaError(f"pair {(p, q)} is not fresh")
        used.update((p, q))
        steps.append(QuadTransform((base, p, q)))
    return TransformLog(tuple(steps))


def greedy_steps_bound(n: int) -> int:
    return 10 * n + 100


def reduce_chain(
    a: DivisorClass,
    strategy: str = "fixed",
    *,
    base: int = 0,
    pairs: Sequence[tuple[int, int]] | None = None,
) -> tuple[DivisorClass, TransformLog]:
    """Reduce ``a`` along a chain of quadratic transforms.

    ``"fixed"`` applies the transforms based at point ``base`` and consecutive
    fresh pairs of the remaining points. ``"greedy"`` repeatedly transforms at
    the three largest multiplicities while their sum exceeds the degree.
    """
    if strategy == "fixed":
        log = fixed_chain(a.n, base, pairs)
        return image_under_log(a, log), log
    if strategy == "greedy":
        return _greedy(a)
    raise CremonaError(f"unknown reduction strategy {strategy!r}")


def _greedy(a: DivisorClass) -> tuple[DivisorClass, TransformLog]:
    steps: list[QuadTransform] = []
    bound = greedy_steps_bound(a.n)
    while a.n >= 3:
        order = sorted(range(a.n), key=lambda i: (-a.mults[i], i))
        top = order[:3]
        if a.degree >= sum(a.mults[i] for i in top):
            break
        if len(steps) >= bound:
            raise ReductionFailed(f"no standard form after {bound} steps; reached {a}")
        step = QuadTransform(tuple(sorted(top)))
        try:
            a = quadratic_transform(a, step)
        except OverflowError:
            raise ReductionFailed(f"degree diverged after {len(steps)} steps") from None
        steps.append(step)
    return a, TransformLog(tuple(steps))


def split_curve(a: DivisorClass, c: DivisorClass) -> SplitResult:
    """Remove a (-1)-curve as many times as it is forced into the base locus."""
    if not is_minus_one_class(c):
        raise CremonaError(f"{c} is not a (-1)-class; the splitting count is meaningless")
    mult = max(0, -intersect(a, c))
    return SplitResult(mult, a - mult * c)


def split_all(a: DivisorClass, curves: Iterable[DivisorClass]) -> tuple[list[int], DivisorClass]:
    mults = []
    for c in curves:
        res = split_curve(a, c)
        mults.append(res.multiplicity)
        a = res.residual
    return mults, a
