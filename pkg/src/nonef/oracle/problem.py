"""Interpolation problems and their assembly into condition matrices."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

from ..lattice import DivisorClass
from .curves import MAX_RESAMPLES, CurveSpec, DegenerateConfiguration, ModelCurve, build_model_curve
from .jets import blowup_chain_rows, default_truncation, fat_point_rows, local_jet, monomial_count, monomials
from .linalg import derive_seed, rng_for

ORDINARY, ON_CURVE, CHAIN = "ordinary", "on_curve", "chain"
KINDS = (ORDINARY, ON_CURVE, CHAIN)


class ProblemError(ValueError):
    pass


@dataclass(frozen=True)
class PointCondition:
    """A fat point. ``chain`` means m infinitely near points of multiplicity h along the curve.

    ``h = 0`` is allowed and imposes nothing; it keeps the sampled location
    stable when residual problems lower every multiplicity.
    """

    kind: str
    h: int
    curve: str | None = None
    m: int = 1
    param: int | None = None
    point: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ProblemError(f"unknown condition kind {self.kind!r}")
        if self.h < 0 or self.m < 1:
            raise ProblemError(f"bad multiplicity data h={self.h}, m={self.m}")
        if self.kind != ORDINARY and self.curve is None:
            raise ProblemError(f"{self.kind} condition needs a curve id")
        if self.kind != CHAIN and self.m != 1:
            raise ProblemError("only chain conditions carry a length m")

    @property
    def count(self) -> int:
        return self.m * self.h * (self.h + 1) // 2

    def lowered(self, by: int = 1) -> "PointCondition":
        return replace(self, h=max(0, self.h - by))

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind, "h": self.h}
        if self.curve is not None:
            out["curve"] = self.curve
        if self.kind == CHAIN:
            out["m"] = self.m
        if self.param is not None:
            out["param"] = self.param
        if self.point is not None:
            out["point"] = list(self.point)
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PointCondition":
        point = data.get("point")
        return cls(
            kind=data["kind"],
            h=int(data["h"]),
            curve=data.get("curve"),
            m=int(data.get("m", 1)),
            param=data.get("param"),
            point=tuple(point) if point is not None else None,
        )


def Ordinary(h: int) -> PointCondition:
    return PointCondition(ORDINARY, h)


def OnCurve(curve: str, h: int) -> PointCondition:
    return PointCondition(ON_CURVE, h, curve)


def Chain(curve: str, h: int, m: int) -> PointCondition:
    return PointCondition(CHAIN, h, curve, m)


@dataclass(frozen=True)
class InterpolationProblem:
    degree: int
    conditions: tuple[PointCondition, ...] = ()
    curves: dict[str, CurveSpec] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise ProblemError("degree must be non-negative")
        object.__setattr__(self, "conditions", tuple(self.conditions))
        for c in self.conditions:
            if c.curve is not None and c.curve not in self.curves:
                raise ProblemError(f"condition refers to unknown curve {c.curve!r}")

    @classmethod
    def from_class(cls, a: DivisorClass) -> "InterpolationProblem":
        """General points with the class's positive multiplicities."""
        return cls(a.degree, tuple(Ordinary(m) for m in a.mults if m > 0))

    @property
    def monomials(self) -> int:
        return monomial_count(self.degree)

    @property
    def condition_count(self) -> int:
        return sum(c.count for c in self.conditions)

    @property
    def virtual_dim(self) -> int:
        return self.monomials - 1 - self.condition_count

    @property
    def max_multiplicity(self) -> int:
        return max((c.h for c in self.conditions), default=0)

    def with_condition(self, cond: PointCondition) -> "InterpolationProblem":
        return replace(self, conditions=self.conditions + (cond,))

    def residual(self, curve_id: str, degree_drop: int) -> "InterpolationProblem":
        """Problem for the residual once the curve has split off: lower degree, conditions on it drop by one."""
        conds = tuple(c.lowered() if c.curve == curve_id else c for c in self.conditions)
        return replace(self, degree=self.degree - degree_drop, conditions=conds)

    def to_dict(self) -> dict[str, Any]:
        return {
            "degree": self.degree,
            "conditions": [c.to_dict() for c in self.conditions],
            "curves": {k: v.to_dict() for k, v in sorted(self.curves.items())},
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "InterpolationProblem":
        conds: list[PointCondition] = []
        for item in data.get("conditions", []):
            item = dict(item)
            repeat = int(item.pop("count", 1))
            conds.extend([PointCondition.from_dict(item)] * repeat)
        curves = {k: CurveSpec.from_dict(v) for k, v in data.get("curves", {}).items()}
        return cls(int(data["degree"]), tuple(conds), curves)


@dataclass
class AssembledProblem:
    problem: InterpolationProblem
    seed: int
    prime: int
    rows: list[list[int]]
    curves: dict[str, ModelCurve]
    locations: list[Any]  # per condition: affine point or curve parameter

    @property
    def ncols(self) -> int:
        return self.problem.monomials


def check_prime(problem: InterpolationProblem, prime: int) -> None:
    if prime <= 2 * max(problem.degree, 1) * max(problem.max_multiplicity, 1):
        raise ProblemError(f"prime {prime} too small for degree {problem.degree}")


def assemble(
    problem: InterpolationProblem,
    seed: int,
    prime: int,
    truncation_extra: int = 0,
) -> AssembledProblem:
    """Build the condition matrix at random points drawn from (seed, prime).

    Locations are drawn in condition order from one stream, so appending a
    condition or lowering multiplicities keeps every earlier location fixed.
    """
    check_prime(problem, prime)
    p = prime
    degree = problem.degree
    curves = {
        cid: build_model_curve(curve_spec, p, derive_seed("curve", cid, seed, p))
        for cid, curve_spec in sorted(problem.curves.items())
    }
    rng = rng_for("points", seed, p)
    rows: list[list[int]] = []
    locations: list[Any] = []
    used_points: set[tuple[int, int]] = set()
    used_params: dict[str, set[int]] = {cid: set() for cid in curves}

    for cond in problem.conditions:
        if cond.kind == ORDINARY:
            pt = cond.point
            if pt is None:
                for _ in range(MAX_RESAMPLES):
                    pt = (rng.randrange(p), rng.randrange(p))
                    if pt not in used_points:
                        break
                else:
                    raise DegenerateConfiguration("could not sample distinct points")
            pt = (pt[0] % p, pt[1] % p)
            used_points.add(pt)
            locations.append(pt)
            rows.extend(fat_point_rows(degree, pt[0], pt[1], cond.h, p))
            continue

        curve = curves[cond.curve]  # type: ignore[index]
        s = cond.param
        if s is None:
            for _ in range(MAX_RESAMPLES):
                s = rng.randrange(p)
                if s not in used_params[cond.curve] and curve.usable(s):
                    break
            else:
                raise DegenerateConfiguration(f"no usable parameter on curve {cond.curve!r}")
        elif not curve.usable(s % p):
            raise ProblemError(f"parameter {s} hits a singular or special point of {cond.curve!r}")
        s %= p
        used_params[cond.curve].add(s)  # type: ignore[index]
        locations.append(s)
        if cond.h == 0:
            continue
        if cond.kind == ON_CURVE:
            x0, y0 = curve.affine(s)  # type: ignore[misc]
            rows.extend(fat_point_rows(degree, x0, y0, cond.h, p))
        else:
            n_terms = default_truncation(cond.h, cond.m) + truncation_extra
            jet = local_jet(degree, curve.param, s, cond.h, n_terms, p)
            rows.extend(blowup_chain_rows(jet, cond.h, cond.m, n_terms))

    return AssembledProblem(problem, seed, prime, rows, curves, locations)


__all__ = [
    "AssembledProblem",
    "Chain",
    "InterpolationProblem",
    "OnCurve",
    "Ordinary",
    "PointCondition",
    "ProblemError",
    "assemble",
    "monomials",
]
