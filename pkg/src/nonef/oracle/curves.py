"""Rational model curves over F_p, built by pushing a line through quadratic maps.

After ``steps`` quadratic maps, each based at the running image of p_0 and two
fresh points, a general line becomes a rational curve of degree steps+1 with a
steps-fold point at the image of p_0, passing once through the images of the
2*steps fresh points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import flint

from ..cremona import image_under_log, fixed_chain
from ..lattice import DivisorClass, line_class
from .jets import evaluate, evaluation_row, monomials, multiplicity, poly_eval
from .linalg import inverse3, matvec, nullspace_mod_p, rng_for

MAX_RESAMPLES = 32

Point = tuple[int, int, int]


class DegenerateConfiguration(RuntimeError):
    """Random choices kept hitting special position."""


@dataclass(frozen=True)
class CurveSpec:
    """Recipe for a model curve; the curve itself is rebuilt from (prime, seed)."""

    steps: int

    def to_dict(self) -> dict:
        return {"kind": "cremona_line", "steps": self.steps}

    @classmethod
    def from_dict(cls, data: dict) -> "CurveSpec":
        if data.get("kind", "cremona_line") != "cremona_line":
            raise ValueError(f"unknown curve kind {data.get('kind')!r}")
        return cls(int(data["steps"]))


@dataclass
class ModelCurve:
    prime: int
    param: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]  # X(s), Y(s), Z(s)
    degree: int
    implicit: tuple[int, ...]  # coefficients over monomials(degree)
    singular: tuple[tuple[Point, int], ...]  # (point, multiplicity)
    center: Point | None = None  # image of p_0
    marked: tuple[Point, ...] = ()  # images of the fresh base points
    curve_spec: CurveSpec | None = None

    def point(self, s: int) -> Point:
        p = self.prime
        return tuple(poly_eval(c, s, p) for c in self.param)  # type: ignore[return-value]

    def affine(self, s: int) -> tuple[int, int] | None:
        x, y, z = self.point(s)
        if z == 0:
            return None
        inv = pow(z, -1, self.prime)
        return x * inv % self.prime, y * inv % self.prime

    def usable(self, s: int) -> bool:
        """True when s maps to an affine smooth point where x is a local parameter."""
        p = self.prime
        aff = self.affine(s)
        if aff is None:
            return False
        pt = self.point(s)
        for sing, _ in self.singular:
            if _proportional(pt, sing, p):
                return False
        if multiplicity(self.implicit, self.degree, aff[0], aff[1], p) != 1:
            return False
        # d/ds (X/Z) != 0  <=>  X'Z - XZ' != 0
        X, _, Z = self.param
        dX, dZ = _derivative(X, p), _derivative(Z, p)
        return (poly_eval(dX, s, p) * pt[2] - pt[0] * poly_eval(dZ, s, p)) % p != 0

    def contains(self, point: Sequence[int]) -> bool:
        return evaluate(self.implicit, self.degree, point, self.prime) == 0

    def multiplicity_at(self, point: Point) -> int:
        p = self.prime
        x, y, z = point
        if z % p == 0:
            raise ValueError("point at infinity; model curves are built in general position")
        inv = pow(z, -1, p)
        return multiplicity(self.implicit, self.degree, x * inv % p, y * inv % p, p)

    def geometric_class(self) -> DivisorClass:
        """Degree and multiplicities at (image of p_0, marked points), read off the equation."""
        m0 = self.multiplicity_at(self.center) if self.center is not None else 0
        return DivisorClass(self.degree, (m0,) + tuple(self.multiplicity_at(q) for q in self.marked))


def expected_class(steps: int) -> DivisorClass:
    n_points = 2 * steps + 1
    return image_under_log(line_class(n_points), fixed_chain(n_points))


def _derivative(f: Sequence[int], p: int) -> list[int]:
    return [k * f[k] % p for k in range(1, len(f))] or [0]


def _proportional(a: Sequence[int], b: Sequence[int], p: int) -> bool:
    return all((a[i] * b[j] - a[j] * b[i]) % p == 0 for i in range(3) for j in range(i + 1, 3))


def _random_point(rng: random.Random, p: int) -> Point:
    while True:
        v = (rng.randrange(p), rng.randrange(p), rng.randrange(p))
        if any(v):
            return v  # type: ignore[return-value]


def _poly(coeffs: Sequence[int], p: int) -> flint.nmod_poly:
    return flint.nmod_poly(list(coeffs), p)


def _coeffs(f: flint.nmod_poly) -> tuple[int, ...]:
    return tuple(int(c) for c in f.coeffs()) or (0,)


def _quadratic_step(param, p0, qa, qb, others, p):
    """One quadratic map based at (p0, qa, qb); returns the images in the new plane."""
    minv = inverse3([[p0[r], qa[r], qb[r]] for r in range(3)], p)
    if minv is None:
        return None
    w = [sum((_poly([minv[r][c]], p) * param[c] for c in range(3)), _poly([0], p)) for r in range(3)]
    image = [w[1] * w[2], w[0] * w[2], w[0] * w[1]]
    g = image[0].gcd(image[1]).gcd(image[2])
    image = [c // g for c in image]
    new_others = []
    for q in others:
        wq = matvec(minv, q, p)
        if 0 in wq:
            return None  # q on a side of the base triangle
        new_others.append((wq[1] * wq[2] % p, wq[0] * wq[2] % p, wq[0] * wq[1] % p))
    return image, new_others


def build_model_curve(curve_spec: CurveSpec, prime: int, seed: int) -> ModelCurve:
    """Image of a random line under ``curve_spec.steps`` quadratic maps, in random coordinates."""
    p = prime
    n = curve_spec.steps
    rng = rng_for("model-curve", n, prime, seed)
    for _ in range(MAX_RESAMPLES):
        curve = _try_build(n, p, rng)
        if curve is not None:
            curve.curve_spec = curve_spec
            return curve
    raise DegenerateConfiguration(f"could not build a model curve with {n} steps over F_{p}")


def _try_build(n: int, p: int, rng: random.Random) -> ModelCurve | None:
    a, b = _random_point(rng, p), _random_point(rng, p)
    param = [_poly([a[r], b[r]], p) for r in range(3)]
    p0 = _random_point(rng, p)
    fresh = [_random_point(rng, p) for _ in range(2 * n)]
    # fresh[2s], fresh[2s+1] are the pair used at step s; track all of them
    for s in range(n):
        qa, qb = fresh[2 * s], fresh[2 * s + 1]
        others = fresh[: 2 * s] + fresh[2 * s + 2 :]
        step = _quadratic_step(param, p0, qa, qb, others, p)
        if step is None:
            return None
        param, moved = step
        p0 = (1, 0, 0)
        fresh = moved[: 2 * s] + [(0, 1, 0), (0, 0, 1)] + moved[2 * s :]
    # random frame so that nothing sits at infinity or on a coordinate line
    g = [[rng.randrange(p) for _ in range(3)] for _ in range(3)]
    if inverse3(g, p) is None:
        return None
    param = [sum((_poly([g[r][c]], p) * param[c] for c in range(3)), _poly([0], p)) for r in range(3)]
    p0 = matvec(g, p0, p)
    fresh = [matvec(g, q, p) for q in fresh]
    coeffs = tuple(_coeffs(c) for c in param)
    degree = max(len(c) for c in coeffs) - 1
    if degree != n + 1 or any(pt[2] == 0 for pt in [p0, *fresh]):
        return None
    implicit = _implicit_equation(coeffs, degree, p, rng)
    if implicit is None:
        return None
    singular = ((p0, n),) if n >= 2 else ()
    curve = ModelCurve(p, coeffs, degree, tuple(implicit), singular, p0, tuple(fresh))  # type: ignore[arg-type]
    if curve.multiplicity_at(p0) != n:
        return None
    return curve


def _implicit_equation(param, degree: int, p: int, rng: random.Random) -> list[int] | None:
    """The unique degree-`degree` form vanishing on the parametrized curve."""
    n_rows = len(monomials(degree)) + 4

    def sample_rows(deg: int) -> list[list[int]]:
        rows = []
        for _ in range(n_rows):
            s = rng.randrange(p)
            pt = tuple(poly_eval(c, s, p) for c in param)
            rows.append(evaluation_row(deg, pt, p))
        return rows

    kernel = nullspace_mod_p(sample_rows(degree), len(monomials(degree)), p)
    if len(kernel) != 1:
        return None
    if degree > 1 and nullspace_mod_p(sample_rows(degree - 1), len(monomials(degree - 1)), p):
        return None  # lies on a curve of lower degree
    return kernel[0]


def build_model_curve_T(n: int, prime: int, seed: int) -> ModelCurve:
    """Cremona image of a general line under the n-step chain: degree n+1, n-fold point."""
    if n < 2:
        raise ValueError("the model curve T needs n >= 2")
    return build_model_curve(CurveSpec(n), prime, seed)
