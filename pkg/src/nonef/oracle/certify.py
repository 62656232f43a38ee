"""Rank certificates for linear systems of plane curves.

A random specialization over F_p can only lower the rank of the condition
matrix, so ``monomials - rank - 1`` bounds the generic dimension from above.
The virtual dimension, or explicit members supplied by a witness, bound it
from below. Full rank is therefore a certificate of generic emptiness.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Sequence

from .jets import evaluation_row, monomials, multiply, power
from .linalg import apply, derive_primes, derive_seed, nullspace_mod_p, rank_mod_p
from .problem import AssembledProblem, InterpolationProblem, OnCurve, assemble

EMPTY = "EmptyCertified"
EXACT = "DimExact"
INCONCLUSIVE = "Inconclusive"

CERT_FORMAT = "nonef-certificate/1"

Witness = Callable[[AssembledProblem], Sequence[Sequence[int]]]


@dataclass
class RankCertificate:
    prime: int
    seed: int
    monomials: int
    condition_rows: int
    rank: int
    dim_upper: int
    dim_lower: int
    verdict: str
    elapsed_ms: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        if self.dim_lower > self.dim_upper:
            raise AssertionError(f"lower bound {self.dim_lower} exceeds upper bound {self.dim_upper}")

    @property
    def dim(self) -> int | None:
        return self.dim_upper if self.verdict in (EMPTY, EXACT) else None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RankCertificate":
        return cls(**{k: data[k] for k in cls.__dataclass_fields__ if k in data})


def classify(dim_upper: int, dim_lower: int) -> str:
    if dim_upper == -1:
        return EMPTY
    if dim_lower == dim_upper:
        return EXACT
    return INCONCLUSIVE


def _witness_lower_bound(assembled: AssembledProblem, witness: Witness | None) -> int:
    if witness is None:
        return -1
    members = [list(w) for w in witness(assembled)]
    p = assembled.prime
    for w in members:
        if len(w) != assembled.ncols or not any(x % p for x in w):
            raise ValueError("witness member has the wrong shape or is zero")
        if any(apply(assembled.rows, w, p)):
            raise ValueError("witness member violates the imposed conditions")
    return rank_mod_p(members, assembled.ncols, p) - 1 if members else -1


def run_once(
    problem: InterpolationProblem,
    seed: int,
    prime: int,
    witness: Witness | None = None,
) -> tuple[RankCertificate, AssembledProblem]:
    start = time.perf_counter()
    assembled = assemble(problem, seed, prime)
    rank = rank_mod_p(assembled.rows, assembled.ncols, prime)
    upper = problem.monomials - rank - 1
    lower = max(-1, problem.virtual_dim, _witness_lower_bound(assembled, witness))
    cert = RankCertificate(
        prime=prime,
        seed=seed,
        monomials=problem.monomials,
        condition_rows=len(assembled.rows),
        rank=rank,
        dim_upper=upper,
        dim_lower=lower,
        verdict=classify(upper, lower),
        elapsed_ms=round(1000 * (time.perf_counter() - start)),
    )
    return cert, assembled


def dimension(
    problem: InterpolationProblem,
    seed: int,
    prime: int | None = None,
    retries: int = 2,
    witness: Witness | None = None,
) -> RankCertificate:
    """Certificate from one prime; on Inconclusive, retry with fresh (seed, prime) pairs.

    The certificate kept is the one with the largest rank, since every
    specialization undercounts the generic rank.
    """
    if prime is None:
        prime = derive_primes(seed, 1)[0]
    best, _ = run_once(problem, seed, prime, witness)
    attempt = 0
    while best.verdict == INCONCLUSIVE and attempt < retries:
        attempt += 1
        s = derive_seed("retry", seed, attempt)
        cert, _ = run_once(problem, s, derive_primes(s, 1)[0], witness)
        if cert.rank > best.rank:
            best = cert
    return best


@dataclass
class Certification:
    """One problem checked at several primes."""

    problem: InterpolationProblem
    seed: int
    runs: list[RankCertificate]
    witness: str | None = None

    @property
    def agree(self) -> bool:
        return len({(r.rank, r.verdict) for r in self.runs}) == 1

    @property
    def verdict(self) -> str:
        return self.runs[0].verdict if self.agree else INCONCLUSIVE

    @property
    def dim_upper(self) -> int:
        return min(r.dim_upper for r in self.runs)

    @property
    def dim_lower(self) -> int:
        return max(r.dim_lower for r in self.runs)

    @property
    def dim(self) -> int | None:
        return self.runs[0].dim if self.verdict != INCONCLUSIVE else None

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": CERT_FORMAT,
            "problem": self.problem.to_dict(),
            "seed": self.seed,
            "witness": self.witness,
            "verdict": self.verdict,
            "runs": [r.to_dict() for r in self.runs],
        }

    def to_text(self, config: dict[str, Any] | None = None) -> str:
        data = self.to_dict()
        if config is not None:
            data["config"] = config
        return json.dumps(data, indent=2, sort_keys=True) + "\n"


def certify(
    problem: InterpolationProblem,
    seed: int,
    primes: int = 3,
    witness: str | None = None,
) -> Certification:
    """Run at ``primes`` independent primes derived from the seed and require agreement."""
    make = resolve_witness(witness)
    runs = [run_once(problem, seed, p, make)[0] for p in derive_primes(seed, primes)]
    return Certification(problem, seed, runs, witness)


def canonical_run(run: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in run.items() if k != "elapsed_ms"}


def verify_certificate(data: dict[str, Any]) -> tuple[bool, str]:
    """Re-run every recorded (seed, prime); returns (ok, first divergence)."""
    if data.get("format") != CERT_FORMAT:
        raise ValueError("not a certificate document")
    problem = InterpolationProblem.from_dict(data["problem"])
    witness = data.get("witness")
    make = resolve_witness(witness)
    fresh = []
    for k, run in enumerate(data["runs"]):
        cert, _ = run_once(problem, int(run["seed"]), int(run["prime"]), make)
        got, want = canonical_run(cert.to_dict()), canonical_run(run)
        for key in sorted(set(got) | set(want)):
            if got.get(key) != want.get(key):
                return False, f"run {k}: {key} recorded {want.get(key)!r}, recomputed {got.get(key)!r}"
        fresh.append(cert)
    verdict = Certification(problem, int(data["seed"]), fresh, witness).verdict
    if verdict != data.get("verdict"):
        return False, f"verdict recorded {data.get('verdict')!r}, recomputed {verdict!r}"
    return True, ""


def base_locus_contains(problem: InterpolationProblem, curve_id: str, seed: int, prime: int) -> bool:
    """Whether the curve is a fixed component: one more point on it changes nothing."""
    if curve_id not in problem.curves:
        raise KeyError(curve_id)
    before, _ = run_once(problem, seed, prime)
    after, _ = run_once(problem.with_condition(OnCurve(curve_id, 1)), seed, prime)
    return after.dim_upper == before.dim_upper


# -- witnesses -----------------------------------------------------------------

def doubled_conic() -> Witness:
    """Square of the conic through the first five ordinary points (for 4; 2^5)."""

    def build(assembled: AssembledProblem) -> list[list[int]]:
        p = assembled.prime
        pts = [loc for cond, loc in zip(assembled.problem.conditions, assembled.locations) if cond.kind == "ordinary"]
        rows = [evaluation_row(2, (x, y, 1), p) for x, y in pts[:5]]
        kernel = nullspace_mod_p(rows, len(monomials(2)), p)
        if len(kernel) != 1:
            return []
        conic = kernel[0]
        return [multiply(conic, 2, conic, 2, p)] if assembled.problem.degree == 4 else []

    return build


def curve_power(curve_id: str, t: int) -> Witness:
    """t times a model curve, i.e. its equation raised to the t-th power."""

    def build(assembled: AssembledProblem) -> list[list[int]]:
        curve = assembled.curves[curve_id]
        if curve.degree * t != assembled.problem.degree:
            return []
        return [power(curve.implicit, curve.degree, t, assembled.prime)]

    return build


def resolve_witness(name: str | None) -> Witness | None:
    """``doubled-conic`` or ``curve-power:<curve id>:<t>``."""
    if name is None:
        return None
    if name == "doubled-conic":
        return doubled_conic()
    kind, _, rest = name.partition(":")
    if kind == "curve-power":
        curve_id, _, t = rest.rpartition(":")
        return curve_power(curve_id, int(t))
    raise ValueError(f"unknown witness {name!r}")
