"""Machine-checked replays of the non-effectivity argument.

Every identity with two computable sides becomes a ``Computed`` step: one
side is the closed-form class quoted in the argument, the other is produced
by the lattice and Cremona primitives. Geometric steps with no finite
witness are ``Cited`` and carry an anchor string instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Any

from .cremona import image_under_log, fixed_chain, reduce_chain, split_all, split_curve
from .degeneration import (
    F_SIDE,
    P_SIDE,
    kernel_system,
    limit_pair_induction,
    limit_pair_m2,
    refined_matching,
    restriction_degree,
    restriction_on_thrown_curve,
)
from .lattice import (
    DivisorClass,
    LatticeError,
    exceptional_class,
    format_class,
    intersect,
    is_minus_one_class,
    line_class,
    minus_one_curve_C,
    simple_point_count,
    xi_class,
)
from .oracle import (
    EMPTY,
    EXACT,
    INCONCLUSIVE,
    Chain,
    CurveSpec,
    InterpolationProblem,
    OnCurve,
    base_locus_contains,
    certify,
    curve_power,
    derive_primes,
    run_once,
)

COMPUTED, CITED = "Computed", "Cited"
OK, FAILED, CITED_STATUS, UNVERIFIED = "ok", "failed", "cited", "unverified"
REPORT_FORMAT = "nonef-report/1"

LEMMA_MAX_N, LEMMA_MAX_T = 4, 2


def _show(value: Any) -> Any:
    if isinstance(value, DivisorClass):
        return format_class(value, compact=True)
    if isinstance(value, (list, tuple)):
        return [_show(v) for v in value]
    return value


@dataclass
class Step:
    description: str
    kind: str
    status: str
    anchor: str = ""
    inputs: dict[str, Any] = field(default_factory=dict)
    outputs: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "description": self.description,
            "kind": self.kind,
            "status": self.status,
            "anchor": self.anchor,
            "inputs": {k: _show(v) for k, v in self.inputs.items()},
            "outputs": {k: _show(v) for k, v in self.outputs.items()},
        }


@dataclass
class ReplayReport:
    mode: str
    parameters: dict[str, Any]
    steps: list[Step] = field(default_factory=list)
    children: list["ReplayReport"] = field(default_factory=list, repr=False)

    @property
    def conclusion(self) -> str:
        for i, s in enumerate(self.steps):
            if s.status == FAILED:
                return f"StepFailed({i})"
        for i, s in enumerate(self.steps):
            if s.status == UNVERIFIED:
                return f"Unverified({i})"
        return "AllStepsVerified"

    @property
    def verified(self) -> bool:
        return self.conclusion == "AllStepsVerified"

    def check(self, description: str, expected: Any, actual: Any, anchor: str = "", **inputs: Any) -> bool:
        ok = expected == actual
        self.steps.append(
            Step(description, COMPUTED, OK if ok else FAILED, anchor, inputs, {"expected": expected, "actual": actual})
        )
        return ok

    def cite(self, description: str, anchor: str, **inputs: Any) -> None:
        self.steps.append(Step(description, CITED, CITED_STATUS, anchor, inputs))

    def oracle_step(self, description: str, verdict: str, ok: bool, anchor: str = "", **outputs: Any) -> None:
        status = UNVERIFIED if verdict == INCONCLUSIVE else (OK if ok else FAILED)
        self.steps.append(Step(description, COMPUTED, status, anchor, {}, dict(outputs, verdict=verdict)))

    def nested(self, description: str, child: "ReplayReport", anchor: str = "") -> None:
        self.children.append(child)
        status = {True: OK}.get(child.verified, UNVERIFIED if child.conclusion.startswith("Unverified") else FAILED)
        self.steps.append(
            Step(description, COMPUTED, status, anchor, {"replay": child.mode, **child.parameters},
                 {"conclusion": child.conclusion})
        )

    def failures(self) -> list[Step]:
        return [s for s in self.steps if s.status == FAILED]

    def to_text(self, config: dict[str, Any] | None = None) -> str:
        header: dict[str, Any] = {"format": REPORT_FORMAT, "mode": self.mode, "parameters": self.parameters}
        if config is not None:
            header["config"] = config
        lines = [json.dumps(header, sort_keys=True)]
        lines += [json.dumps({"step": i, **s.to_dict()}, sort_keys=True) for i, s in enumerate(self.steps)]
        lines.append(json.dumps({"conclusion": self.conclusion}, sort_keys=True))
        return "\n".join(lines) + "\n"


# -- m = 2 -----------------------------------------------------------------------

def _lines_through_p0(n_points: int) -> list[DivisorClass]:
    out = []
    for i in range(1, n_points):
        mults = [0] * n_points
        mults[0] = mults[i] = 1
        out.append(DivisorClass(1, tuple(mults)))
    return out


def _side_F(report: ReplayReport, n: int, k: int, t: int, L_F: DivisorClass) -> DivisorClass:
    """Lines and C split off L_F; returns the residual L'_F."""
    tag = f"t={t}"
    C = minus_one_curve_C(n)
    lines = _lines_through_p0(2 * n + 1)
    mults, resid = split_all(L_F, lines)
    report.check(f"{tag}: each line <p0,p_i> splits off L_F with multiplicity t", [t] * (2 * n), mults,
                 "m2.lines-split",
                 L_F=L_F)
    report.check(f"{tag}: residual after the lines", DivisorClass(k * (n + 1) - 2 * n * t, (k * n + t - 2 * t * n,) + (k - t,) * (2 * n)),
                 resid, "m2.residual-after-split")
    report.check(f"{tag}: C . residual = -t(n-1)", -t * (n - 1), intersect(resid, C),
                 "m2.C-dot-residual")
    split = split_curve(resid, C)
    report.check(f"{tag}: C splits t(n-1) times", t * (n - 1), split.multiplicity, "m2.split-count")
    r = k - t * n
    report.check(f"{tag}: L'_F = L_((n+1)(k-tn))(n(k-tn), (k-tn)^2n)", DivisorClass((n + 1) * r, (n * r,) + (r,) * (2 * n)),
                 split.residual, "m2.further-residual")
    return split.residual


def replay_m2(d: int, k: int, *, lemma_oracle: bool = False, seed: int = 0) -> ReplayReport:
    """Replay the m=2 argument for k*xi_{d,2}, over every twist 0 <= t <= k/n."""
    if d < 4 or k < 1:
        raise LatticeError(f"need d >= 4 and k >= 1; got d={d}, k={k}")
    n = d - 1
    N = 2 * n + 1
    C = minus_one_curve_C(n)
    params: dict[str, Any] = {"d": d, "k": k, "n": n}
    if lemma_oracle:
        params.update(lemma_oracle=True, seed=seed)
    report = ReplayReport("m2", params)

    report.check("general fibre system is k*xi_{d,2}", xi_class(d, 2, k),
                 DivisorClass(k * (n + 1), (k * (n - 1),) + (k,) * (4 * n)), "xi.class-definition")
    report.check("4n simple points split 2n on P, 2n on F", simple_point_count(d, 2), 4 * n,
                 "m2.simple-point-count")
    report.check("C = L_n(n-1, 1^2n) is a (-1)-class", True, is_minus_one_class(C),
                 "m2.C-is-minus-one", C=C)
    report.check("L_kn(k(n-1), k^2n) = kC", k * C, DivisorClass(k * n, (k * (n - 1),) + (k,) * (2 * n)),
                 "m2.L_P-is-kC")
    neg = DivisorClass(k * n - 1, (k * (n - 1),) + (k,) * (2 * n))
    neg_split = split_curve(neg, C)
    report.check("t<0: after C splits from L_P the degree t(n^2+1) is negative (t=-1)", -(n * n + 1),
                 neg_split.residual.degree, "m2.negative-twist", L_P=neg)

    t_max = k // n
    for t in range(t_max + 1):
        pair = limit_pair_m2(d, k, t)
        tag = f"t={t}"
        report.check(f"{tag}: restrictions to R agree", restriction_degree(pair, P_SIDE),
                     restriction_degree(pair, F_SIDE), "matching.naive", L_P=pair.L_P, L_F=pair.L_F)
        r = k - t * n
        LF_prime = _side_F(report, n, k, t, pair.L_F)
        terminal, _ = reduce_chain(LF_prime, "fixed")
        report.check(f"{tag}: n quadratic maps bring L'_F to L_(k-tn)", DivisorClass(r, (0,) * N), terminal,
                     "m2.chain-endpoint-F")

        split_P = split_curve(pair.L_P, C)
        report.check(f"{tag}: C splits k-tn times from L_P", r, split_P.multiplicity,
                     "m2.C-splits-from-P")
        report.check(f"{tag}: L'_P = L_(t(n^2+1))(tn(n-1), (tn)^2n)",
                     DivisorClass(t * (n * n + 1), (t * n * (n - 1),) + (t * n,) * (2 * n)), split_P.residual,
                     "m2.residual-P")
        terminal_P, log_P = reduce_chain(split_P.residual, "fixed")
        report.check(f"{tag}: n quadratic maps bring L'_P to L_(t(n+1))(t^2n)",
                     DivisorClass(t * (n + 1), (0,) + (t,) * (2 * n)), terminal_P, "m2.chain-endpoint-P")
        report.check(f"{tag}: Cremona image T of R on P has class (n+1; n, 1^2n)",
                     DivisorClass(n + 1, (n,) + (1,) * (2 * n)), image_under_log(line_class(N), log_P),
                     "m2.image-of-R")
        if t > 0:
            _matching_positive_t(report, n, t, pair.L_F, lemma_oracle=lemma_oracle, seed=seed)
        else:
            _matching_t0(report, n, k, pair.L_P)

    t_bad = t_max + 1
    pair = limit_pair_m2(d, k, t_bad)
    _, resid = split_all(pair.L_F, _lines_through_p0(N))
    beyond = split_curve(resid, C).residual
    report.check(f"t={t_bad}: t > k/n leaves L'_F with negative degree", True, beyond.degree < 0,
                 "m2.feasibility-bound", L_F_residual=beyond)
    report.cite("no twist admits a limit curve satisfying the refined matching, so k*xi_{d,2} is not effective",
                "m2.conclusion")
    return report


def _matching_positive_t(report: ReplayReport, n: int, t: int, L_F: DivisorClass, *, lemma_oracle: bool, seed: int) -> None:
    tag = f"t={t}"
    N = 2 * n + 1
    R_F = exceptional_class(N, 0)  # the double curve on F is the (-1)-section
    C = minus_one_curve_C(n)
    line = _lines_through_p0(N)[0]
    s_line = -intersect(L_F, line)
    spec_line = refined_matching(s_line, intersect(line, R_F))
    report.check(f"{tag}: each line is a 1-throw with h=t", (t, 1), spec_line.chain_type,
                 "m2.line-throw", s=s_line)
    _, after_lines = split_all(L_F, _lines_through_p0(N))
    meet = intersect(C, R_F)
    report.check(f"{tag}: C meets R at n-1 points", n - 1, meet, "m2.C-meets-R")
    spec_C = refined_matching(-intersect(after_lines, C), meet)
    report.check(f"{tag}: C imposes ([t^(n-1)]_T)^(n-1)", (t, n - 1), spec_C.chain_type,
                 "m2.C-throw")
    report.check(f"{tag}: (n+1)^2 points of multiplicity t: 2n general + 2n on T + (n-1)^2 in chains",
                 (n + 1) ** 2, 2 * n + 2 * n + spec_C.m * spec_C.m, "m2.lemma-point-count")
    report.check(f"{tag}: correspondence adds t(n-2) conditions", t * (n - 2), spec_C.correspondence_conditions,
                 "matching.correspondence")
    if lemma_oracle and n <= LEMMA_MAX_N and t <= LEMMA_MAX_T:
        lemma = verify_lemma(n, t, seed=seed)
        report.oracle_step(f"{tag}: the only member is tT (oracle)", lemma.verdict, lemma.status == "Verified",
                           "lemma.unique-member", splits=lemma.splits, dim_upper=lemma.dim_upper)
    else:
        report.cite(f"{tag}: the system has at most one member, tT", "lemma.unique-member")
    report.cite(f"{tag}: tT violates the correspondence since n-1 >= 2, so L_P is empty",
                "m2.correspondence-fails")


def _matching_t0(report: ReplayReport, n: int, k: int, L_P: DivisorClass) -> None:
    N = 2 * n + 1
    C = minus_one_curve_C(n)
    report.check("t=0: L_P is the single curve kC", k * C, L_P, "m2.t0.unique-curve")
    report.check("t=0: C meets R at n points", n, intersect(C, line_class(N)),
                 "m2.t0.C-meets-R")
    report.check("t=0: C . L_P = -k, so s = k", -k, intersect(L_P, C), "m2.t0.throw-data")
    k0 = k
    if k % n:
        k0 = k * n // gcd(k, n)
        report.cite(f"t=0: k*xi effective implies {k0}*xi effective; continue with k'={k0}", "m2.t0.rescale-k", k=k, k_prime=k0)
    match = refined_matching(k0, n)
    report.check("t=0: refined matching gives n points of type [h^n], h = k/n", (k0 // n, n), match.chain_type,
                 "m2.t0.chain-type")
    F_log = fixed_chain(N)
    report.check("t=0: Cremona image T' of R on F is L_n(n-1, 1^2n)", DivisorClass(n, (n - 1,) + (1,) * (2 * n)),
                 image_under_log(exceptional_class(N, 0), F_log), "m2.t0.image-of-R")
    L_F0 = DivisorClass(k0 * (n + 1), (k0 * n,) + (k0,) * (2 * n))
    report.check("t=0: L_F reduces to L_hn", DivisorClass(k0, (0,) * N), image_under_log(L_F0, F_log),
                 "m2.t0.chain-endpoint-F")
    report.check("t=0: twisting by -kQ_0 makes the bundle trivial on C", 0, restriction_on_thrown_curve(k),
                 "m2.t0.trivial-on-C")
    report.check("t=0: L_P - kC is the zero class", True, (L_P - k * C).is_zero(), "m2.t0.trivial-on-P")
    report.cite("t=0: the only curve on F is hT', so the section vanishes on P; no limit curve",
                "m2.t0.section-vanishes")


# -- Lemma -------------------------------------------------------------------------

@dataclass
class LemmaReport:
    n: int
    t: int
    prime: int
    seed: int
    dim_upper: int
    dim_lower: int
    verdict: str
    splits: int
    residual_degree: int
    residual_dim: int
    stages: list[dict[str, int]] = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.verdict == INCONCLUSIVE and self.dim_upper > 0:
            return "Unverified"
        ok = (
            self.dim_upper <= 0
            and self.splits == self.t
            and self.residual_degree == 0
            and self.residual_dim == 0
        )
        return "Verified" if ok else "Failed"


def lemma_problem(n: int, t: int) -> InterpolationProblem:
    """Degree t(n+1); n-1 chains [t^(n-1)] on T and 4n points of multiplicity t on T."""
    conds = (Chain("T", t, n - 1),) * (n - 1) + (OnCurve("T", t),) * (4 * n)
    return InterpolationProblem(t * (n + 1), conds, {"T": CurveSpec(n)})


def verify_lemma(n: int, t: int, prime: int | None = None, seed: int = 0) -> LemmaReport:
    """Check at a random specialization that the unique member is tT."""
    if not 2 <= n <= LEMMA_MAX_N or not 1 <= t <= LEMMA_MAX_T:
        raise LatticeError(f"lemma check is desk-scale only: 2 <= n <= {LEMMA_MAX_N}, 1 <= t <= {LEMMA_MAX_T}")
    if prime is None:
        prime = derive_primes(seed, 1)[0]
    problem = lemma_problem(n, t)
    cert, _ = run_once(problem, seed, prime, curve_power("T", t))
    stages = []
    current, splits = problem, 0
    while splits <= t:
        stage, _ = run_once(current, seed, prime)
        stages.append({"degree": current.degree, "dim_upper": stage.dim_upper})
        if current.degree < n + 1 or not base_locus_contains(current, "T", seed, prime):
            break
        current = current.residual("T", n + 1)
        splits += 1
    final, _ = run_once(current, seed, prime)
    return LemmaReport(n, t, prime, seed, cert.dim_upper, cert.dim_lower, cert.verdict, splits,
                       current.degree, final.dim_upper, stages)


def lemma_report(n: int, t: int, seed: int = 0) -> ReplayReport:
    """``verify_lemma`` as a replay report, for the command line."""
    lem = verify_lemma(n, t, seed=seed)
    report = ReplayReport("lemma", {"n": n, "t": t, "seed": seed})
    anchor = "lemma.unique-member"
    report.oracle_step(f"degree {t * (n + 1)} system on T has dimension <= 0", lem.verdict, lem.dim_upper <= 0, anchor,
                       prime=lem.prime, dim_upper=lem.dim_upper, dim_lower=lem.dim_lower)
    report.oracle_step(f"T splits off exactly {t} times", lem.verdict, lem.splits == t, "lemma.recursive-split",
                       splits=lem.splits, stages=[f"{s['degree']}:{s['dim_upper']}" for s in lem.stages])
    report.oracle_step("the residual is the trivial degree-0 system", lem.verdict,
                       lem.residual_degree == 0 and lem.residual_dim == 0, anchor,
                       residual_degree=lem.residual_degree, residual_dim=lem.residual_dim)
    return report


# -- Theorem (b), (c) -----------------------------------------------------------------

def check_theorem_bc(d: int, k: int, seed: int = 0, primes: int = 3) -> ReplayReport:
    """Oracle dimensions of the pencil-type and cubic members of the family."""
    if d < 1 or k < 1:
        raise LatticeError("need d >= 1 and k >= 1")
    report = ReplayReport("bc", {"d": d, "k": k, "seed": seed, "primes": primes})

    def dim_step(label: str, cls: DivisorClass, expected: int, anchor: str) -> None:
        cert = certify(InterpolationProblem.from_class(cls), seed, primes)
        report.oracle_step(label, cert.verdict, cert.dim == expected, anchor, cls=format_class(cls, compact=True),
                           expected=expected, dim_upper=cert.dim_upper, dim_lower=cert.dim_lower)

    dim_step(f"dim {k}*xi_{{{d},1}} = {k}", xi_class(d, 1, k), k, "xi.d1.dimension")
    dim_step(f"dim xi_{{{d},0}} = {d}", xi_class(d, 0, 1), d, "xi.d0.dimension")
    if d == 2:
        dim_step(f"dim {k}*xi_{{2,2}} = {k}", xi_class(2, 2, k), k, "xi.22.dimension")
    if d == 3:
        for m in (2, 3):
            dim_step(f"dim {k}*xi_{{3,{m}}} = 0", xi_class(3, m, k), 0, "xi.d3.unique-divisor")
    return report


# -- induction ----------------------------------------------------------------------

def _pencil_kernel_problem(L_P: DivisorClass) -> InterpolationProblem:
    """Members of L_P forced to contain a general line R (deg+1 points on it)."""
    base = InterpolationProblem.from_class(L_P)
    conds = base.conditions + (OnCurve("R", 1),) * (L_P.degree + 1)
    return InterpolationProblem(L_P.degree, conds, {"R": CurveSpec(0)})


def replay_induction(d: int, m: int, k: int, *, oracle: bool = True, seed: int = 0, primes: int = 3) -> ReplayReport:
    """Replay the step from m-2 to m, recursing down to m=2 or the pencil case."""
    if not 3 <= m <= d - 2 or k < 1:
        raise LatticeError(f"need 3 <= m <= d-2 and k >= 1; got d={d}, m={m}, k={k}")
    params: dict[str, Any] = {"d": d, "m": m, "k": k, "oracle": oracle}
    if oracle:
        params.update(seed=seed, primes=primes)
    report = ReplayReport("induction", params)
    report.check("simple points: (m-2)(2d-m-2) + 4d-4 = m(2d-m)", simple_point_count(d, m),
                 (m - 2) * (2 * d - m - 2) + 4 * d - 4, "induction.point-count")
    pair = limit_pair_induction(d, m, k)
    report.check("L_P = k*xi_{d-2,m-2}", xi_class(d - 2, m - 2, k), pair.L_P, "induction.L_P")
    report.check("L_F = k*xi_{d,2}", xi_class(d, 2, k), pair.L_F, "induction.L_F")
    report.check("restrictions to R agree", restriction_degree(pair, P_SIDE), restriction_degree(pair, F_SIDE),
                 "matching.naive")
    report.nested(f"L_F empty by the m=2 case at d={d}", replay_m2(d, k), "induction.L_F-empty")
    report.cite("the kernel system on F is empty too", "induction.kernel-F")
    kernel_P = kernel_system(pair, P_SIDE)
    if m == 3:
        report.cite("L_P = k*xi_{d-2,1} is composed with a pencil of rational curves",
                    "induction.pencil")
        if oracle:
            cert = certify(InterpolationProblem.from_class(pair.L_P), seed, primes)
            report.oracle_step(f"dim L_P = {k} (oracle)", cert.verdict, cert.dim == k, "xi.d1.dimension",
                               dim_upper=cert.dim_upper)
            kc = certify(_pencil_kernel_problem(pair.L_P), seed, primes)
            report.oracle_step("kernel on P (members containing a general line) is empty (oracle)", kc.verdict,
                               kc.verdict == EMPTY, "induction.kernel-P", kernel=kernel_P)
        else:
            report.cite("the kernel on P is empty", "induction.kernel-P", kernel=kernel_P)
    elif m == 4:
        report.nested(f"L_P empty by the m=2 case at d={d - 2}", replay_m2(d - 2, k), "induction.L_P-empty")
    else:
        child = replay_induction(d - 2, m - 2, k, oracle=oracle, seed=seed, primes=primes)
        report.nested(f"L_P empty by induction at (d, m) = ({d - 2}, {m - 2})", child, "induction.L_P-empty")
    report.cite("both kernels are empty, so k*xi_{d,m} is not effective", "induction.conclusion")
    return report


def expected_xi_dimension(d: int, m: int, k: int) -> int:
    """Dimension of k*xi_{d,m} as the theorem states it; -1 means empty."""
    xi_class(d, m, k)  # validates the parameters
    if m == 0:
        return k * d
    if m == 1 or (d, m) == (2, 2):
        return k
    if d == 3:
        return 0
    return -1


def induction_chain(d: int, m: int) -> list[tuple[int, int]]:
    """(d, m) pairs visited by replay_induction before it bottoms out."""
    chain = [(d, m)]
    while m >= 5:
        d, m = d - 2, m - 2
        chain.append((d, m))
    return chain


def replay_from_parameters(mode: str, params: dict[str, Any]) -> ReplayReport:
    """Rebuild a report from the parameters recorded in its header."""
    seed = params.get("seed", 0)
    if mode == "m2":
        return replay_m2(params["d"], params["k"], lemma_oracle=params.get("lemma_oracle", False), seed=seed)
    if mode == "induction":
        return replay_induction(params["d"], params["m"], params["k"], oracle=params.get("oracle", True),
                                seed=seed, primes=params.get("primes", 3))
    if mode == "bc":
        return check_theorem_bc(params["d"], params["k"], seed=seed, primes=params.get("primes", 3))
    if mode == "lemma":
        return lemma_report(params["n"], params["t"], seed=seed)
    raise ValueError(f"unknown replay mode {mode!r}")


__all__ = [
    "EXACT",
    "LemmaReport",
    "ReplayReport",
    "Step",
    "check_theorem_bc",
    "expected_xi_dimension",
    "induction_chain",
    "lemma_report",
    "lemma_problem",
    "replay_from_parameters",
    "replay_induction",
    "replay_m2",
    "verify_lemma",
]
