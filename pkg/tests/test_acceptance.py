"""End-to-end acceptance checks, one test per criterion.

Run alone with ``pytest tests/test_acceptance.py -v``; a summary line per
criterion is printed at the end of the session.
"""

import json
import time

import flint
import pytest

from nonef.cli import main as cli_main
from nonef.degeneration import (
    B,
    NotDivisible,
    RuledClass,
    q_stack,
    refined_matching,
    twisted_restriction,
)
from nonef.lattice import DivisorClass, parse_class, simple_point_count, xi_class
from nonef.oracle import EMPTY, EXACT, INCONCLUSIVE, InterpolationProblem, certify
from nonef.replay import replay_induction, replay_m2, verify_lemma

SEED = 0x5EED_2024
CELL_LIMIT_S = 30.0


def certified(cls, witness=None):
    start = time.perf_counter()
    cert = certify(InterpolationProblem.from_class(cls), SEED, primes=3, witness=witness)
    return cert, time.perf_counter() - start


def test_criterion_1_emptiness_grid(criterion):
    cells = [(d, m, k) for d in range(4, 8) for m in range(2, d - 1) for k in (1, 2, 3, 5)]
    cells += [(4, 2, k) for k in range(1, 11) if k not in (1, 2, 3, 5)]
    bad, slowest = [], (0.0, None)
    for d, m, k in cells:
        cert, elapsed = certified(xi_class(d, m, k))
        slowest = max(slowest, (elapsed, (d, m, k)))
        if cert.verdict != EMPTY or not cert.agree or len(cert.runs) != 3 or elapsed >= CELL_LIMIT_S:
            bad.append((d, m, k, cert.verdict, round(elapsed, 2)))
    instance, _ = certified(parse_class("4;2,1^12"))
    ok = not bad and instance.verdict == EMPTY and [r.rank for r in instance.runs] == [15] * 3
    criterion(1, ok, f"{len(cells)} cells EmptyCertified at 3 primes; slowest {slowest[1]} {slowest[0]:.2f}s; bad={bad}")
    assert ok


def test_criterion_2_dimension_suite(criterion):
    cases = [(xi_class(d, 1, k), k) for d in range(1, 6) for k in range(1, 5)]
    cases += [(xi_class(d, 0), d) for d in range(1, 7)]
    cases += [(xi_class(3, m, k), 0) for m in (2, 3) for k in range(1, 5)]
    bad = []
    for cls, expected in cases:
        cert, _ = certified(cls)
        if cert.verdict != EXACT or cert.dim != expected:
            bad.append((str(cls), cert.verdict, cert.dim_lower, cert.dim_upper, expected))
    criterion(2, not bad, f"{len(cases)} systems DimExact at the stated dimension; bad={bad}")
    assert not bad


def test_criterion_3_replay_grid(criterion):
    start = time.perf_counter()
    bad = []
    for d in range(4, 10):
        n = d - 1
        for k in range(1, 13):
            report = replay_m2(d, k)
            text = [s.description for s in report.steps]
            needed = [f"t={k // n + 1}: t > k/n"]
            for t in range(k // n + 1):
                needed += [f"t={t}: n quadratic maps bring L'_F to L_(k-tn)",
                           f"t={t}: n quadratic maps bring L'_P to L_(t(n+1))(t^2n)"]
                if t > 0:
                    needed.append(f"t={t}: C . residual = -t(n-1)")
            missing = [w for w in needed if not any(s.startswith(w) for s in text)]
            if not report.verified or missing:
                bad.append((d, k, report.conclusion, missing))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 5.0
    criterion(3, ok, f"72 reports AllStepsVerified with all displayed identities in {elapsed:.2f}s; bad={bad}")
    assert ok


def test_criterion_4_refined_matching_calculus(criterion):
    bad = []
    for m in range(2, 13):
        for h in range(1, 7):
            if twisted_restriction(m, h, 0) != h * B(0):
                bad.append(("twist", m, h, 0))
            for i in range(1, m):
                if not twisted_restriction(m, h, i).is_zero():
                    bad.append(("twist", m, h, i))
        for i, (bundle, mult) in enumerate(q_stack(m)):
            if i == 0:
                want = RuledClass(0, -1, -1)
            elif i == m - 1:
                want = RuledClass(i, -2, -m)
            else:
                want = RuledClass(i, -2, -(i + 1))
            if bundle != want or mult != m - i:
                bad.append(("stack", m, i))
    rejected = 0
    for s in range(1, 60):
        for m in range(1, 13):
            if s % m:
                try:
                    refined_matching(s, m)
                except NotDivisible:
                    rejected += 1
                else:
                    bad.append(("divisible", s, m))
    criterion(4, not bad, f"restrictions and normal bundles exact for m<=12, h<=6; {rejected} non-divisible throws rejected; bad={bad}")
    assert not bad


def test_criterion_5_lemma(criterion):
    bad, seen = [], []
    for n, t in [(2, 1), (3, 1), (3, 2)]:
        rep = verify_lemma(n, t, seed=SEED)
        seen.append(f"(n={n},t={t}):{rep.status},splits={rep.splits}")
        if not (rep.status == "Verified" and rep.dim_upper <= 0 and rep.splits == t
                and rep.residual_degree == 0 and rep.residual_dim == 0):
            bad.append((n, t))
    criterion(5, not bad, " ".join(seen))
    assert not bad


def test_criterion_6_induction(criterion):
    bad, count = [], 0
    for d in range(4, 10):
        for m in range(3, d - 1):
            if (m - 2) * (2 * d - m - 2) + 4 * d - 4 != simple_point_count(d, m):
                bad.append(("count", d, m))
            for k in range(1, 4):
                count += 1
                report = replay_induction(d, m, k, seed=SEED)
                if not report.verified:
                    bad.append((d, m, k, report.conclusion))
    criterion(6, not bad, f"{count} induction replays AllStepsVerified with point counts conserved; bad={bad}")
    assert not bad


def test_criterion_7_superabundance(criterion):
    cls = parse_class("4;2^5")
    plain, _ = certified(cls)
    witnessed, _ = certified(cls, witness="doubled-conic")
    ok = (
        plain.verdict == INCONCLUSIVE
        and plain.dim_upper == 0
        and witnessed.verdict == EXACT
        and witnessed.dim == 0
        and InterpolationProblem.from_class(cls).virtual_dim == -1
    )
    criterion(7, ok, f"(4;2^5): without witness {plain.verdict} [{plain.dim_lower},{plain.dim_upper}], "
                     f"with doubled conic {witnessed.verdict} dim {witnessed.dim}")
    assert ok


def test_criterion_8_determinism(criterion, tmp_path, capsys):
    targets = [["xi", "--d", "4", "--m", "2", "--k", "3"], ["xi", "--d", "6", "--m", "3", "--k", "2"],
               ["dim", "--class", "4;2^5", "--witness", "doubled-conic"]]
    bad = []
    for i, argv in enumerate(targets):
        path = tmp_path / f"cert{i}.json"
        code = cli_main(argv + ["--seed", str(SEED + i), "--threads", "1", "--out", str(path), "--quiet"])
        if code != 0:
            bad.append(("emit", argv, code))
            continue
        recorded = json.loads(path.read_text())
        for threads in ("1", "2", "4"):
            if cli_main(["verify", str(path), "--threads", threads, "--quiet"]) != 0:
                bad.append(("verify", argv, threads))
        flint.ctx.threads = 4
        again = certify(InterpolationProblem.from_dict(recorded["problem"]), recorded["seed"], witness=recorded["witness"])
        flint.ctx.threads = 1
        ranks = [(r["prime"], r["rank"]) for r in recorded["runs"]]
        if ranks != [(r.prime, r.rank) for r in again.runs]:
            bad.append(("rank", argv))
    capsys.readouterr()
    criterion(8, not bad, f"{len(targets)} certificates re-verified at 1, 2 and 4 threads with identical ranks; bad={bad}")
    assert not bad


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
