"""Certify k*xi_{d,m} over a grid and write one JSON line per cell.

    python scripts/run_emptiness_grid.py --d-max 7 --k 1 2 3 5 --out results/emptiness.jsonl
"""

from __future__ import annotations

import argparse
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from nonef.lattice import format_class, xi_class
from nonef.oracle import InterpolationProblem, certify
from nonef.replay import expected_xi_dimension


@dataclass
class GridConfig:
    d_min: int = 4
    d_max: int = 7
    ks: list[int] = field(default_factory=lambda: [1, 2, 3, 5])
    seed: int = 2024
    primes: int = 3
    workers: int = 1


def cells(cfg: GridConfig):
    for d in range(cfg.d_min, cfg.d_max + 1):
        for m in range(0, d + 1):
            for k in cfg.ks:
                yield d, m, k


def run_cell(cfg: GridConfig, d: int, m: int, k: int) -> dict:
    cls = xi_class(d, m, k)
    start = time.perf_counter()
    cert = certify(InterpolationProblem.from_class(cls), cfg.seed, cfg.primes)
    expected = expected_xi_dimension(d, m, k)
    got = -1 if cert.verdict == "EmptyCertified" else cert.dim
    return {
        "d": d, "m": m, "k": k,
        "class": format_class(cls, compact=True),
        "verdict": cert.verdict,
        "dim_upper": cert.dim_upper,
        "dim_lower": cert.dim_lower,
        "expected_dim": expected,
        "matches": got == expected,
        "seconds": round(time.perf_counter() - start, 3),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--d-min", type=int, default=4)
    ap.add_argument("--d-max", type=int, default=7)
    ap.add_argument("--k", type=int, nargs="+", default=[1, 2, 3, 5])
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--primes", type=int, default=3)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args()
    cfg = GridConfig(args.d_min, args.d_max, args.k, args.seed, args.primes, args.workers)

    with ThreadPoolExecutor(cfg.workers) as pool:
        rows = list(pool.map(lambda c: run_cell(cfg, *c), cells(cfg)))
    lines = [json.dumps({"config": asdict(cfg)})] + [json.dumps(r) for r in rows]
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text("\n".join(lines) + "\n")
    for r in rows:
        flag = "ok " if r["matches"] else "MISMATCH"
        print(f"{flag} d={r['d']} m={r['m']} k={r['k']:<2} {r['verdict']:<15} "
              f"[{r['dim_lower']}, {r['dim_upper']}] expected {r['expected_dim']:<3} {r['seconds']}s")
    print(f"{sum(r['matches'] for r in rows)}/{len(rows)} cells match")


if __name__ == "__main__":
    main()
