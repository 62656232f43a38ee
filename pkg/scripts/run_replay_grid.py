"""Replay the m=2 argument and the induction over a grid; print a conclusion table.

    python scripts/run_replay_grid.py --d-max 9 --k-max 12 --out-dir results/replays
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from nonef.replay import replay_induction, replay_m2


@dataclass
class ReplayGridConfig:
    d_min: int = 4
    d_max: int = 9
    k_max: int = 12
    induction_k_max: int = 3
    seed: int = 0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--d-min", type=int, default=4)
    ap.add_argument("--d-max", type=int, default=9)
    ap.add_argument("--k-max", type=int, default=12)
    ap.add_argument("--induction-k-max", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-dir", type=Path, default=None)
    args = ap.parse_args()
    cfg = ReplayGridConfig(args.d_min, args.d_max, args.k_max, args.induction_k_max, args.seed)
    if args.out_dir:
        args.out_dir.mkdir(parents=True, exist_ok=True)

    failures = 0
    start = time.perf_counter()
    for d in range(cfg.d_min, cfg.d_max + 1):
        row = []
        for k in range(1, cfg.k_max + 1):
            report = replay_m2(d, k)
            failures += not report.verified
            row.append("." if report.verified else "X")
            if args.out_dir:
                (args.out_dir / f"m2_d{d}_k{k}.jsonl").write_text(report.to_text())
        print(f"m2        d={d}: {''.join(row)}")
    for d in range(max(cfg.d_min, 5), cfg.d_max + 1):
        row = []
        for m in range(3, d - 1):
            for k in range(1, cfg.induction_k_max + 1):
                report = replay_induction(d, m, k, seed=cfg.seed)
                failures += not report.verified
                row.append("." if report.verified else "X")
                if args.out_dir:
                    (args.out_dir / f"induction_d{d}_m{m}_k{k}.jsonl").write_text(report.to_text())
        print(f"induction d={d}: {''.join(row)}")
    print(f"{failures} failures in {time.perf_counter() - start:.2f}s")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
