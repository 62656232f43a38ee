"""Rewrite the golden replay reports under tests/golden/.

Run after an intentional change to the report format or step list; review the
diff before committing.
"""

from pathlib import Path

from nonef.replay import replay_m2

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"
CASES = [(4, 1), (4, 3), (4, 4), (5, 4), (6, 5), (7, 12), (9, 8)]


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for d, k in CASES:
        path = GOLDEN / f"m2_d{d}_k{k}.jsonl"
        path.write_text(replay_m2(d, k).to_text(), encoding="utf-8")
        print(path)


if __name__ == "__main__":
    main()
