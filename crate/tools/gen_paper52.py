"""Regenerates fixtures/paper52.csv.

The file is synthetic: 52 respondents (36 industry, 16 academic) answering
every (metric, factor) question. For each pair in the quality hierarchy the
number of "yes" answers is round(published_pct * 52 / 100); other pairs get a
lower, arbitrary count. Non-yes answers are split between "no" and "partial".
Output is deterministic.
"""

import csv
import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
METRICS = ["NOC", "NOH", "NOA", "MDIT", "NAR", "NAH", "CAM",
           "NOP", "DAR", "FA", "DCC", "NOM", "CIS", "EOD"]
FACTORS = ["functionality", "effectiveness", "understandability",
           "reusability", "maintainability"]
RESPONDENTS = 52
INDUSTRY = 36


def published():
    path = ROOT / "crates/core/assets/published_agreement.csv"
    with path.open() as f:
        return {(r["metric"], r["factor"]): float(r["pct"]) for r in csv.DictReader(f)}


def main(out):
    rng = random.Random(20110314)
    pct = published()
    ids = [f"R{i:02d}" for i in range(1, RESPONDENTS + 1)]
    groups = {r: ("industry" if i < INDUSTRY else "academic") for i, r in enumerate(ids)}
    answers = {}
    for factor in FACTORS:
        for metric in METRICS:
            if (metric, factor) in pct:
                yes = round(pct[(metric, factor)] * RESPONDENTS / 100)
            else:
                yes = rng.randint(10, 24)
            order = ids[:]
            rng.shuffle(order)
            for k, r in enumerate(order):
                if k < yes:
                    answers[(r, metric, factor)] = "yes"
                else:
                    answers[(r, metric, factor)] = rng.choice(["no", "partial"])
    with open(out, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["respondent", "group", "metric", "factor", "answer"])
        for r in ids:
            for factor in FACTORS:
                for metric in METRICS:
                    w.writerow([r, groups[r], metric, factor, answers[(r, metric, factor)]])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else ROOT / "fixtures/paper52.csv")
