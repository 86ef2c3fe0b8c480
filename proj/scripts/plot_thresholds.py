#!/usr/bin/env python3
"""Plot agents-required curves from `psmm thresholds` CSV.

Convenience asset, not covered by the test suite:

    ./build/psmm thresholds --k 2,4,8,16,32 --t 2,4,8,16 --out thresholds.csv
    python3 scripts/plot_thresholds.py thresholds.csv thresholds.png
"""

import csv
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main() -> None:
    if len(sys.argv) != 3:
        sys.exit(f"usage: {sys.argv[0]} thresholds.csv out.png")

    by_t = defaultdict(list)
    with open(sys.argv[1], newline="") as f:
        for row in csv.DictReader(f):
            by_t[int(row["t"])].append(
                (int(row["k"]), int(row["n_ours"]), int(row["n_bgw"]))
            )

    fig, ax = plt.subplots(figsize=(6, 4))
    for t, rows in sorted(by_t.items()):
        rows.sort()
        ks = [r[0] for r in rows]
        ax.plot(ks, [r[1] for r in rows], marker="o", label=f"ours, t={t}")
        ax.plot(ks, [r[2] for r in rows], marker="x", linestyle="--", label=f"BGW, t={t}")
    ax.set_xlabel("storage split k")
    ax.set_ylabel("agents required N")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.legend(fontsize=7, ncol=2)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(sys.argv[2], dpi=150)
    print(f"wrote {sys.argv[2]}")


if __name__ == "__main__":
    main()
