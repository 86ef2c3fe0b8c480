#!/usr/bin/env python3
"""Plot agent-computation cost and gain from `psmm complexity` CSV.

Convenience asset, not covered by the test suite:

    ./build/psmm complexity --m 128,256,512,1024,2048 --k 8 --t 4 \
        --tl 7,49 --out complexity.csv
    python3 scripts/plot_complexity.py complexity.csv complexity.png
"""

import csv
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main() -> None:
    if len(sys.argv) != 3:
        sys.exit(f"usage: {sys.argv[0]} complexity.csv out.png")

    by_tl = defaultdict(list)
    with open(sys.argv[1], newline="") as f:
        for row in csv.DictReader(f):
            by_tl[int(row["tl"])].append(
                (int(row["m"]), int(row["cost_psmm"]), int(row["cost_lapsmm"]),
                 float(row["gain"]))
            )

    fig, (ax_cost, ax_gain) = plt.subplots(1, 2, figsize=(9, 4))
    first = True
    for tl, rows in sorted(by_tl.items()):
        rows.sort()
        ms = [r[0] for r in rows]
        if first:
            ax_cost.plot(ms, [r[1] for r in rows], marker="s", color="k", label="dense")
            first = False
        ax_cost.plot(ms, [r[2] for r in rows], marker="o", label=f"tensorized, T_l={tl}")
        ax_gain.plot(ms, [r[3] for r in rows], marker="o", label=f"T_l={tl}")

    ax_cost.set_xlabel("matrix dimension m")
    ax_cost.set_ylabel("total agent field multiplications")
    ax_cost.set_xscale("log", base=2)
    ax_cost.set_yscale("log")
    ax_cost.legend(fontsize=7)
    ax_cost.grid(True, which="both", alpha=0.3)

    ax_gain.set_xlabel("matrix dimension m")
    ax_gain.set_ylabel("gain (dense / tensorized)")
    ax_gain.set_xscale("log", base=2)
    ax_gain.legend(fontsize=7)
    ax_gain.grid(True, which="both", alpha=0.3)

    fig.tight_layout()
    fig.savefig(sys.argv[2], dpi=150)
    print(f"wrote {sys.argv[2]}")


if __name__ == "__main__":
    main()
