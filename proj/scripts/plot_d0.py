#!/usr/bin/env python3
"""Plot the certified d0 enclosures and the Gershgorin line mu from a threshold bundle."""

import argparse
import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("bundle", type=Path, help="output directory of `turingcert threshold`")
    ap.add_argument("-o", "--output", type=Path, default=Path("d0_bounds.png"))
    args = ap.parse_args()

    with open(args.bundle / "d0_bounds.csv", newline="") as f:
        rows = list(csv.DictReader(f))
    threshold = json.loads((args.bundle / "threshold.json").read_text())

    fig, ax = plt.subplots(figsize=(7, 4))
    for r in rows:
        lo, hi = float(r["delta_lo"]), float(r["delta_hi"])
        ax.fill_between([lo, hi], float(r["d0_lo"]), float(r["d0_hi"]), color="tab:blue", alpha=0.35, lw=0)
    ax.axhline(0.0, color="black", lw=0.8)
    s_lo, s_hi = threshold["delta_star"]
    ax.axvspan(s_lo, s_hi, color="tab:red", alpha=0.12, label=f"delta* in [{s_lo:.4f}, {s_hi:.4f}]")
    ax.set_xlabel("delta")
    ax.set_ylabel("d0")
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
