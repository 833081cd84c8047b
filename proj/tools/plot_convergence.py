#!/usr/bin/env python3
"""Plot strong-error convergence from a tamedheat report CSV.

Reads the per-level CSV written by `tamedheat convergence` and draws the
measured errors on a log-log scale, the fitted rate line, and (when known)
the theoretical slope for reference.

Usage: plot_convergence.py report.csv [more.csv ...] [-o out.png]
"""

import argparse
import math


def parse_report(path):
    meta = {}
    rows = []
    header = None
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                meta[key.strip()] = value.strip()
                continue
            cells = line.split(",")
            if header is None:
                header = cells
                continue
            rows.append(dict(zip(header, cells)))
    return meta, rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("reports", nargs="+", help="report CSV files")
    parser.add_argument("-o", "--out", default="convergence.png")
    args = parser.parse_args()

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for path in args.reports:
        meta, rows = parse_report(path)
        ns = [int(r["n"]) for r in rows]
        errors = [float(r["error"]) for r in rows]
        bars = [float(r["std_error"]) for r in rows]
        label = meta.get("experiment", path)
        if "fitted_rate" in meta:
            label += f" (rate {float(meta['fitted_rate']):.3f})"
        ax.errorbar(ns, errors, yerr=bars, marker="o", capsize=3, label=label)

        theo = meta.get("theoretical_rate", "")
        if theo and theo != "unknown-positive":
            rate = float(theo)
            anchor = errors[0] * 1.1
            ref = [anchor * math.exp(-rate * math.log(n / ns[0])) for n in ns]
            ax.plot(ns, ref, "--", color="gray", linewidth=1)

    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("sup L^m error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
