#!/usr/bin/env python3
"""Plot the CSV artifacts written by riccati_lab.

Usage: plot_results.py OUTPUT_DIR [--save DIR]

Every artifact starts with `#` header lines; they are skipped. Only files
present in OUTPUT_DIR are plotted.
"""

import argparse
import csv
import math
from pathlib import Path

import matplotlib.pyplot as plt


def read_rows(path):
    with open(path, newline="") as f:
        lines = [line for line in f if not line.startswith("#")]
    return list(csv.DictReader(lines))


def column(rows, name):
    return [float(r[name]) for r in rows]


def plot_lyapunov(rows, ax):
    t = column(rows, "t")
    for key in rows[0]:
        if key.startswith("partial_exponent_"):
            ax.plot(t, column(rows, key), label=key.rsplit("_", 1)[1])
    ax.set_xlabel("t")
    ax.set_ylabel("partial exponent")
    ax.legend(title="index")


def plot_cusp(rows, ax):
    eps = column(rows, "epsilon")
    ax.plot([math.log(1 / e) for e in eps], column(rows, "I_epsilon"), "o-")
    ax.set_xlabel("log(1/epsilon)")
    ax.set_ylabel("I(epsilon)")


def plot_canonical(rows, ax):
    ax.semilogy(column(rows, "t"), [max(e, 1e-18) for e in column(rows, "max_error")], "o-")
    ax.set_xlabel("t")
    ax.set_ylabel("max relative error")


def plot_srb_orbits(rows, ax, title):
    ax.errorbar(column(rows, "orbit_id"), column(rows, "average"), yerr=column(rows, "stderr"), fmt=".")
    ax.set_xlabel("orbit")
    ax.set_ylabel(title)


def fiber_marginal(rows):
    out = {}
    for r in rows:
        key = (int(r["i_polar"]), int(r["i_azimuth"]))
        out[key] = out.get(key, 0.0) + float(r["weight"])
    return out


def plot_histograms(paths, ax):
    for label, path in paths:
        marginal = fiber_marginal(read_rows(path))
        keys = sorted(marginal)
        ax.plot(range(len(keys)), [marginal[k] for k in keys], drawstyle="steps-mid", label=label)
    ax.set_xlabel("fiber cell")
    ax.set_ylabel("mass")
    ax.legend()


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("output_dir", type=Path)
    parser.add_argument("--save", type=Path, help="write PNGs here instead of showing")
    args = parser.parse_args()
    d = args.output_dir

    figures = []
    single = {
        "lyapunov.csv": plot_lyapunov,
        "cusp_integrability.csv": plot_cusp,
        "canonical_check.csv": plot_canonical,
    }
    for name, fn in single.items():
        if (d / name).exists():
            fig, ax = plt.subplots()
            fn(read_rows(d / name), ax)
            ax.set_title(name)
            figures.append((Path(name).stem, fig))

    for path in sorted(d.glob("srb_*.csv")):
        if path.name.startswith("srb_hist_"):
            continue
        fig, ax = plt.subplots()
        plot_srb_orbits(read_rows(path), ax, path.stem[len("srb_"):])
        figures.append((path.stem, fig))

    hists = [(p.stem[len("srb_hist_"):], p) for p in sorted(d.glob("srb_hist_*.csv"))]
    if hists:
        fig, ax = plt.subplots()
        plot_histograms(hists, ax)
        ax.set_title("fiber marginals")
        figures.append(("srb_fiber_marginals", fig))

    if not figures:
        raise SystemExit(f"no known artifacts in {d}")
    if args.save:
        args.save.mkdir(parents=True, exist_ok=True)
        for stem, fig in figures:
            fig.savefig(args.save / f"{stem}.png", dpi=120)
    else:
        plt.show()


if __name__ == "__main__":
    main()
