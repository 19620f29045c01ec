"""Render PNGs from the CSVs written by `arena run` and `arena bounds`.

usage: plot_results.py experiment|bounds DIR
"""

import csv
import math
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def plot_summary(path):
    rows = read_rows(path)
    curves = defaultdict(list)
    flat = {}
    for r in rows:
        poa = float(r["mean_poa"]) if r["mean_poa"] not in ("", "nan") else math.nan
        if r["mechanism"] in ("spa", "fpa"):
            flat[r["mechanism"]] = poa
        else:
            curves[r["mechanism"]].append((float(r["alpha"]), poa))
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, pts in sorted(curves.items()):
        pts.sort()
        ax.plot([a for a, _ in pts], [p for _, p in pts], marker="o", ms=3, label=name)
    for name, poa in sorted(flat.items()):
        ax.axhline(poa, ls="--", lw=1, color="gray" if name == "spa" else "black", label=name)
    ax.set_xlabel("alpha")
    ax.set_ylabel("mean PoA (converged runs)")
    ax.set_title(path.stem.replace("summary_", "setup "))
    ax.legend()
    out = path.with_suffix(".png")
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def plot_curve(path):
    rows = read_rows(path)
    by_alpha = defaultdict(list)
    for r in rows:
        by_alpha[(r["alpha"], r["gamma"])].append(r)
    fig, ax = plt.subplots(figsize=(6, 4))
    if len(by_alpha) == 1:
        (alpha, gamma), pts = next(iter(by_alpha.items()))
        beta = [float(r["beta"]) for r in pts]
        ax.plot(beta, [float(r["g"]) for r in pts], label="g(beta)")
        ax.plot(beta, [float(r["term_eta_alpha"]) for r in pts], ls="--", label="eta term")
        ax.plot(beta, [float(r["term_gamma"]) for r in pts], ls=":", label="gamma")
        ax.axhline(float(pts[0]["f"]), color="black", lw=0.8, label="f")
        ax.set_xscale("log")
        ax.set_xlabel("beta")
        ax.set_title(f"{path.stem}: alpha={alpha}, gamma={gamma}")
    else:
        # Overlay on a common axis: ln beta / ln alpha runs over [-1, 1].
        for (alpha, gamma), pts in by_alpha.items():
            la = math.log(float(alpha))
            x = [math.log(float(r["beta"])) / la for r in pts]
            ax.plot(x, [float(r["g"]) for r in pts], lw=0.8, label=f"alpha={float(alpha):g}")
        ax.set_xlabel("ln beta / ln alpha")
        ax.set_title(path.stem)
    ax.set_ylabel("g")
    if len(by_alpha) <= 8:
        ax.legend()
    out = path.with_suffix(".png")
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def plot_sweep(path):
    rows = read_rows(path)
    if len(rows) < 2:
        return None
    alpha = [float(r["alpha"]) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(alpha, [float(r["poa"]) for r in rows], marker="o", ms=3)
    ax.set_xlabel("alpha")
    ax.set_ylabel("PoA bound 1/f")
    ax.set_title(path.stem)
    out = path.with_suffix(".png")
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def main(argv):
    if len(argv) != 3 or argv[1] not in ("experiment", "bounds"):
        print(__doc__.strip(), file=sys.stderr)
        return 2
    root = Path(argv[2])
    written = []
    if argv[1] == "experiment":
        for p in sorted(root.glob("summary_*.csv")):
            written.append(plot_summary(p))
    else:
        for p in sorted(root.glob("bound_curve_*.csv")):
            written.append(plot_curve(p))
        for p in sorted(root.glob("bound_sweep_*.csv")):
            out = plot_sweep(p)
            if out:
                written.append(out)
    for p in written:
        print(p)
    return 0 if written else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv))
