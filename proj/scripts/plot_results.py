#!/usr/bin/env python3
"""Render the CSV artifacts produced by the wlansim CLI.

Usage:
  plot_results.py learn trace.csv [out.png]     per-BSS throughput vs iteration
  plot_results.py sweep sweep.csv [out.png]     exec time and CoV vs duration
  plot_results.py oracle oracle.csv [out.png]   ranked joint configurations

Requires matplotlib. The simulator itself never renders anything.
"""

import csv
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def plot_learn(path, out):
    rows = read_rows(path)
    series = defaultdict(lambda: ([], []))
    for r in rows:
        xs, ys = series[r["bss_id"]]
        xs.append(int(r["iter"]))
        ys.append(float(r["thr_mbps"]))
    fig, ax = plt.subplots(figsize=(8, 4))
    for bss_id, (xs, ys) in sorted(series.items()):
        ax.plot(xs, ys, label=bss_id, linewidth=0.8)
    ax.set_xlabel("learning iteration")
    ax.set_ylabel("throughput [Mbps]")
    ax.legend()
    ax.set_title("Throughput evolution under bandit TPC")
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def plot_sweep(path, out):
    rows = read_rows(path)
    xs = [float(r["duration_s"]) for r in rows]
    execs = [float(r["mean_exec_ms"]) for r in rows]
    covs = [float(r["cov"]) for r in rows]
    fig, ax1 = plt.subplots(figsize=(7, 4))
    ax1.plot(xs, execs, "o-", color="tab:blue", label="mean exec [ms]")
    ax1.set_xlabel("simulated duration [s]")
    ax1.set_ylabel("mean exec [ms]", color="tab:blue")
    ax1.set_xscale("log")
    ax2 = ax1.twinx()
    ax2.plot(xs, covs, "s--", color="tab:red", label="throughput CoV")
    ax2.set_ylabel("throughput CoV", color="tab:red")
    fig.suptitle("Execution time vs output variability")
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def plot_oracle(path, out):
    rows = read_rows(path)
    labels = [r["powers"] for r in rows]
    means = [float(r["mean_aggregate_mbps"]) for r in rows]
    fig, ax = plt.subplots(figsize=(10, 4))
    ax.bar(range(len(means)), means)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=90, fontsize=6)
    ax.set_xlabel("joint tx power [dBm]")
    ax.set_ylabel("mean aggregate [Mbps]")
    ax.set_title("Exhaustive joint-configuration ranking")
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def main():
    if len(sys.argv) < 3:
        sys.exit(__doc__)
    kind, path = sys.argv[1], sys.argv[2]
    out = sys.argv[3] if len(sys.argv) > 3 else path.rsplit(".", 1)[0] + ".png"
    {"learn": plot_learn, "sweep": plot_sweep, "oracle": plot_oracle}[kind](path, out)
    print(out)


if __name__ == "__main__":
    main()
