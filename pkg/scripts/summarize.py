"""Print the headline comparisons from result CSVs written by run_all.py.

    python scripts/summarize.py results/
"""

import sys
from pathlib import Path

import pandas as pd


def load(path):
    return pd.read_csv(path, comment="#")


def single_user(df):
    piv = df.pivot_table(index=["pattern", "transmit_snr_db"], columns="architecture", values="mean")
    piv["raa_minus_hbf_dB"] = piv["raa"] - piv["hbf"]
    print("single user: max SNR (dB), mean over trials")
    print(piv.round(3).to_string(), "\n")


def multi_user(df):
    rates = df[df.metric.str.startswith("sum_rate")]
    piv = rates.pivot_table(index=["architecture", "pattern", "transmit_snr_db"],
                            columns="metric", values="mean")
    if {"sum_rate_greedy", "sum_rate_exhaustive"} <= set(piv.columns):
        piv["greedy_over_exhaustive"] = piv["sum_rate_greedy"] / piv["sum_rate_exhaustive"]
    print("multi user: sum rate (bit/s/Hz)")
    print(piv.round(4).to_string(), "\n")


def main(folder):
    folder = Path(folder)
    for name, fn in (("single_user.csv", single_user), ("multi_user.csv", multi_user)):
        if (folder / name).exists():
            fn(load(folder / name))
    for name in ("cost.csv", "beam_pattern.csv"):
        if (folder / name).exists():
            print(name)
            print(load(folder / name).to_string(index=False), "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "results")
