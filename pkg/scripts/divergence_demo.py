"""Capital growth rate of the LZ skeptic: faithful versus deviating Reality.

Prints ``ln K_n / n`` at log-spaced checkpoints for a Markov forecaster
facing (a) its own law, (b) a one-row perturbation of it, and (c) the
constant all-zeros sequence.

    python3 scripts/divergence_demo.py --n 100000 --eps 0.15
"""

import argparse
import csv
import sys

import numpy as np

from lzgame import LZStrategy, MarkovForecaster, MarkovKernel, run
from lzgame.realities import BiasedFlip, MarkovSampler, Periodic


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--eps", type=float, default=0.15)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    M = MarkovKernel(1, 2, [[0.65, 0.35], [0.2, 0.8]])
    realities = {
        "faithful": MarkovSampler(M, args.seed),
        f"biased(eps={args.eps})": BiasedFlip(M, args.eps, [0], args.seed),
        "all-zeros": Periodic([0], 2),
    }
    checkpoints = np.unique(np.logspace(2, np.log10(args.n), 9).astype(int))
    out = csv.writer(sys.stdout)
    out.writerow(["reality", "n", "rate"])
    for label, reality in realities.items():
        traj = run(MarkovForecaster(M), LZStrategy(2), reality, args.n)
        for n in checkpoints:
            out.writerow([label, n, f"{traj.log_capital[n - 1] / n:.6f}"])


if __name__ == "__main__":
    main()
