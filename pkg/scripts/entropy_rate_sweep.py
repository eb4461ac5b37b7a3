"""Compression rate of the incremental-parsing code against the entropy rate.

For two-state kernels with M(1|0) = M(0|1) = t, the code length per symbol
should approach H(M) from above as n grows.

    python3 scripts/entropy_rate_sweep.py --sizes 10000 100000 1000000
"""

import argparse

from lzgame import MarkovKernel, compression_rate, entropy_rate
from lzgame.realities import MarkovSampler


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--flips", type=float, nargs="+", default=[0.05, 0.2, 0.5])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10_000, 100_000])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print("flip      H(M)  " + "  ".join(f"rate@{n:<8d}" for n in args.sizes))
    for t in args.flips:
        M = MarkovKernel(1, 2, [[1 - t, t], [t, 1 - t]])
        word = MarkovSampler(M, args.seed).generate(max(args.sizes))
        rates = [compression_rate(word[:n]) for n in args.sizes]
        print(f"{t:<6} {entropy_rate(M):7.4f}  " + "  ".join(f"{r:13.4f}" for r in rates))


if __name__ == "__main__":
    main()
