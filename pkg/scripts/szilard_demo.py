"""Work extracted by an engine whose weights follow a betting strategy.

Reports the final log-work (nats of joules over the initial stake) for the
LZ and type-counting strategies against a fair source and a constant one.

    python3 scripts/szilard_demo.py --lengths 1 1 --n 20000
"""

import argparse
import math

from lzgame import ConstantForecaster, LDStrategy, LZStrategy, SzilardConfig, run, szilard_work
from lzgame.realities import IIDSampler, Periodic


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lengths", type=float, nargs="+", default=[1.0, 1.0])
    ap.add_argument("--n", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--scale", type=float, default=1.0, help="joules per unit of capital")
    args = ap.parse_args()

    cfg = SzilardConfig(tuple(args.lengths), unit_capital_to_energy=args.scale)
    A = len(cfg.lengths)
    p = cfg.probabilities
    print(f"chambers {cfg.lengths}  p={tuple(round(x, 4) for x in p)}")
    for label, make_reality in [
        ("fair", lambda: IIDSampler(p, args.seed)),
        ("constant", lambda: Periodic([0], A)),
    ]:
        for name, skeptic in [("lz", LZStrategy(A)), ("ld", LDStrategy(A))]:
            traj = run(ConstantForecaster(p), skeptic, make_reality(), args.n)
            ledger = szilard_work(traj, cfg)
            log_w = ledger.log_work[-1] - math.log(args.scale)
            print(f"{label:9s} {name:3s} ln(W_n/W_0) = {log_w:12.3f}   per round {log_w / args.n:+.5f}")


if __name__ == "__main__":
    main()
