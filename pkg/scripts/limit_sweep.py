"""Deviation of the q = 1 - 10^-j tables from the q = 1 table, with the observed rate."""

import argparse
import math
from dataclasses import dataclass

import numpy as np

from trilinear.sweeps import PARITY_COMPATIBLE_EPS, classical_limit_sweep, draw_triple, is_monotone_decreasing


@dataclass
class LimitConfig:
    draws: int = 5
    W: int = 12
    js: tuple = (2, 3, 4, 5, 6)
    dps: int | None = None
    seed: int = 0


def run(cfg: LimitConfig):
    rng = np.random.default_rng(cfg.seed)
    for i in range(cfg.draws):
        tp = draw_triple(rng, PARITY_COMPATIBLE_EPS[i % len(PARITY_COMPATIBLE_EPS)], real=True)
        rows = classical_limit_sweep(tp, cfg.W, cfg.js, cfg.dps)
        s = ", ".join(f"{x.real:.3f}" for x in tp.s)
        print(f"draw {i}: s = ({s}), eps = {tp.eps}, monotone = {is_monotone_decreasing(rows)}")
        prev = None
        for r in rows:
            # slope of log(deviation) against log|q-1|; ~1 means O(|q-1|)
            slope = "" if prev is None else f"  slope {math.log10(prev / r.deviation):.2f}"
            print(f"  j={r.j}  deviation {r.deviation:.3e}{slope}")
            prev = r.deviation


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--draws", type=int, default=5)
    ap.add_argument("--W", type=int, default=12)
    ap.add_argument("--dps", type=int, default=None, help="mpmath precision for the quantum tables")
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    run(LimitConfig(draws=a.draws, W=a.W, dps=a.dps, seed=a.seed))
