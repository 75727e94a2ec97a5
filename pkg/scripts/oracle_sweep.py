"""Nullity, singular-value gap and oracle agreement over random draws and windows."""

import argparse
from dataclasses import dataclass

import numpy as np

from trilinear.kernel import build_kernel
from trilinear.oracle import assemble, compare_with_table, nullspace
from trilinear.qspecial import DeformationParameter
from trilinear.sweeps import PARITY_COMPATIBLE_EPS, draw_q, draw_triple


@dataclass
class SweepConfig:
    draws: int = 20
    windows: tuple = (8, 12, 16)
    threshold: float = 1e-8
    quantum: bool = False
    seed: int = 0


def run(cfg: SweepConfig):
    rng = np.random.default_rng(cfg.seed)
    print(f"{'draw':>4} {'eps':>9} {'W':>3} {'nullity':>7} {'gap':>9} {'deviation':>9}")
    for i in range(cfg.draws):
        eps = PARITY_COMPATIBLE_EPS[i % len(PARITY_COMPATIBLE_EPS)]
        dp = DeformationParameter.quantum(draw_q(rng)) if cfg.quantum else DeformationParameter.classical_limit()
        tp = draw_triple(rng, eps)
        for W in cfg.windows:
            res = nullspace(assemble(dp, tp, W), cfg.threshold)
            dev = compare_with_table(res, build_kernel(dp, tp, W))
            print(f"{i:>4} {str(eps):>9} {W:>3} {res.nullity:>7} {res.gap:>9.2e} {dev:>9.2e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--draws", type=int, default=20)
    ap.add_argument("--quantum", action="store_true")
    ap.add_argument("--threshold", type=float, default=1e-8)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    run(SweepConfig(draws=a.draws, threshold=a.threshold, quantum=a.quantum, seed=a.seed))
