"""Compare the quantum solution space of the E/F invariance equations with and
without the symmetry a(n,m) = a(-n,-m).

For each draw the script prints the nullity and the smallest singular values of
both systems, plus how far the symmetry is from holding on the E/F nullspace:
the smallest singular value of the symmetry rows restricted to that nullspace.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from trilinear.oracle import assemble, nullspace
from trilinear.qspecial import DeformationParameter
from trilinear.sweeps import draw_q, draw_triple


@dataclass
class SymmetryConfig:
    draws: int = 10
    W: int = 12
    threshold: float = 1e-8
    seed: int = 0


def symmetry_defect(dp, tp, W, threshold):
    ef = nullspace(assemble(dp, tp, W, equations=("E", "F")), threshold)
    sym = assemble(dp, tp, W, equations=("symmetry",))
    if ef.nullity == 0:
        return ef, float("nan")
    basis = np.array([[v[p] for p in ef.unknowns] for v in ef.basis]).T
    restricted = sym.matrix @ basis
    return ef, np.linalg.svd(restricted, compute_uv=False)[-1]


def run(cfg: SymmetryConfig):
    rng = np.random.default_rng(cfg.seed)
    print(f"{'|q|':>5} {'arg q':>6} {'EF null':>7} {'EF gap':>9} {'+sym null':>9} {'+sym s_min':>10} {'defect':>8}")
    for _ in range(cfg.draws):
        dp = DeformationParameter.quantum(draw_q(rng))
        tp = draw_triple(rng, (0, 0, 0))
        ef, defect = symmetry_defect(dp, tp, cfg.W, cfg.threshold)
        full = nullspace(assemble(dp, tp, cfg.W), cfg.threshold)
        smin = full.singular_values[-1] / full.singular_values[0]
        print(f"{abs(dp.q):>5.2f} {np.angle(dp.q):>6.2f} {ef.nullity:>7} {ef.gap:>9.1e} {full.nullity:>9} {smin:>10.2e} {defect:>8.2e}")
    dp = DeformationParameter.classical_limit()
    tp = draw_triple(rng, (0, 0, 0))
    ef, defect = symmetry_defect(dp, tp, cfg.W, cfg.threshold)
    print(f"classical reference: EF nullity {ef.nullity}, symmetry defect {defect:.2e}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--draws", type=int, default=10)
    ap.add_argument("--W", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    run(SymmetryConfig(draws=a.draws, W=a.W, seed=a.seed))
