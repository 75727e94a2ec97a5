"""Brute-force check of the kernel: assemble every invariance equation on a window as
one dense matrix and read off its numerical nullspace from the SVD.

Rows come from :func:`trilinear.kernel.equation_row`, so coefficients are shared with
the recursive builder while the solution path (SVD vs. recurrences) is independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from trilinear.kernel import KernelTable, LatticeWindow, equation_row
from trilinear.qspecial import DeformationParameter
from trilinear.representation import TripleParams


@dataclass(frozen=True)
class AssembledSystem:
    unknowns: list  # lattice points, column order
    matrix: np.ndarray  # rows scaled to unit max-modulus
    tags: list  # (equation, point) per row
    window: LatticeWindow

    @property
    def shape(self):
        return self.matrix.shape


@dataclass(frozen=True)
class NullspaceResult:
    singular_values: np.ndarray  # descending, padded with zeros to the column count
    nullity: int
    threshold: float
    basis: list  # one {point: value} dict per null vector
    unknowns: list

    @property
    def gap(self) -> float:
        """Ratio of the smallest retained singular value to the largest null one."""
        sv = self.singular_values
        rank = len(sv) - self.nullity
        if self.nullity == 0 or rank == 0:
            return float("nan")
        if sv[rank] == 0:
            return float("inf")
        return float(sv[rank - 1] / sv[rank])

    def to_dict(self) -> dict:
        return {
            "format": 1,
            "singular_values": [float(x) for x in self.singular_values],
            "nullity": self.nullity,
            "threshold": self.threshold,
            "basis": [
                [{"n": n, "m": m, "re": complex(v[(n, m)]).real, "im": complex(v[(n, m)]).imag} for (n, m) in self.unknowns]
                for v in self.basis
            ],
        }


def assemble(
    dp: DeformationParameter,
    triple: TripleParams,
    W: int,
    equations=("E", "F", "symmetry"),
) -> AssembledSystem:
    """One row per equation instance whose stencil lies inside the diamond window.

    Symmetry rows are emitted once per unordered pair ``{p, -p}``.
    """
    e1, e2, _ = triple.eps
    window = LatticeWindow(W, e1, e2)
    unknowns = window.points() if triple.parity_compatible else []
    if W < 0:
        raise ValueError("empty window")
    col = {p: i for i, p in enumerate(unknowns)}
    rows, tags = [], []
    for eq in equations:
        for point in unknowns:
            if eq == "symmetry" and not point < (-point[0], -point[1]):
                continue
            row = equation_row(dp, triple, eq, point)
            if not row or any(p not in col for p in row):
                continue
            vec = np.zeros(len(unknowns), dtype=complex)
            for p, c in row.items():
                vec[col[p]] += complex(c)
            scale = np.abs(vec).max()
            if scale > 0:
                vec /= scale
            rows.append(vec)
            tags.append((eq, point))
    matrix = np.array(rows, dtype=complex).reshape(len(rows), len(unknowns))
    return AssembledSystem(unknowns, matrix, tags, window)


def nullspace(system: AssembledSystem, threshold: float = 1e-8) -> NullspaceResult:
    """Nullity = number of singular values below ``threshold * sigma_max``; columns
    beyond the row count contribute zero singular values."""
    ncols = len(system.unknowns)
    if ncols == 0:
        return NullspaceResult(np.zeros(0), 0, threshold, [], [])
    if system.matrix.shape[0] == 0:
        raise ValueError("system has no rows")
    try:
        _, sv, vh = np.linalg.svd(system.matrix, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"SVD did not converge: {exc}") from exc
    padded = np.zeros(ncols)
    padded[: len(sv)] = sv
    cutoff = threshold * padded[0]
    nullity = int(np.sum(padded < cutoff))
    basis = [dict(zip(system.unknowns, vh[k].conj())) for k in range(ncols - nullity, ncols)]
    return NullspaceResult(padded, nullity, threshold, basis, list(system.unknowns))


def compare_with_table(result: NullspaceResult, table: KernelTable, point=None) -> float:
    """Max deviation between the (single) null vector and the recursive table, both
    normalized to 1 at ``point`` (default: the seed point), relative to the largest
    normalized table entry."""
    if result.nullity != 1:
        return float("inf")
    point = point if point is not None else table.seed.point
    vec = result.basis[0]
    ref = table.normalized(point)
    v0 = vec[point]
    scale = max(abs(complex(ref[p])) for p in vec)
    return max(abs(vec[p] / v0 - complex(ref[p])) for p in vec) / scale
