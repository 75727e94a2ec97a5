"""Random generic parameter draws and the q -> 1 limit sweep."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from itertools import product

import numpy as np

from trilinear.kernel import KernelTable, build_kernel
from trilinear.qspecial import DeformationParameter
from trilinear.representation import ModuleParams, TripleParams

PARITY_COMPATIBLE_EPS = [e for e in product((0, 1), repeat=3) if (e[0] + e[1] - e[2]) % 2 == 0]


def draw_s(rng: np.random.Generator, eps: int, real: bool = False, margin: float = 0.1, span: float = 3.0) -> complex:
    """A value of ``s`` at distance >= ``margin`` from ``eps + 2Z + 1``."""
    while True:
        s = complex(rng.uniform(-span, span), 0.0 if real else rng.uniform(-1.0, 1.0))
        if ModuleParams(s, eps).distance_to_excluded() >= margin:
            return s


def draw_triple(rng, eps=None, real=False, margin=0.1) -> TripleParams:
    if eps is None:
        eps = PARITY_COMPATIBLE_EPS[rng.integers(len(PARITY_COMPATIBLE_EPS))]
    return TripleParams.from_values([draw_s(rng, e, real, margin) for e in eps], eps)


def draw_q(rng, modulus=(0.3, 0.95), max_arg: float = 0.3) -> complex:
    return cmath.rect(rng.uniform(*modulus), rng.uniform(-max_arg, max_arg))


def table_deviation(table: KernelTable, reference: KernelTable) -> float:
    """``max |a - b| / max |b|`` after normalizing both tables at the reference seed."""
    point = reference.seed.point
    a, b = table.normalized(point), reference.normalized(point)
    scale = max(abs(complex(v)) for v in b.values())
    return max(abs(complex(a[p] - b[p])) for p in b) / scale


@dataclass(frozen=True)
class LimitRow:
    j: int
    q: float
    deviation: float


def classical_limit_sweep(triple: TripleParams, W: int, js=range(2, 7), dps=None) -> list[LimitRow]:
    """Deviation of the table at ``q = 1 - 10^-j`` from the ``q = 1`` table."""
    ref = build_kernel(DeformationParameter.classical_limit(), triple, W)
    rows = []
    for j in js:
        q = 1 - 10.0 ** (-j)
        table = build_kernel(DeformationParameter.quantum(q, dps=dps), triple, W)
        rows.append(LimitRow(j, q, table_deviation(table, ref)))
    return rows


def is_monotone_decreasing(rows) -> bool:
    devs = [r.deviation for r in rows]
    return all(b < a for a, b in zip(devs, devs[1:]))
