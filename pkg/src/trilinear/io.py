"""Stable JSON / CSV formats for kernel tables, residual reports and nullspace results.

Output is byte-deterministic: dict insertion order is preserved and every float is
written with 17 significant digits (``format(x, ".17g")``), which round-trips exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math

from trilinear.kernel import KernelTable, LatticeWindow, ResidualReport, Seed
from trilinear.qspecial import DeformationParameter
from trilinear.representation import TripleParams

FORMAT_VERSION = 1


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """Minimal JSON writer with fixed float formatting."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _cplx(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _uncplx(d) -> complex:
    return complex(d["re"], d["im"])


# kernel tables ---------------------------------------------------------------------


def table_to_dict(table: KernelTable) -> dict:
    seed = None
    if table.seed is not None:
        seed = {
            "case": table.seed.case,
            "point": list(table.seed.point),
            "value": _cplx(table.seed.value),
            "entries": [{"n": p[0], "m": p[1], **_cplx(v)} for p, v in table.seed.entries],
        }
    return {
        "format": FORMAT_VERSION,
        "q": _cplx(table.dp.q),
        "log_q": _cplx(table.dp.log_q),
        "classical": table.dp.classical,
        "triple": [{"s": _cplx(mp.s), "eps": mp.epsilon} for mp in table.triple.modules],
        "W": table.window.W,
        "trivial": table.trivial,
        "seed": seed,
        "entries": [{"n": n, "m": m, **_cplx(table.values[(n, m)])} for n, m in table.points()],
    }


def table_from_dict(d: dict) -> KernelTable:
    if d.get("format") != FORMAT_VERSION:
        raise ValueError(f"unsupported kernel table format {d.get('format')!r}")
    if d["classical"]:
        dp = DeformationParameter.classical_limit()
    else:
        dp = DeformationParameter.quantum(_uncplx(d["q"]), log_q=_uncplx(d["log_q"]))
    triple = TripleParams.from_values([_uncplx(t["s"]) for t in d["triple"]], [t["eps"] for t in d["triple"]])
    window = LatticeWindow(d["W"], triple.eps[0], triple.eps[1])
    values = {(e["n"], e["m"]): _uncplx(e) for e in d["entries"]}
    seed = None
    if d.get("seed"):
        entries = tuple(((e["n"], e["m"]), _uncplx(e)) for e in d["seed"]["entries"])
        seed = Seed(d["seed"]["case"], entries)
    return KernelTable(triple, dp, window, values, seed, trivial=d.get("trivial", False))


def table_to_json(table: KernelTable) -> str:
    return dumps(table_to_dict(table)) + "\n"


def table_to_csv(table: KernelTable) -> str:
    lines = ["n,m,re,im"]
    for n, m in table.points():
        z = complex(table.values[(n, m)])
        lines.append(f"{n},{m},{_fmt_float(z.real)},{_fmt_float(z.imag)}")
    return "\n".join(lines) + "\n"


def values_from_csv(text: str) -> dict:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != ["n", "m", "re", "im"]:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    return {(int(r["n"]), int(r["m"])): complex(float(r["re"]), float(r["im"])) for r in reader}


def report_to_list(report: ResidualReport) -> list:
    return report.to_list()
