"""Command-line driver: ``trilinear {kernel,verify,oracle,reflection,limit}``.

Data goes to ``--output`` (default stdout), logs to stderr.  Exit codes:
0 success, 2 usage, 3 degenerate parameters, 4 numerical breakdown,
5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from trilinear import io as tio
from trilinear.errors import BreakdownError, DegenerateParameterError, DomainError
from trilinear.kernel import build_kernel, residuals
from trilinear.oracle import assemble, compare_with_table, nullspace
from trilinear.qspecial import DeformationParameter
from trilinear.representation import ModuleParams, TripleParams, reflection_build, unitarity_residual
from trilinear.sweeps import classical_limit_sweep, draw_triple, is_monotone_decreasing

log = logging.getLogger("trilinear")

EXIT_OK, EXIT_USAGE, EXIT_DEGENERATE, EXIT_BREAKDOWN, EXIT_VERIFY = 0, 2, 3, 4, 5
NEAR_EXCLUDED = 1e-2


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """``"re"`` or ``"re,im"``."""
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise UsageError(f"cannot parse complex value {text!r}")


def parse_s_list(text: str) -> list[complex]:
    """Comma-separated values, each a Python complex literal such as ``1.3+0.5j``."""
    try:
        return [complex(item.strip().replace(" ", "")) for item in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"cannot parse s values {text!r}") from exc


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"cannot parse integers {text!r}") from exc


@dataclass
class RunConfig:
    subcommand: str
    q: complex | None = None
    classical: bool = False
    log_q: complex | None = None
    dps: int | None = None
    s: list = field(default_factory=list)
    eps: list = field(default_factory=list)
    W: int = 12
    seed_scale: complex = 1
    format: str = "json"
    output: str | None = None
    tol: float = 1e-9
    threshold: float = 1e-8
    oracle_tol: float = 1e-8
    reflection_tol: float = 1e-10
    window: int = 40
    random_seed: int = 0
    table: str | None = None

    def deformation(self) -> DeformationParameter:
        if self.classical:
            return DeformationParameter.classical_limit()
        if self.q is None:
            raise UsageError("either --q or --classical is required")
        return DeformationParameter.quantum(self.q, log_q=self.log_q, dps=self.dps)

    def triple(self) -> TripleParams:
        eps = self.eps or [0, 0, 0]
        if len(eps) != 3:
            raise UsageError("--eps needs three values")
        if not self.s:
            triple = draw_triple(np.random.default_rng(self.random_seed), tuple(eps))
            log.info("drew s = %s from random seed %d", [str(x) for x in triple.s], self.random_seed)
            return triple
        if len(self.s) != 3:
            raise UsageError("--s needs three values")
        return TripleParams.from_values(self.s, eps)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trilinear", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--q", type=str, help='deformation parameter, "re" or "re,im"')
        p.add_argument("--classical", action="store_true", help="q = 1 limit")
        p.add_argument("--log-q", type=str, help="explicit branch of log q, \"re,im\"")
        p.add_argument("--dps", type=int, help="mpmath working precision (decimal digits)")
        p.add_argument("--s", type=str, help="comma-separated s values, e.g. 2.1,1.3+0.5j,0.7")
        p.add_argument("--s1", type=str, help='override s1 with "re,im"')
        p.add_argument("--s2", type=str, help='override s2 with "re,im"')
        p.add_argument("--s3", type=str, help='override s3 with "re,im"')
        p.add_argument("--eps", type=str, help="comma-separated epsilons")
        p.add_argument("--W", type=int, default=12)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", "-o", type=str)
        p.add_argument("--tol", type=float, default=1e-9, help="residual tolerance")
        p.add_argument("--random-seed", type=int, default=0, help="used when --s is omitted")

    p = sub.add_parser("kernel", help="build the kernel table and its residual report")
    common(p)
    p.add_argument("--seed-scale", type=str, default="1")
    p = sub.add_parser("verify", help="recompute residuals of a stored table")
    common(p)
    p.add_argument("table", type=str)
    p = sub.add_parser("oracle", help="nullspace of the assembled system vs. the recursive table")
    common(p)
    p.add_argument("--threshold", type=float, default=1e-8)
    p.add_argument("--oracle-tol", type=float, default=1e-8)
    p = sub.add_parser("reflection", help="reflection coefficients and unitarity")
    common(p)
    p.add_argument("--window", type=int, default=40)
    p.add_argument("--reflection-tol", type=float, default=1e-10)
    p = sub.add_parser("limit", help="q -> 1 convergence sweep")
    common(p)
    return parser


def config_from_args(args) -> RunConfig:
    s = parse_s_list(args.s) if args.s else []
    for i, name in enumerate(("s1", "s2", "s3")):
        val = getattr(args, name)
        if val is not None:
            if not s:
                raise UsageError(f"--{name} needs --s for the remaining entries")
            s[i] = parse_complex(val)
    cfg = RunConfig(
        subcommand=args.subcommand,
        q=parse_complex(args.q) if args.q else None,
        classical=args.classical,
        log_q=parse_complex(args.log_q) if args.log_q else None,
        dps=args.dps,
        s=s,
        eps=parse_int_list(args.eps) if args.eps else [],
        W=args.W,
        format=args.format,
        output=args.output,
        tol=args.tol,
        random_seed=args.random_seed,
    )
    if args.classical and args.q:
        raise UsageError("--classical and --q are mutually exclusive")
    for name in ("seed_scale", "threshold", "oracle_tol", "window", "reflection_tol", "table"):
        if hasattr(args, name):
            val = getattr(args, name)
            setattr(cfg, name, parse_complex(val) if name == "seed_scale" else val)
    return cfg


def _emit(cfg: RunConfig, text: str):
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _warn_near_excluded(triple: TripleParams):
    for i, mp in enumerate(triple.modules, 1):
        d = mp.distance_to_excluded()
        if d < NEAR_EXCLUDED:
            log.warning("s%d - eps%d is within %.1e of an odd integer; results may be ill-conditioned", i, i, d)


def _report_dict(report) -> dict:
    return {"format": tio.FORMAT_VERSION, "residuals": report.to_list()}


# subcommands ------------------------------------------------------------------------


def cmd_kernel(cfg: RunConfig) -> int:
    dp, triple = cfg.deformation(), cfg.triple()
    _warn_near_excluded(triple)
    table = build_kernel(dp, triple, cfg.W, cfg.seed_scale)
    if table.trivial:
        log.info("parity-incompatible eps %s: zero table (trivial)", triple.eps)
    report = residuals(dp, triple, table)
    _emit(cfg, tio.table_to_json(table) if cfg.format == "json" else tio.table_to_csv(table))
    sys.stderr.write(tio.dumps(_report_dict(report)) + "\n")
    if not report.passes(cfg.tol):
        log.error("max residual %.3e exceeds tolerance %.1e", report.max(), cfg.tol)
        return EXIT_VERIFY
    return EXIT_OK


def _load_table(cfg: RunConfig):
    text = Path(cfg.table).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        table = tio.table_from_dict(json.loads(text))
        if cfg.q is not None or cfg.classical:
            dp = cfg.deformation()
            if dp.classical != table.dp.classical or (not dp.classical and abs(dp.q - table.dp.q) > 1e-15 * abs(dp.q)):
                raise UsageError(f"q mismatch: flags give {dp.q}, file has {table.dp.q}")
        if cfg.s and any(abs(complex(a) - b) > 1e-15 * max(1, abs(b)) for a, b in zip(cfg.s, table.triple.s)):
            raise UsageError(f"s mismatch: flags give {cfg.s}, file has {list(table.triple.s)}")
        if cfg.eps and tuple(cfg.eps) != table.triple.eps:
            raise UsageError(f"eps mismatch: flags give {cfg.eps}, file has {table.triple.eps}")
        return table
    # CSV carries values only; parameters come from the flags
    from trilinear.kernel import KernelTable, LatticeWindow

    if not cfg.s:
        raise UsageError("verifying a CSV table needs --s (and --q or --classical)")
    dp, triple = cfg.deformation(), cfg.triple()
    values = tio.values_from_csv(text)
    window = LatticeWindow(cfg.W, triple.eps[0], triple.eps[1])
    if any(p not in window for p in values):
        raise UsageError("CSV entries fall outside the window given by --W/--eps")
    return KernelTable(triple, dp, window, values, None, trivial=not triple.parity_compatible)


def cmd_verify(cfg: RunConfig) -> int:
    table = _load_table(cfg)
    report = residuals(table.dp, table.triple, table)
    _emit(cfg, tio.dumps(_report_dict(report)) + "\n")
    if not report.passes(cfg.tol):
        log.error("max residual %.3e exceeds tolerance %.1e", report.max(), cfg.tol)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_oracle(cfg: RunConfig) -> int:
    dp, triple = cfg.deformation(), cfg.triple()
    _warn_near_excluded(triple)
    system = assemble(dp, triple, cfg.W)
    result = nullspace(system, cfg.threshold)
    out = result.to_dict()
    out["rows"] = system.shape[0]
    out["gap"] = result.gap
    if not triple.parity_compatible:
        out["deviation"] = None
        _emit(cfg, tio.dumps(out) + "\n")
        log.info("parity-incompatible eps %s: empty system, nullity 0", triple.eps)
        return EXIT_OK
    table = build_kernel(dp, triple, cfg.W)
    deviation = compare_with_table(result, table)
    out["deviation"] = deviation
    _emit(cfg, tio.dumps(out) + "\n")
    log.info("nullity %d, gap %.3e, deviation %.3e", result.nullity, result.gap, deviation)
    if result.nullity != 1 or not deviation < cfg.oracle_tol:
        log.error("oracle check failed: nullity %d, deviation %.3e", result.nullity, deviation)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_reflection(cfg: RunConfig) -> int:
    dp = cfg.deformation()
    if len(cfg.s) != 1:
        raise UsageError("reflection takes a single --s value")
    eps = cfg.eps[0] if cfg.eps else 0
    mp = ModuleParams(cfg.s[0], eps)
    forward = reflection_build(dp, mp, cfg.window)
    backward = reflection_build(dp, mp.negated(), cfg.window, method=forward.method)
    out = {
        "format": tio.FORMAT_VERSION,
        "reflection": forward.to_dict(),
        "unitarity_residual": unitarity_residual(forward, backward),
        "recurrence_residual": forward.recurrence_residual(),
    }
    worst = max(out["unitarity_residual"], out["recurrence_residual"])
    if forward.method == "phi":
        rec = reflection_build(dp, mp, cfg.window, method="recurrence").normalized()
        phi_n = forward.normalized()
        agreement = max(abs(complex(phi_n[n] - rec[n])) / abs(complex(rec[n])) for n in rec)
        out["phi_vs_recurrence"] = agreement
        worst = max(worst, agreement)
    _emit(cfg, tio.dumps(out) + "\n")
    if not worst < cfg.reflection_tol:
        log.error("reflection check failed: %.3e", worst)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_limit(cfg: RunConfig) -> int:
    if cfg.classical:
        raise UsageError("limit sweeps q -> 1 itself; --classical is not allowed")
    triple = cfg.triple()
    if any(abs(s.imag) > 0 for s in triple.s):
        raise UsageError("limit needs real s values")
    rows = classical_limit_sweep(triple, cfg.W, dps=cfg.dps)
    if cfg.format == "csv":
        text = "j,q,deviation\n" + "".join(f"{r.j},{tio._fmt_float(r.q)},{tio._fmt_float(r.deviation)}\n" for r in rows)
    else:
        text = tio.dumps({"format": tio.FORMAT_VERSION, "rows": [{"j": r.j, "q": r.q, "deviation": r.deviation} for r in rows]}) + "\n"
    _emit(cfg, text)
    if not is_monotone_decreasing(rows):
        log.error("deviations are not monotonically decreasing")
        return EXIT_VERIFY
    return EXIT_OK


COMMANDS = {
    "kernel": cmd_kernel,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "reflection": cmd_reflection,
    "limit": cmd_limit,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except BreakdownError as exc:
        log.error("numerical breakdown: %s", exc)
        return EXIT_BREAKDOWN
    except (DegenerateParameterError, DomainError) as exc:
        log.error("degenerate parameters: %s", exc)
        return EXIT_DEGENERATE
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
