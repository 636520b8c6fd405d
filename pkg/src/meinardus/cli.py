"""Command-line interface: ``meinardus <command> ...``.

Exit status is 0 on success, 2 for usage errors and 3 for numeric failures;
failures also print a one-line JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import asymptotics, counting, lattice, saddle, witten
from .model import Kind, parse_preset, preset_lspec

CAP_GENERAL = 20_000
CAP_ONES = 100_000
LOG_POINTS = 8


class UsageError(ValueError):
    pass


class NumericError(ArithmeticError):
    pass


_NUMERIC = (
    witten.PoleProximityError,
    witten.ExtrapolationError,
    witten.QuadratureError,
    saddle.SaddleError,
    counting.CacheCorruptError,
    NumericError,
    OverflowError,
)


@dataclass(frozen=True)
class RunConfig:
    preset: Optional[str]
    n_max: int
    tol: float
    output: str
    cache_dir: Optional[str]
    threads: int

    def __post_init__(self):
        if self.n_max < 1:
            raise UsageError("n must be at least 1")
        if not 0 < self.tol <= 1e-6:
            raise UsageError("tol must lie in (0, 1e-6]")
        if self.threads < 1:
            raise UsageError("threads must be at least 1")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail(2, "usage", message)


def _fail(code: int, kind: str, message: str):
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    sys.exit(code)


# ------------------------------------------------------------------ parsing


def parse_complex(text: str) -> complex:
    """ "re" or "re,im" -> complex."""
    parts = text.split(",")
    if len(parts) not in (1, 2):
        raise UsageError(f"bad complex number {text!r}; use re[,im]")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"bad complex number {text!r}; use re[,im]") from None
    return complex(vals[0], vals[1] if len(vals) == 2 else 0.0)


def parse_grid(text: str) -> list[int]:
    """ "a,b" or "a,b,log" (log-spaced) or "a,b,step" (arithmetic)."""
    parts = text.split(",")
    if len(parts) not in (2, 3):
        raise UsageError(f"bad grid {text!r}; use a,b[,step|log]")
    try:
        a, b = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"bad grid {text!r}") from None
    if not 1 <= a <= b:
        raise UsageError("grid needs 1 <= a <= b")
    mode = parts[2] if len(parts) == 3 else "log"
    if mode == "log":
        if a == b:
            return [a]
        r = math.log(b / a)
        return sorted({round(a * math.exp(r * i / (LOG_POINTS - 1))) for i in range(LOG_POINTS)})
    try:
        step = int(mode)
    except ValueError:
        raise UsageError(f"bad grid step {mode!r}") from None
    if step < 1:
        raise UsageError("grid step must be positive")
    grid = list(range(a, b + 1, step))
    if grid[-1] != b:
        grid.append(b)
    return grid


def _weight(name: Optional[str]):
    if not name:
        raise UsageError("a preset is required")
    try:
        return parse_preset(name)
    except (ValueError, OSError) as e:
        raise UsageError(str(e)) from None


def _spec_or_none(w):
    if w.kind is Kind.EXPLICIT:
        return None
    return preset_lspec(w)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _sci_from_log(lv: float) -> str:
    """exp(lv) in scientific notation without overflowing."""
    e10 = lv / math.log(10)
    ex = math.floor(e10)
    mant = 10 ** (e10 - ex)
    if mant >= 9.9999999999995:
        mant, ex = 1.0, ex + 1
    return f"{mant:.12f}e{ex:+d}"


def _cplx(z: complex) -> list[float]:
    return [z.real, z.imag]


# ------------------------------------------------------------------ commands


def cmd_count(args, cfg: RunConfig) -> None:
    w = _weight(cfg.preset)
    cap = CAP_ONES if w.kind is Kind.ONES else CAP_GENERAL
    if cfg.n_max > cap:
        raise UsageError(f"n={cfg.n_max} exceeds the cap {cap}")
    table = counting.cached_coeffs(w, cfg.n_max, cfg.cache_dir)
    if cfg.output == "json":
        _emit({"preset": w.name, "N": table.N, "p_f_n": [str(v) for v in table.values]})
    else:
        sys.stdout.write(table.to_csv())


def cmd_compare(args, cfg: RunConfig) -> None:
    w = _weight(cfg.preset)
    if w.kind is Kind.EXPLICIT:
        raise UsageError("compare needs a preset with known analytic data")
    grid = args.grid_values
    cap = CAP_ONES if w.kind is Kind.ONES else CAP_GENERAL
    if grid[-1] > cap:
        raise UsageError(f"grid reaches {grid[-1]}, above the cap {cap}")
    model = asymptotics.model_for_preset(w)
    table = counting.cached_coeffs(w, grid[-1], cfg.cache_dir)
    rows = []
    for n in grid:
        lp = math.log(table[n])
        lh = asymptotics.evaluate(model, n).log_value
        d = lp - lh
        rows.append((n, table[n], lh, math.exp(d), d))
    fit = None
    if len(grid) >= 3:
        try:
            fit = asymptotics.error_exponent_fit(model, table, grid)
        except ValueError:
            fit = None
    predicted = -float(model.next_error_exponent)
    if cfg.output == "json":
        _emit(
            {
                "model": asymptotics.model_to_json(model),
                "rows": [
                    {"n": n, "p_f_n": str(p), "p_hat": _sci_from_log(lh), "log_p_hat": lh, "ratio": r, "log_error": d}
                    for n, p, lh, r, d in rows
                ],
                "fit": None if fit is None else {"slope": fit.slope, "r2": fit.r2, "predicted": predicted},
            }
        )
        return
    out = ["n,p_f_n,p_hat,ratio,log_error"]
    for n, p, lh, r, d in rows:
        out.append(f"{n},{p},{_sci_from_log(lh)},{r!r},{d!r}")
    if fit is not None:
        out.append(f"slope,{fit.slope!r},{fit.r2!r},{predicted!r},")
    sys.stdout.write("\n".join(out) + "\n")


def cmd_constants(args, cfg: RunConfig) -> None:
    w = _weight(cfg.preset)
    if w.kind is Kind.EXPLICIT:
        raise UsageError("explicit weights have no analytic data")
    spec = preset_lspec(w)
    model = asymptotics.build_model(spec, w.name)
    out = asymptotics.model_to_json(model)
    out["A"] = [A for A, _ in model.exp_terms]
    c1, c2, c3 = saddle.pole_constants(spec)
    out["c"] = [c1, c2, c3] if len(spec.positive_poles) > 1 else [c1, None, c3]
    if len(spec.positive_poles) == 2:
        tp = asymptotics.two_pole_constants(spec)
        out["K"] = list(tp.K)
        out["ell"] = tp.ell
    out["L0"] = spec.L0
    out["L0prime"] = spec.L0prime
    out["numeric"] = sorted(spec.numeric)
    _emit(out)


def _zeta_value(args, cfg: RunConfig) -> tuple[dict, witten.ZetaEval]:
    name, method, tol = args.name, args.method, cfg.tol
    vals = [parse_complex(v) for v in args.values]
    if args.s is not None:
        vals = [parse_complex(args.s)] + vals
    if name == "mt2":
        if len(vals) != 3:
            raise UsageError("mt2 needs three arguments s1 s2 s3")
        s1, s2, s3 = vals
        conv = (s1 + s3).real > 1 and (s2 + s3).real > 1 and (s1 + s2 + s3).real > 2
        if method == "direct" or (method == "auto" and conv):
            r = witten.zeta_mt2(s1, s2, s3, tol=tol)
        else:
            r = witten.zeta_mt2_mb(s1, s2, s3, M=args.M, eps=args.eps, tol=tol)
        return {"name": "mt2", "s": [_cplx(v) for v in vals]}, r
    if len(vals) != 1:
        raise UsageError(f"{name} needs one argument s")
    s = vals[0]
    head = {"name": name, "s": _cplx(s)}
    if name == "so5":
        if method == "direct" or (method == "auto" and s.real >= 0.6):
            r = witten.zeta_so5_direct(s, tol=tol)
        else:
            r = witten.zeta_so5_continued(s, K=args.K, eps=args.eps, M=args.M, tol=tol, threads=cfg.threads)
    elif name == "su3":
        if method == "direct" or (method == "auto" and s.real >= 0.8):
            r = witten.zeta_su3_direct(s, tol=tol)
        else:
            r = witten.zeta_su3_continued(s, M=args.M, eps=args.eps, tol=tol)
    elif name == "pk":
        if args.k is None:
            raise UsageError("pk needs --k")
        if method == "mb":
            raise UsageError("pk has only a direct method")
        r = lattice.zeta_Pk(s, args.k, tol=tol)
        head["k"] = args.k
    else:
        raise UsageError(f"unknown zeta {name!r}")
    return head, r


def cmd_zeta(args, cfg: RunConfig) -> None:
    head, r = _zeta_value(args, cfg)
    head.update(r.to_json())
    _emit(head)


def cmd_saddle(args, cfg: RunConfig) -> None:
    w = _weight(cfg.preset)
    r = saddle.solve_saddle(w, cfg.n_max, _spec_or_none(w))
    _emit({"preset": w.name, **r.__dict__})


def cmd_cauchy(args, cfg: RunConfig) -> None:
    w = _weight(cfg.preset)
    try:
        r = saddle.cauchy_count(w, cfg.n_max, _spec_or_none(w))
    except ValueError as e:
        raise UsageError(str(e)) from None
    _emit({"preset": w.name, **r.__dict__})


# ------------------------------------------------------------------ driver


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", help="ones, plane, polygonal:k, su3, so5 or explicit:<path>")
    common.add_argument("--n", type=int, dest="n_flag", help="coefficient index or table size")
    common.add_argument("--n-grid", dest="n_grid", help="a,b[,step|log]")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--output", choices=("csv", "json"), default=None)
    common.add_argument("--cache-dir", dest="cache_dir")
    common.add_argument("--threads", type=int, default=1)

    p = _Parser(prog="meinardus", description="Weighted partition counts, asymptotics and Witten zeta values.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("count", parents=[common], help="exact coefficient table")
    c.add_argument("preset_pos", nargs="?", metavar="PRESET")
    c.add_argument("n_pos", nargs="?", type=int, metavar="N")

    c = sub.add_parser("compare", parents=[common], help="exact counts against the asymptotic model")
    c.add_argument("preset_pos", nargs="?", metavar="PRESET")
    c.add_argument("grid_pos", nargs="?", metavar="GRID")

    c = sub.add_parser("constants", parents=[common], help="constants of the asymptotic model")
    c.add_argument("preset_pos", nargs="?", metavar="PRESET")

    c = sub.add_parser("zeta", parents=[common], help="Witten, Mordell-Tornheim and polygonal zeta values")
    c.add_argument("name", choices=("so5", "su3", "mt2", "pk"))
    c.add_argument("values", nargs="*", metavar="S", help="argument(s) as re[,im]")
    c.add_argument("--s", help="argument as re[,im]")
    c.add_argument("--method", choices=("direct", "mb", "auto"), default="auto")
    c.add_argument("--k", type=int, help="polygonal order for pk")
    c.add_argument("--K", type=int, default=3, help="residues taken before the outer contour (so5)")
    c.add_argument("--M", type=int, default=None, help="residues taken before the inner contour")
    c.add_argument("--eps", type=float, default=0.5, help="contour offset in (0, 1)")

    for name, hlp in (("saddle", "saddle point rho_n"), ("cauchy", "coefficient by contour integration")):
        c = sub.add_parser(name, parents=[common], help=hlp)
        c.add_argument("preset_pos", nargs="?", metavar="PRESET")
        c.add_argument("n_pos", nargs="?", type=int, metavar="N")
    return p


_DEFAULT_OUTPUT = {"count": "csv", "compare": "csv"}
_COMMANDS = {
    "count": cmd_count,
    "compare": cmd_compare,
    "constants": cmd_constants,
    "zeta": cmd_zeta,
    "saddle": cmd_saddle,
    "cauchy": cmd_cauchy,
}


def _config(args) -> RunConfig:
    preset = getattr(args, "preset_pos", None) or args.preset
    n = getattr(args, "n_pos", None) or args.n_flag
    if args.command == "compare":
        grid_text = getattr(args, "grid_pos", None) or args.n_grid
        if not grid_text:
            raise UsageError("compare needs a grid a,b[,step|log]")
        args.grid_values = parse_grid(grid_text)
        n = args.grid_values[-1]
    elif args.command in ("count", "saddle", "cauchy") and n is None:
        raise UsageError(f"{args.command} needs N")
    output = args.output or _DEFAULT_OUTPUT.get(args.command, "json")
    if output == "csv" and args.command not in _DEFAULT_OUTPUT:
        raise UsageError(f"{args.command} writes JSON only")
    return RunConfig(preset, n if n is not None else 1, args.tol, output, args.cache_dir, args.threads)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        _COMMANDS[args.command](args, cfg)
    except UsageError as e:
        _fail(2, "usage", str(e))
    except witten.DivergentRegionError as e:
        _fail(3, "domain", str(e))
    except _NUMERIC as e:
        _fail(3, "numeric", f"{type(e).__name__}: {e}")
    except ValueError as e:
        _fail(2, "usage", str(e))
    sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
