"""Command-line front end: ``varjet {sweep,monodromy,classify,oracle,paths}``.

Exit codes: 0 success, 2 bad arguments, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .cpath import (
    T_STAR_LEMNISCATE,
    T_STAR_TANH,
    PolygonalPath,
    commutator_path,
    hexagon_path,
    min_distance,
    read_path,
    spoon_path,
    square_path,
    winding_number,
)
from .errors import NumericalFailure, VarjetError
from .frwmodel import FAMILIES, FrwParams, RationalParam, classify_k0, frw_field, mu, sol1, sol2
from .jetflow import IntegratorConfig
from .linmono import DEFAULT_CAP, commutator, jet_row, k436_entry, monodromy, sup_norm, write_matrix_csv
from .oraclequad import k436_k0, k436_k1

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3

CASES = ("k1", "k0-diag-mu1", "k0-diag-mu2", "k0-diag-mu3", "k0-open-mu1", "k0-open-mu2", "k0-open-mu3")
TRIVIAL_TOL = 1e-7
COMMUTE_TOL = 1e-8


class UsageError(VarjetError):
    pass


# --- parameters and paths -------------------------------------------------------

_FAMILY_RE = re.compile(r"^\s*(mu[123]?)\s*\(\s*([^()]+?)\s*\)\s*$")


def parse_param(text: str):
    """``mu2(3)``, ``-1/3`` (units of m^2) or a plain complex number such as ``-0.5+0.1j``."""
    m = _FAMILY_RE.match(text)
    if m:
        name, arg = m.groups()
        try:
            arg = Fraction(arg)
        except ValueError:
            raise UsageError(f"bad family argument in {text!r}") from None
        return FAMILIES[name](arg)
    try:
        return RationalParam(Fraction(text.strip()), text.strip())
    except ValueError:
        pass
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"cannot parse parameter {text!r}") from None


def _param_label(x) -> str:
    if isinstance(x, RationalParam):
        return x.label or str(x.coef)
    return repr(x)


def _model(case: str, Lambda, lam, m: float) -> tuple[FrwParams, object]:
    if case == "k1":
        P = FrwParams(1, Lambda, lam, m)
        return P, sol1(P.L)
    if case == "k0":
        P = FrwParams(0, Lambda, lam, m)
        return P, sol2(P.L)
    raise UsageError(f"unknown model case {case!r} (expected k1 or k0)")


def default_loops(case: str) -> tuple[PolygonalPath, PolygonalPath]:
    if case.startswith("k1"):
        return hexagon_path(1), hexagon_path(-1)
    return spoon_path(T_STAR_LEMNISCATE, 1), spoon_path(T_STAR_LEMNISCATE, -1)


BUILTIN_PATHS = {
    "hex+": lambda: hexagon_path(1),
    "hex-": lambda: hexagon_path(-1),
    "spoon+": lambda: spoon_path(T_STAR_LEMNISCATE, 1),
    "spoon-": lambda: spoon_path(T_STAR_LEMNISCATE, -1),
    "square+": lambda: square_path(T_STAR_TANH, 2.0),
    "square-": lambda: -square_path(T_STAR_TANH, 2.0),
}


def resolve_loop(spec: str, case: str) -> tuple[PolygonalPath, str]:
    """Built-in name, ``commutator`` (of the case's default pair) or a path file."""
    if spec == "commutator":
        a, b = default_loops(case)
        return commutator_path(a, b), "commutator"
    if spec in BUILTIN_PATHS:
        return BUILTIN_PATHS[spec](), spec
    p = Path(spec)
    if not p.is_file():
        raise UsageError(f"unknown path {spec!r}: not a built-in name ({', '.join(BUILTIN_PATHS)}, commutator) or a file")
    return read_path(p), p.name


# --- sweep ------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepSpec:
    case: str = "k1"
    p_min: Fraction = Fraction(2)
    p_max: Fraction = Fraction(8)
    p_step: Fraction = Fraction(1)
    order: int = 5
    m: float = 1.0
    cfg: IntegratorConfig = field(default_factory=IntegratorConfig)

    def __post_init__(self):
        if self.case not in CASES:
            raise UsageError(f"unknown case {self.case!r}; expected one of {', '.join(CASES)}")
        if self.p_step <= 0 or self.p_max < self.p_min:
            raise UsageError("need p-step > 0 and p-max >= p-min")
        if not 1 <= self.order <= 8:
            raise UsageError("order must be in 1..8")

    def grid(self) -> list[Fraction]:
        n = int((self.p_max - self.p_min) / self.p_step)
        return [self.p_min + i * self.p_step for i in range(n + 1)]


@dataclass
class SweepRecord:
    p: Fraction
    dev: list[float]
    comm: list[float]
    error: str = ""

    @property
    def trivial(self) -> bool:
        return bool(self.dev) and self.dev[0] < TRIVIAL_TOL

    @property
    def commuting_order(self) -> int:
        k = 0
        for c in self.comm:
            if c >= COMMUTE_TOL:
                break
            k += 1
        return k


def sweep_params(case: str, p, m: float) -> FrwParams:
    if case == "k1":
        v = mu(p)
        return FrwParams(1, v, v, m)
    fam = FAMILIES[case.rsplit("-", 1)[1]]
    if case.startswith("k0-diag"):
        v = fam(p)
        return FrwParams(0, v, v, m)
    return FrwParams(0, RationalParam(Fraction(-1), "-1"), fam(p), m)


def sweep_point(spec: SweepSpec, p: Fraction) -> SweepRecord:
    K = spec.order
    try:
        P = sweep_params(spec.case, p, spec.m)
        sol = sol1(P.L) if P.k == 1 else sol2(P.L)
        X = frw_field(P)
        a, b = default_loops(spec.case)
        sing = sol.singularities(60.0)
        Ma = monodromy(X, sol.ivp, a, K, spec.cfg, sing)
        Mb = monodromy(X, sol.ivp, b, K, spec.cfg, sing)
        dev = [Ma.truncate(k).deviation() for k in range(1, K + 1)]
        comm = [sup_norm(commutator(Ma.truncate(k), Mb.truncate(k))) for k in range(1, K + 1)]
        if not all(math.isfinite(x) for x in dev + comm):
            raise NumericalFailure("non-finite monodromy entries")
        return SweepRecord(p, dev, comm)
    except (NumericalFailure, ValueError) as exc:
        return SweepRecord(p, [], [], f"{type(exc).__name__}: {exc}".replace(",", ";").replace("\n", " "))


def run_sweep(spec: SweepSpec, threads: int = 1) -> list[SweepRecord]:
    grid = spec.grid()
    if threads <= 1:
        return [sweep_point(spec, p) for p in grid]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda p: sweep_point(spec, p), grid))


def _fmt_p(p: Fraction) -> str:
    return str(p.numerator) if p.denominator == 1 else repr(float(p))


def sweep_csv(spec: SweepSpec, records: Sequence[SweepRecord], provenance: bool = True) -> str:
    K = spec.order
    lines = []
    if provenance:
        stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        lines.append(f"# varjet {__version__} sweep case={spec.case} order={K} generated {stamp}")
    head = ["p"] + [f"dev_k{k}" for k in range(1, K + 1)] + [f"comm_k{k}" for k in range(1, K + 1)]
    lines.append(",".join(head + ["trivial", "commuting_order", "error"]))
    for r in records:
        if r.error:
            vals = ["nan"] * (2 * K) + ["", "", r.error]
        else:
            vals = [repr(x) for x in r.dev + r.comm] + [str(int(r.trivial)), str(r.commuting_order), ""]
        lines.append(",".join([_fmt_p(r.p)] + vals))
    return "\n".join(lines) + "\n"


def sweep_svg(spec: SweepSpec, records: Sequence[SweepRecord], path: str, scales: dict[str, float]) -> None:
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        raise UsageError("--svg needs matplotlib (pip install 'artifact[plot]')") from None
    matplotlib.rcParams["svg.hashsalt"] = "varjet"
    ok = [r for r in records if not r.error]
    ps = [float(r.p) for r in ok]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for kind in ("dev", "comm"):
        for k in range(spec.order):
            name = f"{kind}_k{k + 1}"
            ys = [scales.get(name, 1.0) * (r.dev if kind == "dev" else r.comm)[k] for r in ok]
            ax.semilogy(ps, np.maximum(ys, 1e-30), marker=".", label=name, linestyle="-" if kind == "comm" else ":")
    ax.set_xlabel("p")
    ax.set_title(f"{spec.case}: deviation from Id and commutator sup-norms")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


# --- config files -------------------------------------------------------------------


def load_config(path: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` comments; keys use flag names with ``-`` or ``_``."""
    out: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


# --- subcommands ------------------------------------------------------------------


def _cfg(args) -> IntegratorConfig:
    return IntegratorConfig(rtol=float(args.rtol), atol=float(args.atol))


def cmd_sweep(args, scales) -> int:
    try:
        case = args.case
        if case == "k0-open" or case == "k0-diag":
            case = f"{case}-{args.lambda_family}"
        spec = SweepSpec(
            case,
            Fraction(str(args.p_min)),
            Fraction(str(args.p_max)),
            Fraction(str(args.p_step)),
            int(args.order),
            float(args.m),
            _cfg(args),
        )
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    records = run_sweep(spec, int(args.threads))
    text = sweep_csv(spec, records)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.svg:
        sweep_svg(spec, records, args.svg, scales)
    return EXIT_NUMERIC if records and all(r.error for r in records) else EXIT_OK


def cmd_monodromy(args, _scales) -> int:
    case = "k1" if args.case.startswith("k1") else "k0"
    P, sol = _model(case, parse_param(args.Lambda), parse_param(args.lam), float(args.m))
    loop, name = resolve_loop(args.path, case)
    M = monodromy(frw_field(P), sol.ivp, loop, int(args.order), _cfg(args), sol.singularities(60.0))
    if args.out:
        write_matrix_csv(M, args.out)
    row = jet_row(M, float(args.cap))
    out = [
        f"case={case} Lambda={_param_label(P.Lambda)} lambda={_param_label(P.lam)} m={P.m:g} order={M.order} path={name}",
        f"deviation_from_identity={M.deviation():.6e}",
        f"surviving_entries={len(row)} cap={row.cap:g}",
    ]
    for e in row.entries():
        out.append(
            f"  row={e.row} column={e.column} degree={e.degree} index={e.index_in_group} "
            f"exponents={''.join(map(str, e.exponents))} value={e.value.real:+.12e}{e.value.imag:+.12e}j"
        )
    if len(row) and M.order >= 2:
        try:
            e = k436_entry(row)
            out.append(f"obstruction_entry row={e.row} column={e.column} value={e.value.real:+.12e}{e.value.imag:+.12e}j")
        except VarjetError:
            pass
    if M.order == 1:
        out.append("first_order_monodromy:")
        for r in M.matrix:
            out.append("  " + " ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in r))
    print("\n".join(out))
    return EXIT_OK


def cmd_classify(args, _scales) -> int:
    rng = (int(args.p_min), int(args.p_max))
    if rng[1] < rng[0]:
        raise UsageError("p-max < p-min")
    text = classify_k0(rng).report()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_oracle(args, _scales) -> int:
    case = "k1" if args.case.startswith("k1") else "k0"
    Lambda, lam = parse_param(args.Lambda), parse_param(args.lam)
    P = FrwParams(1 if case == "k1" else 0, Lambda, lam, float(args.m))
    if args.path == "commutator":
        loops, path_id = None, ("hex+,hex-" if case == "k1" else "spoon+,spoon-")
    else:
        names = args.path.split(",")
        if len(names) != 2:
            raise UsageError("--path for the oracle is 'commutator' or two loops 'a,b'")
        loops = tuple(resolve_loop(n_, case)[0] for n_ in names)
        path_id = args.path
    res = (k436_k1 if case == "k1" else k436_k0)(P, loops, _cfg(args))
    rec = {
        "case": case,
        "Lambda": _param_label(Lambda),
        "lambda": _param_label(lam),
        "m": P.m,
        "K_re": res.K.real,
        "K_im": res.K.imag,
        "tol": 1e-7 * res.scale,
        "path_id": path_id,
    }
    line = json.dumps(rec, sort_keys=False)
    print(line)
    if args.out:
        with open(args.out, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
    return EXIT_OK


def _singular_set(case: str) -> tuple[list[complex], complex]:
    if case.startswith("k1"):
        return sol1(-1.0).singularities(60.0), T_STAR_TANH
    return sol2(-1.0).singularities(60.0), T_STAR_LEMNISCATE


def cmd_paths(args, _scales) -> int:
    if args.action == "list":
        for name, make in BUILTIN_PATHS.items():
            p = make()
            verts = " ".join(f"{v.real + 0.0:+.6f}{v.imag + 0.0:+.6f}j" for v in p.vertices)
            print(f"{name}: {verts}")
        return EXIT_OK
    if not args.file:
        raise UsageError("paths validate needs a path file")
    try:
        p = read_path(args.file)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    sing, t_star = _singular_set(args.case)
    d = min_distance(p, sing)
    clearance = IntegratorConfig().clearance
    ok = p.closed and d >= clearance
    print(f"vertices={len(p)} closed={p.closed} length={p.length():.6f} min_distance={d:.6f} clearance={clearance:g}")
    if p.closed:
        print(f"winding(+t*)={winding_number(p, t_star)} winding(-t*)={winding_number(p, -t_star)}")
    print("valid" if ok else "invalid")
    return EXIT_OK if ok else EXIT_USAGE


# --- parser -----------------------------------------------------------------------


def _common(sp: argparse.ArgumentParser, sweep: bool = False) -> None:
    sp.add_argument("--config", help="'key = value' file; flags given on the command line win")
    sp.add_argument("--case", default="k1", help=f"one of {', '.join(CASES)} (sweep) or k1/k0")
    sp.add_argument("--m", default=1.0, type=float)
    sp.add_argument("--rtol", default=1e-12, type=float)
    sp.add_argument("--atol", default=1e-14, type=float)
    sp.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="varjet", description="Monodromy of higher-order variational equations")
    ap.add_argument("--version", action="version", version=f"varjet {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sweep", help="deviation and commutator norms over a p grid")
    _common(sp)
    sp.add_argument("--p-min", default="2")
    sp.add_argument("--p-max", default="8")
    sp.add_argument("--p-step", default="1")
    sp.add_argument("--order", default=5, type=int)
    sp.add_argument("--lambda-family", default="mu2", choices=["mu1", "mu2", "mu3"])
    sp.add_argument("--svg")
    sp.add_argument("--threads", default=1, type=int)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("monodromy", help="one monodromy matrix and its jet-row report")
    _common(sp)
    sp.add_argument("--Lambda", default="mu(3)")
    sp.add_argument("--lambda", dest="lam", default="mu(3)")
    sp.add_argument("--order", default=5, type=int)
    sp.add_argument("--path", default="commutator")
    sp.add_argument("--cap", default=DEFAULT_CAP, type=float)
    sp.set_defaults(func=cmd_monodromy)

    sp = sub.add_parser("classify", help="exact Darboux-point classification for curvature 0")
    sp.add_argument("--config")
    sp.add_argument("--p-min", default=-50, type=int)
    sp.add_argument("--p-max", default=50, type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("oracle", help="obstruction coefficient by nested quadratures")
    _common(sp)
    sp.add_argument("--Lambda", default="mu(3)")
    sp.add_argument("--lambda", dest="lam", default="mu(3)")
    sp.add_argument("--path", default="commutator")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("paths", help="list built-in loops or validate a path file")
    sp.add_argument("action", choices=["list", "validate"])
    sp.add_argument("file", nargs="?")
    sp.add_argument("--case", default="k1")
    sp.add_argument("--config")
    sp.set_defaults(func=cmd_paths)
    return ap


def _apply_config(ap: argparse.ArgumentParser, argv: list[str]) -> tuple[argparse.Namespace, dict[str, float]]:
    args = ap.parse_args(argv)
    scales: dict[str, float] = {}
    if getattr(args, "config", None):
        conf = load_config(args.config)
        sub = ap._subparsers._group_actions[0].choices[args.command]  # noqa: SLF001
        known = {a.dest for a in sub._actions}  # noqa: SLF001
        defaults = {}
        for k, v in conf.items():
            if k.startswith("scale."):
                try:
                    scales[k[6:]] = float(v)
                except ValueError:
                    raise UsageError(f"bad scale value for {k}") from None
                continue
            dest = "lam" if k == "lambda" else k
            if dest not in known or dest in ("config", "func", "action"):
                raise UsageError(f"unknown config key {k!r}")
            defaults[dest] = v
        sub.set_defaults(**defaults)
        args = ap.parse_args(argv)
    return args, scales


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args, scales = _apply_config(ap, argv)
        return args.func(args, scales)
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)
    except NumericalFailure as exc:
        print(f"varjet: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (VarjetError, ValueError) as exc:
        print(f"varjet: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
