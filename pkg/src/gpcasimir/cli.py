"""Command-line front end: figure panels and parameter sweeps as CSV.

Usage::

    gpcasimir figure 1 --out results
    gpcasimir figure 7-right
    gpcasimir sweep --var kappa --from 1.1 --to 3 --points 10 --outputs E_cond,E0_ren --L 2.2

Every CSV uses 12 significant digits, ``,`` as delimiter and ``\\n`` line
endings; unavailable cells hold ``NA``.  Each CSV is accompanied by a gnuplot
script of the same stem.

Exit codes: 0 success, 1 computational failure, 2 usage error.
"""

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import condensate as cond
from . import forces, meanfield, spectrum
from .errors import DomainError, GPError, NoCriticalMode
from .models import Delta, PhysicalParams, PotentialHole, RobinDirichlet, load_config

__all__ = ["SweepSpec", "Table", "run_figure", "run_sweep", "format_csv", "main", "FIGURES",
           "PANELS", "OUTPUTS", "NA"]

NA = "NA"
OUTPUTS = ("E_bs", "E_cond", "k", "E0_ren", "F_cond", "F_fluct", "F_total")
_SPECTRAL = {"E0_ren", "F_cond", "F_fluct", "F_total"}


class UsageError(Exception):
    pass


# --- tables ---------------------------------------------------------------


@dataclass
class Table:
    name: str
    columns: list
    rows: list = field(default_factory=list)
    title: str = ""


def _cell(v):
    if v is None:
        return NA
    if isinstance(v, str):
        return v
    v = float(v)
    if not math.isfinite(v):
        return NA
    s = format(v, ".12g")
    return "0" if s == "-0" else s


def format_csv(table):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def plot_script(table):
    """Gnuplot script plotting every column against the first."""
    lines = [
        f"# {table.title or table.name}",
        "set datafile separator ','",
        "set datafile missing 'NA'",
        "set key autotitle columnhead",
        f"set xlabel '{table.columns[0]}'",
        "set terminal pngcairo size 800,600",
        f"set output '{table.name}.png'",
    ]
    ycols = [i + 1 for i, c in enumerate(table.columns) if i > 0 and c != "status"]
    plots = [f"'{table.name}.csv' using 1:{i} with lines" for i in ycols]
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


def write_table(table, out):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{table.name}.csv"
    with open(path, "w", newline="") as fh:
        fh.write(format_csv(table))
    with open(out / f"{table.name}.gp", "w", newline="") as fh:
        fh.write(plot_script(table))
    return path


# --- context --------------------------------------------------------------


@dataclass(frozen=True)
class Context:
    """Global settings shared by figures and sweeps; ``None`` means caption default."""

    m: float = None
    lam: float = None
    kappa: float = None
    L: float = None
    U0: float = None
    R: float = None
    tol: float = spectrum.ODE_RTOL
    cutoff: float = spectrum.CUTOFF
    points: int = None
    jobs: int = 1
    background: str = "exact"

    def get(self, name, default):
        v = getattr(self, name)
        return default if v is None else v

    @property
    def params(self):
        return PhysicalParams(self.get("m", 1.0), self.get("lam", 1.0))

    def n(self, default):
        return self.get("points", default)


def _pmap(fn, items, jobs):
    # results come back in grid order whatever the completion order
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _try(f, *args):
    try:
        return f(*args)
    except (GPError, ArithmeticError):
        return None


def _interior(a, b, n):
    # n points strictly inside (a, b)
    return np.linspace(a, b, n + 2)[1:-1]


# --- row evaluators (module level so they pickle) -----------------------------


def _e_bs(cfg, params):
    return _try(lambda: meanfield.bound_state(cfg, params).energy)


def _e_cond(cfg, params):
    def f():
        sol = cond.solve(cfg, params)
        return None if isinstance(sol, cond.KGap) else sol.energy
    return _try(f)


def _k(cfg, params):
    def f():
        sol = cond.solve(cfg, params)
        return None if isinstance(sol, cond.KGap) else sol.k
    return _try(f)


def _fig1_row(task):
    kappa, params = task
    cfg = Delta(kappa)
    return [kappa, _e_bs(cfg, params), _e_cond(cfg, params)]


def _robin_energy_row(task):
    L, kappa, params = task
    cfg = RobinDirichlet(kappa, L)
    return [L, _e_bs(cfg, params), _e_cond(cfg, params)]


def _hole_row(task):
    U0, R, params, what = task
    cfg = PotentialHole(U0, R)
    if what == "k":
        return [U0, _k(cfg, params)]
    return [U0, _e_bs(cfg, params), _e_cond(cfg, params)]


def _cond_force_row(task):
    L, kappa, params = task
    h = forces._clamped_step(L, kappa, params.m, forces.REL_STEP)
    F = _try(lambda: forces.force_of(forces.condensate_energy_of_L(kappa, params), L, h=h)[0])
    return [L, F]


def _fluct_row(task):
    x, var, fixed, params, ctx, want_force = task
    kappa, L = (x, fixed) if var == "kappa" else (fixed, x)
    cfg = RobinDirichlet(kappa, L)
    critical = kappa > meanfield.kappa_critical(L, params.m)
    E_cond = _e_cond(cfg, params) if critical else None
    if want_force:
        rep = _try(forces.total_force, cfg, params, ctx.background, forces.REL_STEP, ctx.cutoff,
                   ctx.tol)
        if rep is None:
            return [x, None, None, None]
        return [x, rep.F_fluct, rep.F_cond if critical else None, rep.F_total]
    E0 = _try(lambda: forces.vacuum_energy_of_L(kappa, params, ctx.background, ctx.cutoff,
                                                ctx.tol)(L))
    return [x, E0, E_cond]


def _fluc2_row(task):
    L, kappa, params, ctx = task
    out = [L]
    for bg in ("exact", "approx"):
        out.append(_try(lambda: forces.vacuum_energy_of_L(kappa, params, bg, ctx.cutoff,
                                                          ctx.tol)(L)))
    return out


# --- figures ----------------------------------------------------------------


def fig1(ctx):
    p = ctx.params
    ks = np.linspace(p.m, ctx.get("kappa", 3.0), ctx.n(60) + 1)[1:]
    rows = _pmap(_fig1_row, [(float(k), p) for k in ks], ctx.jobs)
    return [Table("fig1", ["kappa", "E_bs", "E_cond"], rows, "delta potential energies")]


def _residual_table(name, Ls, kappa, p, nk, title):
    ks = np.linspace(0.0, 1.0, nk + 1)[1:-1]
    cols = ["k"] + [f"L={format(L, '.6g')}" for L in Ls]
    rows = []
    for k in ks:
        row = [k]
        for L in Ls:
            row.append(_try(cond.robin_matching_residual, float(k), RobinDirichlet(kappa, L), p))
        rows.append(row)
    return Table(name, cols, rows, title)


def fig3_left(ctx):
    p, kappa = ctx.params, ctx.get("kappa", 2.0)
    th = cond.robin_thresholds(kappa, p.m)
    hi = th.L1 if th.L1 is not None else th.L0 + 0.01
    Ls = [th.L0 - 1e-3] + list(np.linspace(th.L0, hi, 5)[1:-1]) + [hi + 1e-3]
    return _residual_table("fig3-left", Ls, kappa, p, ctx.n(100),
                           "Robin matching condition, L0 < L < L1")


def fig3_right(ctx):
    p, kappa = ctx.params, ctx.get("kappa", 2.0)
    th = cond.robin_thresholds(kappa, p.m)
    hi = th.L1 if th.L1 is not None else th.L0 + 0.01
    Ls = _interior(th.L0, hi, ctx.n(30))
    rows = [[L, _k(RobinDirichlet(kappa, L), p)] for L in Ls]
    return Table("fig3-right", ["L", "k"], rows, "modulus in L0 < L < L1")


def fig4a(ctx, panel):
    p, kappa = ctx.params, ctx.get("kappa", 2.0)
    th = cond.robin_thresholds(kappa, p.m)
    hi = th.L1 if th.L1 is not None else th.L0 + 0.01
    Ls = _interior(th.L0, hi, ctx.n(30))
    rows = _pmap(_robin_energy_row, [(float(L), kappa, p) for L in Ls], ctx.jobs)
    if panel == "left":
        return Table("fig4a-left", ["L", "E_cond"], [[r[0], r[2]] for r in rows],
                     "condensate energy, L0 < L < L1")
    diff = [[r[0], None if None in r else r[2] - r[1]] for r in rows]
    return Table("fig4a-right", ["L", "E_cond_minus_E_bs"], diff, "E_cond - E_bs")


def fig5_left(ctx):
    p, kappa = ctx.params, ctx.get("kappa", 2.0)
    th = cond.robin_thresholds(kappa, p.m)
    if th.L1 is None:
        raise UsageError(f"no k-gap at kappa={kappa}")
    Ls = list(_interior(th.L1, th.L2, 5))
    return _residual_table("fig5-left", Ls, kappa, p, ctx.n(100),
                           "Robin matching condition, L1 < L < L2 (no solution)")


def fig5_right(ctx):
    p, kappa = ctx.params, ctx.get("kappa", 2.0)
    th = cond.robin_thresholds(kappa, p.m)
    lo = th.L2 if th.L2 is not None else th.L0
    Ls = np.linspace(lo, ctx.get("L", 4.0), ctx.n(40) + 1)[1:]
    rows = [[L, _k(RobinDirichlet(kappa, L), p)] for L in Ls]
    return Table("fig5-right", ["L", "k"], rows, "modulus for L > L2")


def fig7_left(ctx):
    p, kappa = ctx.params, ctx.get("kappa", 2.0)
    th = cond.robin_thresholds(kappa, p.m)
    Ls = np.linspace(th.L0, ctx.get("L", 4.0), ctx.n(80) + 1)[1:]
    rows = _pmap(_robin_energy_row, [(float(L), kappa, p) for L in Ls], ctx.jobs)
    return Table("fig7-left", ["L", "E_bs", "E_cond"], rows, "Robin energies")


def fig7_right(ctx):
    p = ctx.params
    ks = np.linspace(p.m, ctx.get("kappa", 4.0), ctx.n(60) + 1)[1:]
    rows = []
    for k in ks:
        th = cond.robin_thresholds(float(k), p.m)
        rows.append([k, th.L0, th.L1, th.L2])
    return Table("fig7-right", ["kappa", "L0", "L1", "L2"], rows, "characteristic lengths")


def _hole_grid(ctx, R, p):
    U0c = cond.hole_threshold(R, p.m)
    return np.linspace(U0c, ctx.get("U0", 20.0), ctx.n(40) + 1)[1:]


def fig2(ctx, panel):
    p = ctx.params
    if panel == "left":
        kappa = ctx.get("kappa", 2.0)
        th = cond.robin_thresholds(kappa, p.m)
        lo = th.L2 if th.L2 is not None else th.L0
        Ls = np.linspace(lo, ctx.get("L", 3.0), ctx.n(30) + 1)[1:]
        rows = _pmap(_cond_force_row, [(float(L), kappa, p) for L in Ls], ctx.jobs)
        return Table("fig2-left", ["L", "F_cond"], rows, "condensate force for L > L2")
    R = ctx.get("R", 1.0)
    rows = _pmap(_hole_row, [(float(U), R, p, "k") for U in _hole_grid(ctx, R, p)], ctx.jobs)
    return Table("fig2-right", ["U0", "k"], rows, "potential hole modulus")


def figY(ctx):
    p, R = ctx.params, ctx.get("R", 1.0)
    rows = _pmap(_hole_row, [(float(U), R, p, "E") for U in _hole_grid(ctx, R, p)], ctx.jobs)
    return [Table("figY", ["U0", "E_bs", "E_cond"], rows, "potential hole energies")]


def fluc(ctx, panel):
    p = ctx.params
    upper = panel.startswith("upper")
    want_force = panel.endswith("right")
    if upper:
        var, fixed = "kappa", ctx.get("L", 2.2)
        grid = np.linspace(0.2, ctx.get("kappa", 3.0), ctx.n(15))
    else:
        var, fixed = "L", ctx.get("kappa", 1.3)
        grid = np.linspace(0.3, ctx.get("L", 4.0), ctx.n(15))
    tasks = [(float(x), var, fixed, p, ctx, want_force) for x in grid]
    rows = _pmap(_fluct_row, tasks, ctx.jobs)
    cols = [var] + (["F_fluct", "F_cond", "F_total"] if want_force else ["E0_ren", "E_cond"])
    what = "forces" if want_force else "energies"
    return Table(f"fluc-{panel}", cols, rows, f"vacuum {what} vs {var}")


def fluc2(ctx, panel):
    p = ctx.params
    kappa, L = ctx.get("kappa", 1.3), ctx.get("L", 3.0)
    if panel == "left":
        V_ex = forces.background_potential(RobinDirichlet(kappa, L), p, "exact")
        V_ap = forces.background_potential(RobinDirichlet(kappa, L), p, "approx")
        if V_ex is None:
            raise GPError(f"no exact condensate at kappa={kappa}, L={L}")
        xs = np.linspace(0.0, L, ctx.n(200) + 1)
        rows = [[x, V_ex(x), V_ap(x)] for x in xs]
        return Table("fluc2-left", ["x", "V_exact", "V_approx"], rows, "background potentials")
    Lc = math.atanh(p.m / kappa) / p.m if kappa > p.m else 0.0
    Ls = np.linspace(Lc, ctx.get("L", 4.0), ctx.n(15) + 1)[1:]
    rows = _pmap(_fluc2_row, [(float(x), kappa, p, ctx) for x in Ls], ctx.jobs)
    return Table("fluc2-right", ["L", "E0_exact", "E0_approx"], rows, "vacuum energy, two backgrounds")


def _two(fn, left="left", right="right"):
    return {left: lambda c: fn(c, left), right: lambda c: fn(c, right)}


PANELS = {
    "1": {"": lambda c: fig1(c)[0]},
    "2": _two(fig2),
    "3": {"left": fig3_left, "right": fig3_right},
    "4a": _two(fig4a),
    "5": {"left": fig5_left, "right": fig5_right},
    "7": {"left": fig7_left, "right": fig7_right},
    "Y": {"": lambda c: figY(c)[0]},
    "fluc": {q: (lambda c, q=q: fluc(c, q))
             for q in ("upper-left", "upper-right", "lower-left", "lower-right")},
    "fluc2": _two(fluc2),
}
FIGURES = tuple(PANELS)


def _figure_choices():
    out = list(FIGURES)
    for fid, panels in PANELS.items():
        out += [f"{fid}-{q}" for q in panels if q]
    return out


def run_figure(fid, ctx=None, out=None):
    """Compute the panels of figure ``fid`` (optionally ``fid-panel``); write CSVs if ``out``."""
    ctx = ctx or Context()
    base, _, panel = fid.partition("-")
    if base not in PANELS or (panel and panel not in PANELS[base]):
        raise UsageError(f"unknown figure id {fid!r}; choose from {_figure_choices()}")
    names = [panel] if panel else list(PANELS[base])
    tables = [PANELS[base][q](ctx) for q in names]
    if out is not None:
        for t in tables:
            write_table(t, out)
    return tables


# --- sweeps ---------------------------------------------------------------


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int
    model: str = "robin"
    outputs: tuple = ("E_cond",)
    fixed: Context = Context()

    def __post_init__(self):
        if self.variable not in ("kappa", "L", "U0"):
            raise UsageError(f"sweep variable must be kappa, L or U0, got {self.variable!r}")
        if not self.start < self.stop:
            raise UsageError("sweep needs from < to")
        if self.points < 2:
            raise UsageError("sweep needs at least 2 points")
        bad = [o for o in self.outputs if o not in OUTPUTS]
        if bad:
            raise UsageError(f"unknown outputs {bad}; choose from {list(OUTPUTS)}")
        if self.model == "delta" and "k" in self.outputs:
            raise UsageError("the delta condensate has no elliptic modulus k")
        if self.model != "robin" and _SPECTRAL & set(self.outputs):
            raise UsageError("vacuum energies and forces are defined for the robin model only")
        allowed = {"delta": ("kappa",), "robin": ("kappa", "L"), "hole": ("U0",)}[self.model]
        if self.variable not in allowed:
            raise UsageError(f"cannot sweep {self.variable} in the {self.model} model")


def _config(model, ctx):
    try:
        if model == "delta":
            return Delta(ctx.get("kappa", 2.0))
        if model == "robin":
            return RobinDirichlet(ctx.get("kappa", 2.0), ctx.get("L", 2.2))
        return PotentialHole(ctx.get("U0", 6.0), ctx.get("R", 1.0))
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _sweep_row(task):
    spec, x = task
    ctx = replace(spec.fixed, **{spec.variable: x})
    p = ctx.params
    cfg = _config(spec.model, ctx)
    vals, status = {}, "ok"
    try:
        sol = cond.solve(cfg, p)
    except NoCriticalMode:
        sol, status = None, "subcritical"
    except (GPError, ArithmeticError):
        sol, status = None, "error"
    if isinstance(sol, cond.KGap):
        sol, status = None, "kgap"
    for o in spec.outputs:
        if o == "E_bs":
            vals[o] = _e_bs(cfg, p)
        elif o == "E_cond":
            vals[o] = None if sol is None else sol.energy
        elif o == "k":
            vals[o] = None if sol is None else sol.k
        elif o == "E0_ren":
            vals[o] = None
            if status in ("ok", "subcritical"):
                vals[o] = _try(lambda: forces.vacuum_energy_of_L(
                    cfg.kappa, p, ctx.background, ctx.cutoff, ctx.tol)(cfg.L))
    if _SPECTRAL & set(spec.outputs) - {"E0_ren"}:
        rep = None
        if status in ("ok", "subcritical"):
            rep = _try(forces.total_force, cfg, p, ctx.background, forces.REL_STEP,
                       ctx.cutoff, ctx.tol)
        for o in ("F_cond", "F_fluct", "F_total"):
            if o in spec.outputs:
                vals[o] = None if rep is None else getattr(rep, o)
        if status == "subcritical" and "F_cond" in vals:
            vals["F_cond"] = None
    if status == "ok" and any(vals[o] is None for o in spec.outputs):
        status = "error"
    return [x] + [vals[o] for o in spec.outputs] + [status]


def run_sweep(spec, out=None, name=None):
    grid = np.linspace(spec.start, spec.stop, spec.points)
    rows = _pmap(_sweep_row, [(spec, float(x)) for x in grid], spec.fixed.jobs)
    name = name or f"sweep-{spec.model}-{spec.variable}"
    table = Table(name, [spec.variable, *spec.outputs, "status"], rows,
                  f"{spec.model} sweep over {spec.variable}")
    if out is not None:
        write_table(table, out)
    return table


# --- argument parsing -----------------------------------------------------


def _add_globals(p):
    g = p.add_argument_group("model and numerics (flags override --config)")
    g.add_argument("--config", type=Path, help="JSON file with model/m/lambda/kappa/L/U0/R")
    g.add_argument("--m", type=float)
    g.add_argument("--lambda", dest="lam", type=float)
    g.add_argument("--kappa", type=float)
    g.add_argument("--L", type=float)
    g.add_argument("--U0", type=float)
    g.add_argument("--R", type=float)
    g.add_argument("--tol", type=float, default=None, help="ODE relative tolerance")
    g.add_argument("--cutoff", type=float, default=None, help="frequency cutoff in units of m")
    g.add_argument("--points", type=int, help="override the default grid size")
    g.add_argument("--background", choices=("exact", "approx"), default="exact")
    g.add_argument("--out", type=Path, default=Path("."), help="output directory")
    g.add_argument("--jobs", type=int, default=1, help="worker processes")


def build_parser():
    ap = argparse.ArgumentParser(prog="gpcasimir", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    f = sub.add_parser("figure", help="reproduce a figure as CSV panels")
    f.add_argument("id", choices=_figure_choices(), metavar="ID",
                   help="one of " + ", ".join(_figure_choices()))
    _add_globals(f)
    s = sub.add_parser("sweep", help="one-dimensional parameter sweep")
    s.add_argument("--var", required=True, choices=("kappa", "L", "U0"))
    s.add_argument("--from", dest="start", required=True, type=float)
    s.add_argument("--to", dest="stop", required=True, type=float)
    s.add_argument("--model", choices=("delta", "robin", "hole"))
    s.add_argument("--outputs", default="E_cond", help="comma separated: " + ",".join(OUTPUTS))
    s.add_argument("--name", help="output file stem")
    _add_globals(s)
    return ap


def _context(args):
    vals, model = {}, None
    if args.config is not None:
        try:
            cfg, params = load_config(args.config)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        model = cfg.name
        vals = {k: getattr(cfg, k) for k in ("kappa", "L", "U0", "R") if hasattr(cfg, k)}
        vals.update(m=params.m, lam=params.lam)
    for k in ("m", "lam", "kappa", "L", "U0", "R", "points"):
        v = getattr(args, k)
        if v is not None:
            vals[k] = v
    if args.tol is not None:
        vals["tol"] = args.tol
    if args.cutoff is not None:
        vals["cutoff"] = args.cutoff
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    try:
        ctx = Context(**vals, jobs=args.jobs, background=args.background)
        ctx.params
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    return ctx, model


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        ctx, model = _context(args)
        if args.command == "figure":
            tables = run_figure(args.id, ctx, args.out)
            paths = [args.out / f"{t.name}.csv" for t in tables]
        else:
            spec = SweepSpec(args.var, args.start, args.stop, ctx.get("points", 11),
                             args.model or model or "robin",
                             tuple(o.strip() for o in args.outputs.split(",") if o.strip()), ctx)
            t = run_sweep(spec, args.out, args.name)
            paths = [args.out / f"{t.name}.csv"]
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        print(f"gpcasimir: error: {exc}", file=sys.stderr)
        return 2
    except (GPError, ArithmeticError, ValueError, OSError) as exc:
        print(f"gpcasimir: computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
