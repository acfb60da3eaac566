"""Write every figure panel as CSV plus gnuplot script.

    python3 scripts/reproduce_figures.py --out results --jobs 4

The fluctuation figures (fluc, fluc2) dominate the runtime; ``--quick`` uses
coarse grids for them.
"""

import argparse
import time
from pathlib import Path

from gpcasimir.cli import FIGURES, Context, run_figure


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--quick", action="store_true", help="5-point grids for fluc and fluc2")
    args = ap.parse_args()
    for fid in FIGURES:
        ctx = Context(jobs=args.jobs, points=5 if args.quick and fid.startswith("fluc") else None)
        t0 = time.perf_counter()
        tables = run_figure(fid, ctx, args.out)
        names = ", ".join(t.name for t in tables)
        print(f"figure {fid:6s} {time.perf_counter() - t0:7.1f} s  -> {names}")


if __name__ == "__main__":
    main()
