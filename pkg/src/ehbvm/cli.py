"""Command line front end.

    ehbvm run --problem quartic --method ehbvm --k 4 --s 2 --h 0.1 --t-end 100
    ehbvm table1 --csv table1.csv

Exit codes: 0 success, 2 invalid configuration, 3 non-convergence under
``--strict``.
"""
import argparse
import contextlib
import csv
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .diagnostics import reference_solution, summarize
from .exceptions import ConfigurationError, DomainError
from .integrator import MethodConfig, integrate
from .systems import PROBLEMS, get_problem

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NONCONVERGED = 3

# Benchmark values for the quartic oscillator on [0, 100]:
# (method, h) -> (e_H, e_L, e_sol)
BENCHMARK_TABLE1 = {
    ("gauss", 1e-1): (2.05e-04, 6.25e-16, 1.08e-02),
    ("gauss", 5e-2): (1.26e-05, 9.71e-16, 6.83e-04),
    ("gauss", 2.5e-2): (7.82e-07, 1.47e-15, 4.28e-05),
    ("gauss", 1.25e-2): (4.88e-08, 1.42e-15, 2.67e-06),
    ("gauss", 6.25e-3): (3.05e-09, 2.75e-15, 1.67e-07),
    ("hbvm", 1e-1): (4.44e-15, 8.86e-07, 7.17e-03),
    ("hbvm", 5e-2): (1.87e-14, 5.55e-08, 4.55e-04),
    ("hbvm", 2.5e-2): (7.11e-15, 3.47e-09, 2.86e-05),
    ("hbvm", 1.25e-2): (1.07e-14, 2.17e-10, 1.79e-06),
    ("hbvm", 6.25e-3): (9.77e-15, 1.36e-11, 1.12e-07),
    ("ehbvm", 1e-1): (5.20e-14, 1.53e-15, 2.36e-03),
    ("ehbvm", 5e-2): (4.53e-14, 1.19e-15, 1.51e-04),
    ("ehbvm", 2.5e-2): (4.26e-14, 1.14e-15, 9.50e-06),
    ("ehbvm", 1.25e-2): (2.04e-14, 2.64e-15, 5.95e-07),
    ("ehbvm", 6.25e-3): (1.42e-14, 3.64e-15, 3.72e-08),
}
TABLE1_METHODS = (MethodConfig.gauss(2), MethodConfig.hbvm(4, 2), MethodConfig.ehbvm(4, 2))
ROUNDOFF_CLASS = 1e-13   # benchmark entries below this are roundoff
ROUNDOFF_BOUND = 1e-12
TRUNCATION_FACTOR = 5.0

SUMMARY_FIELDS = ["method", "k", "s", "h", "e_H", "e_L_max", "e_sol", "fallbacks",
                  "paper_e_H", "paper_e_L", "paper_e_sol", "ratio_flags"]


def fmt(x):
    """17 significant digits, enough to round-trip a double."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return f"{float(x):.16e}"


@dataclass(frozen=True)
class RunDescriptor:
    problem: str
    method: str
    k: int
    s: int
    h: float
    t_end: float
    output_path: Optional[str] = None
    emit_trajectory: bool = False

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ConfigurationError(f"unknown problem {self.problem!r}; known: {sorted(PROBLEMS)}")
        if not (self.h > 0 and self.t_end > 0):
            raise ConfigurationError("h and t_end must be positive")
        ratio = self.t_end / self.h
        if abs(ratio - round(ratio)) > 0.5 * math.ulp(ratio) or round(ratio) < 1:
            raise ConfigurationError(f"t_end={self.t_end!r} is not a whole number of steps h={self.h!r}")

    @property
    def n_steps(self):
        return int(round(self.t_end / self.h))


def check_cell(expected, measured):
    """Pass/fail for one benchmark-table entry.

    Roundoff-class entries must be reproduced at roundoff level, truncation
    entries to within a factor of five either way.
    """
    if expected < ROUNDOFF_CLASS:
        return measured <= ROUNDOFF_BOUND
    return expected / TRUNCATION_FACTOR <= measured <= expected * TRUNCATION_FACTOR


def table1_rows(t_end=100.0, levels=5, reference=None):
    """Run the 3 methods x ``levels`` step sizes of the benchmark table on the quartic oscillator.

    ``reference`` may supply precomputed oracle states on the finest grid.
    Rows are ordered by method then decreasing h, independently of timing.
    """
    problem = get_problem("quartic")
    y0 = problem.initial_state
    hs = [0.1 / 2 ** i for i in range(levels)]
    finest = hs[-1]
    n_fine = int(round(t_end / finest))
    if reference is None:
        reference = reference_solution(problem, y0, t_end, np.arange(n_fine + 1) * finest)
    rows = []
    for config in TABLE1_METHODS:
        for i, h in enumerate(hs):
            traj = integrate(problem, y0, h, int(round(t_end / h)), config)
            summary = summarize(traj, reference[::2 ** (levels - 1 - i)])
            benchmark = BENCHMARK_TABLE1.get((config.method, h)) if t_end == 100.0 else None
            row = {
                "method": config.method, "label": config.label, "k": config.k, "s": config.s, "h": h,
                "e_H": summary.e_H, "e_L_max": summary.e_L_max, "e_sol": summary.e_sol,
                "e_sol_end": float(np.linalg.norm(traj.states[-1] - reference[-1])),
                "fallbacks": traj.fallback_count, "nonconverged": traj.nonconverged_count,
                "paper_e_H": None, "paper_e_L": None, "paper_e_sol": None, "ratio_flags": "",
            }
            if benchmark:
                checks = zip(("e_H", "e_L", "e_sol"), benchmark, (summary.e_H, summary.e_L_max, summary.e_sol))
                row["paper_e_H"], row["paper_e_L"], row["paper_e_sol"] = benchmark
                row["ratio_flags"] = ";".join(
                    f"{name}:{'ok' if check_cell(pub, got) else 'off'}" for name, pub, got in checks)
            rows.append(row)
    return rows


def write_csv(rows, fields, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([row[f] if isinstance(row[f], str) else fmt(row[f]) for f in fields])


def _open_output(path):
    if path in (None, "-"):
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", newline="")


def trajectory_rows(problem, traj):
    fields = (["t"] + [f"y_{i + 1}" for i in range(2 * problem.m)] + ["H"]
              + [f"L_{i + 1}" for i in range(problem.invariant_count)])
    data = np.column_stack((traj.times, traj.states, traj.energy_series, traj.invariant_series))
    return fields, [dict(zip(fields, r)) for r in data]


def cmd_run(args):
    try:
        desc = RunDescriptor(args.problem, args.method, args.k, args.s, args.h, args.t_end,
                             args.csv, args.trajectory)
        problem = get_problem(desc.problem)
        config = MethodConfig(desc.method, desc.k, desc.s, fp_tolerance=args.tol,
                              max_iterations=args.max_iter)
        config.check_problem(problem)
    except (ConfigurationError, DomainError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    y0 = problem.initial_state
    traj = integrate(problem, y0, desc.h, desc.n_steps, config)
    reference = None
    if problem.reference_solution is not None or args.reference:
        reference = reference_solution(problem, y0, desc.t_end, traj.times)
    summary = summarize(traj, reference)

    e_L = " ".join(f"{x:.3e}" for x in summary.e_L) or "-"
    e_sol = f"{summary.e_sol:.3e}" if summary.e_sol is not None else "-"
    print(f"method={config.label} k={config.k} s={config.s} h={desc.h:g} "
          f"e_H={summary.e_H:.3e} e_L={e_L} e_sol={e_sol} fallbacks={traj.fallback_count}")
    for w in traj.meta["warnings"]:
        print(f"warning: {w}", file=sys.stderr)

    if desc.output_path:
        with _open_output(desc.output_path) as fh:
            if desc.emit_trajectory:
                fields, rows = trajectory_rows(problem, traj)
            else:
                fields = SUMMARY_FIELDS
                rows = [{"method": config.method, "k": config.k, "s": config.s, "h": desc.h,
                         "e_H": summary.e_H, "e_L_max": summary.e_L_max, "e_sol": summary.e_sol,
                         "fallbacks": traj.fallback_count, "paper_e_H": None, "paper_e_L": None,
                         "paper_e_sol": None, "ratio_flags": ""}]
            write_csv(rows, fields, fh)

    if args.strict and traj.nonconverged_count:
        print(f"error: {traj.nonconverged_count} step(s) did not converge", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_table1(args):
    rows = table1_rows(t_end=args.t_end, levels=args.levels)
    for r in rows:
        print(f"{r['label']:<11} h={r['h']:<9.6g} e_H={r['e_H']:.2e} e_L={r['e_L_max']:.2e} "
              f"e_sol={r['e_sol']:.2e} (t_end {r['e_sol_end']:.2e}) {r['ratio_flags']}",
              file=sys.stderr)
    with _open_output(args.csv) as fh:
        write_csv(rows, SUMMARY_FIELDS, fh)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="ehbvm", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="integrate one problem with one method")
    run.add_argument("--problem", default="quartic", choices=sorted(PROBLEMS))
    run.add_argument("--method", default="ehbvm", choices=["gauss", "hbvm", "ehbvm"])
    run.add_argument("--k", type=int, default=4)
    run.add_argument("--s", type=int, default=2)
    run.add_argument("--h", type=float, default=0.1)
    run.add_argument("--t-end", type=float, default=100.0)
    run.add_argument("--tol", type=float, default=1e-14, help="fixed-point tolerance")
    run.add_argument("--max-iter", type=int, default=100)
    run.add_argument("--csv", metavar="PATH", help="write a summary (or trajectory) CSV")
    run.add_argument("--trajectory", action="store_true", help="write the trajectory instead of the summary")
    run.add_argument("--reference", action="store_true",
                     help="compute e_sol with the numerical oracle when no exact solution exists")
    run.add_argument("--strict", action="store_true", help="exit 3 if any step fails to converge")
    run.add_argument("--seed", type=int, default=None, help="reserved; all computation is deterministic")
    run.set_defaults(func=cmd_run)

    tab = sub.add_parser("table1", help="reproduce the quartic oscillator benchmark table")
    tab.add_argument("--csv", metavar="PATH", help="output path (default stdout)")
    tab.add_argument("--t-end", type=float, default=100.0)
    tab.add_argument("--levels", type=int, default=5, help="number of step sizes 0.1 * 2^-i")
    tab.set_defaults(func=cmd_table1)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
