"""Command line: ``alphadisk kernel | solve | verify``.

Tables go to stdout (or ``--out``) as CSV or JSON; every float is written
with 17 significant digits so repeated runs are byte-identical.  Exit codes:
0 success, 1 a verified bound failed, 2 usage error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import platform
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .core import (
    AlphaDiskError,
    BoundarySignal,
    DiskField,
    DomainError,
    IntegrabilityError,
    QuadratureSpec,
    validate_alpha,
)
from .estimates import (
    circle_power_sweep,
    grin_lip_sweep,
    lemma_sweep,
    m1_sweep,
    verify_green_derivative_bounds,
)
from .kernels import green_alpha, h_alpha, poisson_kernel_alpha, pseudo_hyperbolic, v_kernel
from .solver import DirichletProblem, solve
from .transforms import conjugate_identity_check, hilbert_closed_form_report

EXIT_OK, EXIT_BOUND, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

SWEEPS = ("m1", "circle-power", "i1", "i2", "green-bounds", "grin-lip", "hilbert", "conjugate-identity")


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# built-in data


def boundary_builtin(name: str, n=256) -> BoundarySignal:
    if name == "zero":
        return BoundarySignal.from_rule(lambda t: np.zeros_like(t), n)
    if name == "one":
        return BoundarySignal.from_rule(lambda t: np.ones_like(t), n)
    if name == "cos":
        return BoundarySignal.from_rule(np.cos, n)
    if name == "sin":
        return BoundarySignal.from_rule(np.sin, n)
    if name == "abs-sin":
        return BoundarySignal.from_rule(lambda t: np.abs(np.sin(t)), n, breakpoints=(0.0, np.pi))
    if name.startswith("cosk:"):
        try:
            k = int(name[5:])
        except ValueError:
            raise UsageError(f"bad frequency in {name!r}") from None
        return BoundarySignal.from_rule(lambda t: np.cos(k * t), max(n, 4 * abs(k) + 4))
    raise UsageError(f"unknown boundary signal {name!r}")


def field_builtin(name: str) -> DiskField:
    if name == "zero":
        return DiskField(rule=lambda z: np.zeros_like(z), envelope_exponent=0.0)
    if name == "one":
        return DiskField(rule=lambda z: np.ones_like(z), envelope_exponent=0.0)
    if name == "manufactured1":
        return DiskField(rule=lambda z: (1.0 - np.abs(z) ** 2) ** -2.0, envelope_exponent=2.0)
    if name.startswith("envelope:"):
        try:
            beta = float(name[9:])
        except ValueError:
            raise UsageError(f"bad exponent in {name!r}") from None
        return DiskField(rule=lambda z: (1.0 - np.abs(z) ** 2) ** -beta, envelope_exponent=beta)
    raise UsageError(f"unknown field {name!r}")


def _read_table(path, columns):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != list(columns):
        raise UsageError(f"{path}: header must be {','.join(columns)}")
    try:
        data = np.array([[float(x) for x in row] for row in rows[1:] if row], dtype=float)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None
    if data.ndim != 2 or data.shape[0] == 0:
        raise UsageError(f"{path}: no data rows")
    return data


def boundary_from_csv(path) -> BoundarySignal:
    """theta,re,im rows at uniform angles 2 pi k / n, k = 0..n-1."""
    data = _read_table(path, ("theta", "re", "im"))
    order = np.argsort(data[:, 0])
    data = data[order]
    n = data.shape[0]
    if not np.allclose(data[:, 0], 2 * np.pi * np.arange(n) / n, atol=1e-9):
        raise UsageError(f"{path}: theta must be the uniform nodes 2 pi k / n")
    try:
        return BoundarySignal.from_samples(data[:, 1] + 1j * data[:, 2])
    except DomainError as exc:
        raise UsageError(f"{path}: {exc}") from None


def field_from_csv(path) -> DiskField:
    """r,theta,re,im rows on a full polar grid (uniform angles from 0)."""
    data = _read_table(path, ("r", "theta", "re", "im"))
    radii = np.unique(data[:, 0])
    thetas = np.unique(data[:, 1])
    if data.shape[0] != radii.size * thetas.size:
        raise UsageError(f"{path}: rows do not form a full (r, theta) grid")
    vals = np.empty((radii.size, thetas.size), dtype=complex)
    ri = np.searchsorted(radii, data[:, 0])
    ti = np.searchsorted(thetas, data[:, 1])
    vals[ri, ti] = data[:, 2] + 1j * data[:, 3]
    try:
        return DiskField(radii=radii, values=vals)
    except DomainError as exc:
        raise UsageError(f"{path}: {exc}") from None


def resolve_boundary(arg) -> BoundarySignal:
    return boundary_from_csv(arg) if arg.endswith(".csv") or Path(arg).is_file() else boundary_builtin(arg)


def resolve_field(arg) -> DiskField:
    return field_from_csv(arg) if arg.endswith(".csv") or Path(arg).is_file() else field_builtin(arg)


# --------------------------------------------------------------------------
# output


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _json_value(x) -> str:
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    return f"{x:.17g}" if np.isfinite(x) else "null"


def render(columns: dict, fmt: str, metadata: dict) -> str:
    names = list(columns)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(names)
        for row in zip(*columns.values()):
            w.writerow([_fmt(v) for v in row])
        return buf.getvalue()
    meta = json.dumps(metadata, sort_keys=True, default=_json_default)
    cols = ", ".join(
        f"{json.dumps(k)}: [" + ", ".join(_json_value(v) for v in vals) + "]" for k, vals in columns.items()
    )
    return '{"metadata": ' + meta + ', "columns": {' + cols + "}}\n"


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


def emit(args, columns, extra_meta=None):
    meta = {
        "command": args.command,
        "alpha": getattr(args, "alpha", None),
        "spec": asdict(spec_from_args(args)),
        "versions": {
            "alphadisk": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
    }
    meta.update(extra_meta or {})
    text = render(columns, args.format, meta)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def spec_from_args(args) -> QuadratureSpec:
    base = QuadratureSpec()
    return QuadratureSpec(
        circle_nodes=args.circle_nodes or base.circle_nodes,
        radial_nodes=args.radial_nodes or base.radial_nodes,
        singular_ring_levels=args.ring_levels or base.singular_ring_levels,
        abs_tol=args.abs_tol if args.abs_tol is not None else base.abs_tol,
        rel_tol=args.rel_tol if args.rel_tol is not None else base.rel_tol,
    )


def parse_grid(text):
    try:
        nr, nt = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"grid must look like 8x16, got {text!r}") from None
    if nr < 1 or nt < 1:
        raise UsageError("grid sizes must be positive")
    return nr, nt


def polar_points(nr, nt, rmax):
    radii = rmax * (np.arange(nr) + 0.5) / nr
    th = 2 * np.pi * np.arange(nt) / nt
    return np.multiply.outer(radii, np.exp(1j * th)).ravel()


def _points(args, rmax):
    if args.point is not None:
        return np.array([complex(args.point[0], args.point[1])])
    return polar_points(*parse_grid(args.grid), rmax)


# --------------------------------------------------------------------------
# subcommands


def cmd_kernel(args) -> int:
    a = validate_alpha(args.alpha).alpha
    z = _points(args, 0.99)
    w = complex(args.w[0], args.w[1])
    cols = {k: [] for k in ("re", "im", "p_re", "p_im", "v_re", "v_im", "g_re", "g_im", "q", "h")}
    for zi in z:
        p = complex(poisson_kernel_alpha(zi, a))
        v = complex(v_kernel(zi, args.theta, a))
        g = complex(green_alpha(zi, w, a))
        q = float(pseudo_hyperbolic(zi, w))
        for k, val in zip(cols, (zi.real, zi.imag, p.real, p.imag, v.real, v.imag, g.real, g.imag, q, float(h_alpha(q, a)))):
            cols[k].append(val)
    emit(args, cols, {"w": [w.real, w.imag], "theta": args.theta})
    return EXIT_OK


def cmd_solve(args) -> int:
    a = validate_alpha(args.alpha)
    problem = DirichletProblem(a, resolve_boundary(args.f), resolve_field(args.g), spec_from_args(args))
    pts = _points(args, args.rmax)
    report = solve(problem, pts, residual_points=pts)
    cols = {
        "re": pts.real,
        "im": pts.imag,
        "u_re": report.u.real,
        "u_im": report.u.imag,
        "v_re": report.v.real,
        "v_im": report.v.imag,
        "potential_re": report.potential.real,
        "potential_im": report.potential.imag,
        "residual": report.residual,
    }
    emit(args, cols, {"f": args.f, "g": args.g, "failures": len(report.failures)})
    if report.failures:
        for i, msg in report.failures:
            print(f"point {i} ({pts[i].real:.17g}, {pts[i].imag:.17g}): {msg}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _random_pairs_admissible(n, seed, rmax=0.99, min_sep=0.01):
    rng = np.random.default_rng(seed)
    z, w = [], []
    while len(z) < n:
        zz, ww = rmax * np.sqrt(rng.uniform(size=2)) * np.exp(2j * np.pi * rng.uniform(size=2))
        if abs(zz - ww) > min_sep:
            z.append(zz)
            w.append(ww)
    return np.array(z), np.array(w)


def build_report(args):
    spec = spec_from_args(args)
    sweep = args.sweep
    if sweep == "m1":
        return m1_sweep(spec=spec)
    if sweep == "circle-power":
        return circle_power_sweep(spec=spec)
    if sweep in ("i1", "i2"):
        return lemma_sweep(sweep, args.alpha, spec=spec)
    if sweep == "green-bounds":
        z, w = _random_pairs_admissible(args.samples, args.seed)
        return verify_green_derivative_bounds(z, w, args.alpha)
    if sweep == "grin-lip":
        return grin_lip_sweep(args.alpha, resolve_field(args.g), (0.5, 0.9, 0.99), spec)
    if sweep == "hilbert":
        return hilbert_closed_form_report()
    if sweep == "conjugate-identity":
        reports = [
            conjugate_identity_check(BoundarySignal.from_rule(np.cos, 256), 0.5, spec),
            conjugate_identity_check(BoundarySignal.from_rule(lambda t: np.sin(3 * t), 256), 0.5, spec),
        ]
        first, second = reports
        first.samples = [f"cos {s}" for s in first.samples] + [f"sin3 {s}" for s in second.samples]
        first.lhs = np.concatenate([first.lhs, second.lhs])
        first.rhs = np.concatenate([first.rhs, second.rhs])
        first.ratio = np.concatenate([first.ratio, second.ratio])
        return first
    raise UsageError(f"unknown sweep {sweep!r}")


def cmd_verify(args) -> int:
    validate_alpha(args.alpha)
    report = build_report(args)
    lhs = np.asarray(report.lhs, dtype=complex)
    rhs = np.asarray(report.rhs, dtype=complex)
    cols = {
        "sample": list(report.samples),
        "lhs_re": lhs.real,
        "lhs_im": lhs.imag,
        "rhs_re": rhs.real,
        "rhs_im": rhs.imag,
        report.metric: report.ratio,
        "passed": [bool(np.isfinite(q) and q <= report.ceiling) for q in report.ratio],
    }
    emit(
        args,
        cols,
        {
            "sweep": report.name,
            "ceiling": report.ceiling,
            "max": report.max_ratio,
            "passed": report.passed,
            "diagnostics": report.diagnostics,
        },
    )
    return EXIT_OK if report.passed else EXIT_BOUND


# --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="write the table here instead of stdout")
    p.add_argument("--circle-nodes", type=int)
    p.add_argument("--radial-nodes", type=int)
    p.add_argument("--ring-levels", type=int)
    p.add_argument("--abs-tol", type=float)
    p.add_argument("--rel-tol", type=float)


def build_parser():
    ap = _Parser(prog="alphadisk", description="alpha-weighted Poisson problems on the unit disk")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    k = sub.add_parser("kernel", help="tabulate P_alpha, the v-kernel, G_alpha, q and h")
    k.add_argument("--alpha", type=float, required=True)
    k.add_argument("--grid", default="8x16", help="RADIIxANGLES polar grid inside |z| < 0.99")
    k.add_argument("--point", type=float, nargs=2, metavar=("RE", "IM"))
    k.add_argument("--w", type=float, nargs=2, default=(0.0, 0.0), metavar=("RE", "IM"), help="second Green argument")
    k.add_argument("--theta", type=float, default=0.0, help="boundary angle for the v-kernel")
    _common(k)

    s = sub.add_parser("solve", help="solve -Lbar_alpha u = g with boundary data f")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--f", required=True, help="zero|one|cos|sin|cosk:<k>|abs-sin or a theta,re,im CSV")
    s.add_argument("--g", required=True, help="zero|one|manufactured1|envelope:<beta> or an r,theta,re,im CSV")
    s.add_argument("--grid", default="4x8")
    s.add_argument("--rmax", type=float, default=0.9)
    s.add_argument("--point", type=float, nargs=2, metavar=("RE", "IM"))
    _common(s)

    v = sub.add_parser("verify", help="run a verification sweep")
    v.add_argument("sweep", choices=SWEEPS)
    v.add_argument("--alpha", type=float, default=1.0)
    v.add_argument("--g", default="envelope:1", help="field for grin-lip")
    v.add_argument("--samples", type=int, default=500, help="pairs for green-bounds")
    v.add_argument("--seed", type=int, default=0)
    _common(v)
    return ap


COMMANDS = {"kernel": cmd_kernel, "solve": cmd_solve, "verify": cmd_verify}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"alphadisk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DomainError, IntegrabilityError) as exc:
        print(f"alphadisk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AlphaDiskError, ArithmeticError) as exc:
        print(f"alphadisk: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
