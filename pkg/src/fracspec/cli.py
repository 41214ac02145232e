"""Command-line front end.

Subcommands tabulate spectral densities, covariance curves, space-time
kernels, and special functions; simulate stationary paths; run the
validation suite; and emit the long-format spectral figure data.

Exit codes
----------
0   success
1   numerical failure: a valid request whose computation failed or, for
    ``validate``, a run with failing checks; the message names the failing
    operation and carries its error payload
2   argument or validation error; the message goes to the error stream and
    nothing is written to the output stream

Output contract
---------------
CSV uses a header row, comma separators, and LF line endings; JSON is one
object per curve.  Floats are printed in shortest round-trip form, so
repeated runs with identical configuration are byte-identical.  Output
goes to stdout unless ``--output`` names a file; a relative ``--output``
is resolved against ``$FRACSPEC_OUTPUT_DIR`` when that variable is set.
Diagnostics (including the ``validate`` human summary) go to stderr only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from ._validation import STATISTICAL_SEED, run_validation_suite
from .covariance import DEFAULT_NODE_COUNT, covariance
from .errors import (AccuracyError, AliasingGuardError, DomainError,
                     ModelValidationError, NumericalError)
from .kernels import KernelSpec, heat_kernel
from .models import Family, Grid, spectral_density, validate_model
from .specfun import (StableIndex, airy_ai, bessel_k, gamma_fn,
                      onesided_stable_density, symmetric_stable_density)
from .synth import DEFAULT_ALIAS_GUARD, synthesize
from .transforms import TransformPlan, inverse_fourier_spectral

__all__ = ["figure_data", "main", "run"]

DEFAULT_MU = 1.0
DEFAULT_SIGMA2 = 1.0
DEFAULT_SAMPLE_COUNT = 2 ** 14

_FAMILIES = {"weyl": Family.WeylFractional, "even": Family.EvenOrder,
             "odd": Family.OddOrder}
_METHODS = {"auto": "auto", "quadrature": "quadrature",
            "closed": "closed_form", "closed_form": "closed_form",
            "fourier": "fourier_oracle", "fourier_oracle": "fourier_oracle"}

# 1/0.05 steps reach +/-5 exactly, so the emitted grid is symmetric
_FIGURE_ALPHAS = (0.25, 0.5, 0.75, 1.0)
_FIGURE_BETAS = (0.5, 1.0, 2.0)
_FIGURE_TAU = Grid(start=-5.0, step=0.05, count=201)


# --------------------------------------------------------------------------
# formatting helpers


def _fmt(value) -> str:
    return repr(float(value))


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _curve_payload(model_dict: dict, quantity: str, method: str,
                   grid_dict: dict, values: np.ndarray) -> dict:
    payload = {"model": model_dict, "quantity": quantity, "method": method,
               "grid": grid_dict}
    vals = np.asarray(values)
    if np.iscomplexobj(vals):
        payload["values"] = [float(v) for v in vals.real]
        payload["values_imag"] = [float(v) for v in vals.imag]
    else:
        payload["values"] = [float(v) for v in vals]
    return payload


def _resolve_output(path: Optional[str]) -> Optional[Path]:
    if path is None:
        return None
    p = Path(path)
    if not p.is_absolute():
        base = os.environ.get("FRACSPEC_OUTPUT_DIR")
        if base:
            p = Path(base) / p
    return p


def _emit(text: str, dest: Optional[Path]) -> None:
    if dest is None:
        sys.stdout.write(text)
        return
    if dest.parent != Path():
        dest.parent.mkdir(parents=True, exist_ok=True)
    with open(dest, "w", newline="") as fh:
        fh.write(text)


# --------------------------------------------------------------------------
# argument plumbing


def _build_model(args):
    family = _FAMILIES[args.family]
    alpha = args.alpha
    if family is Family.WeylFractional and alpha is None:
        alpha = 1.0
    return validate_model(family=family, mu=args.mu, beta=args.beta,
                          sigma2=args.sigma2, alpha=alpha,
                          n=getattr(args, "n", None),
                          kappa=getattr(args, "kappa", None))


def _axis_points(args, name: str):
    """Resolve the single-point flag vs the --start/--step/--count grid."""
    single = getattr(args, name)
    grid_flags = (args.start, args.step, args.count)
    if single is not None and any(v is not None for v in grid_flags):
        raise DomainError(
            f"give either --{name} or --start/--step/--count, not both")
    if single is not None:
        value = float(single)
        return (np.array([value]),
                {"start": value, "step": 0.0, "count": 1}, None)
    if any(v is None for v in grid_flags):
        raise DomainError(
            f"either --{name} or all of --start, --step, --count is required")
    grid = Grid(start=args.start, step=args.step, count=args.count)
    return (grid.points(),
            {"start": grid.start, "step": grid.step, "count": grid.count},
            grid)


def _add_model_arguments(sub, families=("weyl", "even", "odd")):
    sub.add_argument("--family", required=True, choices=sorted(families),
                     help="model family")
    sub.add_argument("--mu", type=float, default=DEFAULT_MU,
                     help="positive location parameter mu")
    sub.add_argument("--beta", type=float, required=True,
                     help="positive exponent beta")
    sub.add_argument("--sigma2", type=float, default=DEFAULT_SIGMA2,
                     help="positive noise intensity sigma^2")
    sub.add_argument("--alpha", type=float, default=None,
                     help="fractional order in (0, 1]; weyl family only "
                          "(default 1.0 for --family weyl)")
    sub.add_argument("--n", type=int, default=None,
                     help="positive integer order parameter; even family "
                          "(order 2n) and odd family (order 2n+1)")
    sub.add_argument("--kappa", type=int, default=None, choices=(-1, 1),
                     help="orientation sign; odd family only")


def _add_axis_arguments(sub, name: str, what: str):
    sub.add_argument(f"--{name}", type=float, default=None,
                     help=f"single {what} to evaluate at")
    sub.add_argument("--start", type=float, default=None,
                     help=f"first {what} of an evaluation grid")
    sub.add_argument("--step", type=float, default=None,
                     help="grid step (> 0)")
    sub.add_argument("--count", type=int, default=None,
                     help="grid point count (>= 2)")


def _add_output_arguments(sub, formats=("csv", "json")):
    if formats:
        sub.add_argument("--format", choices=formats, default=formats[0],
                         help="output format")
    sub.add_argument("--output", default=None,
                     help="output file (default: stdout); a relative path "
                          "is placed under $FRACSPEC_OUTPUT_DIR when set")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracspec",
        description="Spectral densities, covariance functions, kernels, "
                    "simulation, and validation for three families of "
                    "fractional stochastic models.")
    subs = parser.add_subparsers(dest="subcommand", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    sub = subs.add_parser(
        "spectral", formatter_class=fmt,
        help="tabulate the spectral density f(tau)",
        description="Tabulate the spectral density f(tau); complex-valued "
                    "for the odd family (CSV gains an f_imag column).")
    _add_model_arguments(sub)
    _add_axis_arguments(sub, "tau", "frequency")
    _add_output_arguments(sub)

    sub = subs.add_parser(
        "covariance", formatter_class=fmt,
        help="tabulate the covariance Cov(h)",
        description="Tabulate the covariance at one lag or on a lag grid.")
    _add_model_arguments(sub)
    _add_axis_arguments(sub, "h", "lag")
    sub.add_argument("--method", choices=sorted(_METHODS), default="auto",
                     help="evaluation route (closed/fourier abbreviate "
                          "closed_form/fourier_oracle)")
    sub.add_argument("--nodes", type=int, default=DEFAULT_NODE_COUNT,
                     help="starting gamma-quadrature node count for the "
                          "mixture routes (escalation doubles it up to "
                          "three times)")
    sub.add_argument("--samples", type=int, default=DEFAULT_SAMPLE_COUNT,
                     help="transform sample count for the fourier route "
                          "(power of two)")
    _add_output_arguments(sub)

    sub = subs.add_parser(
        "kernel", formatter_class=fmt,
        help="tabulate the order-m space-time kernel u(x; w)",
        description="Tabulate the fundamental solution u(x; w) of the "
                    "order-m heat-type equation at fixed w.")
    sub.add_argument("--order", type=int, required=True,
                     help="spatial-derivative order m >= 2")
    sub.add_argument("--kappa", type=int, default=1, choices=(-1, 1),
                     help="orientation sign; odd orders only")
    sub.add_argument("--w", type=float, required=True,
                     help="positive time argument w")
    _add_axis_arguments(sub, "x", "spatial point")
    _add_output_arguments(sub)

    sub = subs.add_parser(
        "specfun", formatter_class=fmt,
        help="tabulate a special function",
        description="Tabulate gamma, bessel_k, airy_ai, or a stable "
                    "density over x.")
    sub.add_argument("--fn", required=True,
                     choices=("airy_ai", "bessel_k", "gamma",
                              "stable_onesided", "stable_symmetric"),
                     help="which function to tabulate")
    sub.add_argument("--nu", type=float, default=None,
                     help="order (bessel_k only; required there)")
    sub.add_argument("--alpha", type=float, default=None,
                     help="stable index (stable_* only; required there)")
    sub.add_argument("--s", type=float, default=1.0,
                     help="one-sided stable scale (stable_onesided)")
    sub.add_argument("--scale", type=float, default=1.0,
                     help="symmetric stable scale (stable_symmetric)")
    sub.add_argument("--w", type=float, default=1.0,
                     help="symmetric stable time argument (stable_symmetric)")
    _add_axis_arguments(sub, "x", "argument")
    _add_output_arguments(sub)

    sub = subs.add_parser(
        "simulate", formatter_class=fmt,
        help="synthesize a stationary Gaussian path",
        description="Synthesize a stationary Gaussian sample path "
                    "matching the model's spectral density (weyl and even "
                    "families; finite variance required).  Deterministic "
                    "for a fixed seed.")
    _add_model_arguments(sub, families=("weyl", "even"))
    sub.add_argument("--count", type=int, required=True,
                     help="number of samples (>= 256)")
    sub.add_argument("--dt", type=float, required=True,
                     help="positive sampling step")
    sub.add_argument("--seed", type=int, default=0,
                     help="counter-based generator seed")
    sub.add_argument("--alias-guard", type=float, default=DEFAULT_ALIAS_GUARD,
                     help="reject dt unless f(pi/dt) <= guard * f(0); "
                          "pass inf to disable")
    _add_output_arguments(sub)

    sub = subs.add_parser(
        "validate", formatter_class=fmt,
        help="run the validation suite",
        description="Run the validation suite: method-agreement panel, "
                    "duality round trips, and special-function identities, "
                    "plus flag-gated extras.  The machine-readable JSON "
                    "report goes to stdout (or --output); the human "
                    "summary goes to stderr.  Exit 0 iff every check "
                    "passes.")
    sub.add_argument("--quick", action="store_true",
                     help="run the fast subset (completes within a minute)")
    sub.add_argument("--statistical", action="store_true",
                     help="include the seeded synthesis checks "
                          "(empirical covariance and periodogram)")
    sub.add_argument("--include-printed-even-form", action="store_true",
                     help="include the documented-discrepancy check of the "
                          "superseded order-2 closed form (reported as an "
                          "expected discrepancy; does not fail the run)")
    sub.add_argument("--seed", type=int, default=STATISTICAL_SEED,
                     help="seed for the statistical checks")
    _add_output_arguments(sub, formats=())

    sub = subs.add_parser(
        "figure", formatter_class=fmt,
        help="emit the spectral figure data grid",
        description="Emit long-format CSV (columns alpha,beta,tau,f) of "
                    "the fractional spectral density over a parameter "
                    "grid.")
    sub.add_argument("--alpha", default=",".join(_fmt(a) for a in _FIGURE_ALPHAS),
                     help="comma-separated fractional orders")
    sub.add_argument("--beta", default=",".join(_fmt(b) for b in _FIGURE_BETAS),
                     help="comma-separated exponents")
    sub.add_argument("--mu", type=float, default=DEFAULT_MU,
                     help="positive location parameter mu")
    sub.add_argument("--sigma2", type=float, default=DEFAULT_SIGMA2,
                     help="positive noise intensity sigma^2")
    sub.add_argument("--tau-start", type=float, default=_FIGURE_TAU.start,
                     help="first frequency of the grid")
    sub.add_argument("--tau-step", type=float, default=_FIGURE_TAU.step,
                     help="frequency step (> 0)")
    sub.add_argument("--tau-count", type=int, default=_FIGURE_TAU.count,
                     help="frequency point count (>= 2)")
    _add_output_arguments(sub, formats=())
    return parser


# --------------------------------------------------------------------------
# subcommand handlers (each returns the full output text)


def _handle_spectral(args) -> str:
    model = _build_model(args)
    pts, grid_dict, _ = _axis_points(args, "tau")
    values = np.asarray(spectral_density(model, pts))
    if args.format == "json":
        return _json(_curve_payload(model.to_dict(), "spectral", "formula",
                                    grid_dict, values))
    if np.iscomplexobj(values):
        return _csv(("tau", "f_real", "f_imag"),
                    zip(pts, values.real, values.imag))
    return _csv(("tau", "f"), zip(pts, values))


def _handle_covariance(args) -> str:
    model = _build_model(args)
    method = _METHODS[args.method]
    pts, grid_dict, grid = _axis_points(args, "h")
    if method == "fourier_oracle":
        plan = TransformPlan(
            frequency_cutoff=TransformPlan.auto(model).frequency_cutoff,
            sample_count=args.samples)
        if grid is None:
            h = float(pts[0])
            two = Grid(start=h, step=max(abs(h), 1.0), count=2)
            values = np.asarray(
                inverse_fourier_spectral(model, two, plan).values[:1])
        else:
            values = np.asarray(
                inverse_fourier_spectral(model, grid, plan).values)
    else:
        values = np.array([covariance(model, float(h), method,
                                      node_count=args.nodes)
                           for h in pts])
    if args.format == "json":
        return _json(_curve_payload(model.to_dict(), "covariance", method,
                                    grid_dict, values))
    return _csv(("h", "cov"), zip(pts, values))


def _handle_kernel(args) -> str:
    spec = KernelSpec(order=args.order, kappa=args.kappa)
    if not (isinstance(args.w, float) and args.w > 0.0):
        raise DomainError(f"--w must be positive, got {args.w!r}")
    pts, grid_dict, _ = _axis_points(args, "x")
    values = np.array([heat_kernel(spec, float(x), args.w) for x in pts])
    if args.format == "json":
        model_dict = {"order": spec.order, "kappa": spec.kappa, "w": args.w}
        return _json(_curve_payload(model_dict, "kernel", "heat_kernel",
                                    grid_dict, values))
    return _csv(("x", "u"), zip(pts, values))


def _specfun_scalar(args):
    """Return (model descriptor, pointwise evaluator) for --fn."""
    fn = args.fn
    if fn == "gamma":
        return {"fn": fn}, gamma_fn
    if fn == "airy_ai":
        return {"fn": fn}, airy_ai
    if fn == "bessel_k":
        if args.nu is None:
            raise DomainError("--nu is required for --fn bessel_k")
        return {"fn": fn, "nu": args.nu}, lambda x: bessel_k(args.nu, x)
    if args.alpha is None:
        raise DomainError(f"--alpha is required for --fn {fn}")
    if fn == "stable_onesided":
        index = StableIndex.one_sided(args.alpha)
        return ({"fn": fn, "alpha": index.alpha, "s": args.s},
                lambda x: onesided_stable_density(index, x, args.s))
    index = StableIndex.symmetric(args.alpha)
    return ({"fn": fn, "alpha": index.alpha, "scale": args.scale,
             "w": args.w},
            lambda x: symmetric_stable_density(index, args.scale, x, args.w))


def _handle_specfun(args) -> str:
    model_dict, evaluate = _specfun_scalar(args)
    pts, grid_dict, _ = _axis_points(args, "x")
    values = np.array([evaluate(float(x)) for x in pts])
    if args.format == "json":
        return _json(_curve_payload(model_dict, "specfun", args.fn,
                                    grid_dict, values))
    return _csv(("x", "value"), zip(pts, values))


def _handle_simulate(args) -> str:
    model = _build_model(args)
    path = synthesize(model, args.count, args.dt, args.seed,
                      alias_guard=args.alias_guard)
    times = path.dt * np.arange(len(path.values))
    if args.format == "json":
        payload = _curve_payload(
            model.to_dict(), "path", "spectral_synthesis",
            {"start": 0.0, "step": path.dt, "count": len(path.values)},
            path.values)
        payload["seed"] = path.seed
        return _json(payload)
    return _csv(("t", "x"), zip(times, path.values))


def _handle_figure(args) -> str:
    try:
        alphas = [float(tok) for tok in str(args.alpha).split(",") if tok.strip()]
        betas = [float(tok) for tok in str(args.beta).split(",") if tok.strip()]
    except ValueError as exc:
        raise DomainError(f"--alpha/--beta must be comma-separated reals: {exc}")
    if not alphas or not betas:
        raise DomainError("--alpha and --beta must each list at least one value")
    tau_grid = Grid(start=args.tau_start, step=args.tau_step,
                    count=args.tau_count)
    return figure_data(alphas, betas, args.mu, args.sigma2, tau_grid)


def _run_validate(args) -> int:
    report = run_validation_suite(
        quick=args.quick, statistical=args.statistical,
        include_printed_even_form=args.include_printed_even_form,
        statistical_seed=args.seed)
    payload = {"records": report.to_payload(),
               "elapsed_seconds": report.elapsed_seconds,
               "all_passed": report.all_passed}
    _emit(_json(payload), _resolve_output(args.output))
    print(report.human_summary(), file=sys.stderr)
    return 0 if report.all_passed else 1


_HANDLERS = {"spectral": _handle_spectral, "covariance": _handle_covariance,
             "kernel": _handle_kernel, "specfun": _handle_specfun,
             "simulate": _handle_simulate, "figure": _handle_figure}

_OP_LABELS = {"spectral": "spectral_density", "covariance": "covariance",
              "kernel": "heat_kernel", "simulate": "synthesize",
              "figure": "figure_data"}


# --------------------------------------------------------------------------
# public operations


def figure_data(alpha_list, beta_list, mu, sigma2, tau_grid: Grid) -> str:
    """Long-format CSV (columns alpha,beta,tau,f) of the fractional
    spectral density over the Cartesian product of parameter lists.

    Every curve is even in tau and maximal at tau = 0 with value
    sigma^2/mu^(2 beta); rows are ordered by (alpha, beta, grid index).
    Parameter validation errors propagate.
    """
    if not isinstance(tau_grid, Grid):
        raise DomainError(f"tau_grid must be a Grid, got {type(tau_grid).__name__}")
    taus = tau_grid.points()
    rows = []
    for alpha in alpha_list:
        for beta in beta_list:
            model = validate_model(family=Family.WeylFractional, mu=mu,
                                   beta=beta, sigma2=sigma2, alpha=alpha)
            values = np.asarray(spectral_density(model, taus))
            rows.extend(zip([model.alpha] * len(taus),
                            [model.beta] * len(taus), taus, values))
    return _csv(("alpha", "beta", "tau", "f"), rows)


def _describe_numerical(exc: NumericalError) -> str:
    parts = [f"{type(exc).__name__}: {exc}"]
    if isinstance(exc, AccuracyError) and exc.estimate is not None:
        parts.append(f"estimate={exc.estimate!r} "
                     f"error_estimate={exc.error_estimate!r}")
    if isinstance(exc, AliasingGuardError):
        parts.append(f"dt_bound={exc.dt_bound!r}")
    return "; ".join(parts)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv`` and execute one subcommand; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 2
    op = args.subcommand
    try:
        if op == "validate":
            return _run_validate(args)
        text = _HANDLERS[op](args)
    except (ModelValidationError, DomainError) as exc:
        print(f"fracspec {op}: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        label = args.fn if op == "specfun" else _OP_LABELS[op]
        print(f"fracspec {op}: numerical failure in {label}: "
              f"{_describe_numerical(exc)}", file=sys.stderr)
        return 1
    _emit(text, _resolve_output(args.output))
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))
