"""Command-line front end.

Subcommands:

* ``eval``         -- density / fractional-derivative values on a point or
                      radius grid, one CSV row per point
* ``constants``    -- tail constants and decay exponents per branch
* ``certify``      -- bound certifications (CSV report + summary footer)
* ``convergence``  -- radius sweep with strategy, evaluation counts and
                      the ratio to the asymptotic tail

Exit codes: 0 ok, 1 certification failed, 2 domain error, 3 numerical
non-convergence.  kappa is accepted only as an exact rational string
('num/den' or an integer); decimal input is rejected so that parity
branching stays exact.  Floats are rendered with 17 significant digits
for bit-stable round-trips; rows are emitted in deterministic input
order even though grid points are evaluated by a worker pool.

Certification CSV column order (one row per grid point, footer lines
prefixed with '#'):

    d,alpha,c,kappa,t,radius,family,value,reference,ratio
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import bounds as _bounds
from .asymptotics import gradient_constant, laplacian_constant
from .errors import DomainError, NoConvergenceError, ParityError
from .kernels import (
    StableParams,
    frac_gradient_density,
    frac_laplacian_density,
    laplacian_profile_detailed,
)
from .params import KappaOrder

_WORKERS = 4

EXIT_OK = 0
EXIT_CERT_FAILED = 1
EXIT_DOMAIN = 2
EXIT_NO_CONVERGENCE = 3


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _parse_kappa(text: str) -> KappaOrder:
    if any(ch in text for ch in ".eE") and not text.lstrip("+-").isdigit():
        raise DomainError(
            f"kappa {text!r} looks like a decimal; pass an exact rational "
            f"such as '1/2' so parity branching stays exact"
        )
    return KappaOrder.parse(text)


def _parse_radius_grid(text: str) -> np.ndarray:
    """'start:stop:points[:log|lin]' -> grid array."""
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise DomainError(
            f"radius grid {text!r} must be 'start:stop:points[:log|lin]'"
        )
    start, stop, npts = float(parts[0]), float(parts[1]), int(parts[2])
    scale = parts[3] if len(parts) == 4 else "log"
    if npts < 1:
        raise DomainError("radius grid needs at least one point")
    if scale == "log":
        if start <= 0.0:
            raise DomainError("log radius grid needs start > 0")
        return np.logspace(math.log10(start), math.log10(stop), npts)
    if scale == "lin":
        return np.linspace(start, stop, npts)
    raise DomainError(f"unknown radius grid scale {scale!r}")


def _load_config(path: str) -> dict:
    try:
        import tomllib  # Python >= 3.11
    except ModuleNotFoundError:
        import tomli as tomllib
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _apply_config(argv: list[str]) -> list[str]:
    """Expand '--config file' into flags inserted right after the
    subcommand, so explicit command-line flags (parsed later) win."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise DomainError("--config needs a path")
    cfg = _load_config(argv[i + 1])
    injected = []
    for key, value in cfg.items():
        injected += [f"--{key.replace('_', '-')}", str(value)]
    # keep the '--config' tokens; argparse still records the path
    return argv[:1] + injected + argv[1:]


def _open_out(args):
    if getattr(args, "out", None):
        return open(args.out, "w", newline="")
    return sys.stdout


def _radii_from_args(args) -> np.ndarray:
    if getattr(args, "radius_grid", None):
        return _parse_radius_grid(args.radius_grid)
    if getattr(args, "radius", None) is not None:
        return np.array([float(args.radius)])
    return np.array([0.0])


# ---------------------------------------------------------------------------
# eval

def cmd_eval(args) -> int:
    kappa = _parse_kappa(args.kappa)
    params = StableParams(args.d, args.alpha, args.c)
    if not kappa.value > -params.d:
        raise DomainError(f"kappa must exceed -d = {-params.d}, got {kappa}")
    radii = _radii_from_args(args)
    t = float(args.t)
    tol = float(args.tol)
    d = params.d
    with_gradient = kappa.value > -d + 1

    grad_cols = [f"grad{j+1}_{part}" for j in range(d) for part in ("re", "im")]
    header = (
        ["d", "alpha", "c", "kappa", "t", "radius", "g", "delta_kappa_g"]
        + grad_cols
        + ["err_estimate", "strategy", "error"]
    )

    def compute(radius: float):
        x = [radius] + [0.0] * (d - 1)
        y = [0.0] * d
        try:
            ct = params.c * t
            rho = radius * ct ** (-1.0 / params.alpha)
            prof0 = laplacian_profile_detailed(d, params.alpha, 0, rho, tol)
            g = ct ** (-d / params.alpha) * prof0.value
            dk = frac_laplacian_density(params, kappa, t, x, y, tol)
            profk = laplacian_profile_detailed(d, params.alpha, kappa, rho, tol)
            if with_gradient:
                grad = frac_gradient_density(params, kappa, t, x, y, tol)
                gvals = []
                for j in range(d):
                    gvals += [float(np.real(grad[j])), float(np.imag(grad[j]))]
            else:
                gvals = [""] * (2 * d)
            err = max(prof0.err_estimate, profk.err_estimate)
            return [params.d, params.alpha, params.c, str(kappa), t, radius,
                    g, dk] + gvals + [err, profk.strategy.value, ""]
        except NoConvergenceError as exc:
            return [params.d, params.alpha, params.c, str(kappa), t, radius,
                    "", ""] + [""] * (2 * d) + ["", "", str(exc)]

    with ThreadPoolExecutor(max_workers=_WORKERS) as pool:
        rows = list(pool.map(compute, [float(r) for r in radii]))

    out = _open_out(args)
    try:
        out.write(",".join(header) + "\n")
        failed = False
        for row in rows:
            out.write(",".join(_fmt(v) for v in row) + "\n")
            failed = failed or bool(row[-1])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_NO_CONVERGENCE if failed else EXIT_OK


# ---------------------------------------------------------------------------
# constants

def cmd_constants(args) -> int:
    kappas = [_parse_kappa(tok) for tok in args.kappa.split(",")]
    d, alpha = int(args.d), float(args.alpha)
    StableParams(d, alpha)
    rows = []
    any_valid = False
    for k in kappas:
        row_count = 0
        for family, fn in (("laplacian", laplacian_constant),
                           ("gradient", gradient_constant)):
            try:
                const = fn(d, alpha, k)
            except (DomainError, ParityError):
                continue
            rows.append([d, alpha, str(k), family, const.branch.value,
                         const.value, const.decay_exponent])
            row_count += 1
        any_valid = any_valid or row_count > 0
        if row_count == 0:
            raise DomainError(
                f"kappa = {k} is outside every certified branch for d = {d}"
            )
    out = _open_out(args)
    try:
        out.write("d,alpha,kappa,family,branch,value,decay_exponent\n")
        for row in rows:
            out.write(",".join(_fmt(v) for v in row) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# ---------------------------------------------------------------------------
# certify

def cmd_certify(args) -> int:
    params = StableParams(args.d, args.alpha, args.c)
    t_list = tuple(float(tok) for tok in str(args.t).split(",")) if args.t else None
    radii = _parse_radius_grid(args.radius_grid) if args.radius_grid else None
    tol = float(args.tol)
    reports = []
    check = args.check
    if check in ("density", "all"):
        reports.append(_bounds.certify_density_bounds(
            params, t_list, radii, tol, workers=_WORKERS))
    kappa = _parse_kappa(args.kappa) if args.kappa else None
    if kappa is not None:
        if check in ("sup", "all"):
            reports.append(_bounds.certify_sup_bound(
                params, kappa, t_list, radii, tol, workers=_WORKERS))
        if check in ("classical", "all") and kappa.value > 0 and params.alpha >= 1.0:
            reports.append(_bounds.certify_classical_bounds(
                params, kappa, t_list, radii, tol, workers=_WORKERS))
        if (check in ("threshold", "all")) and args.eps:
            for eps_tok in str(args.eps).split(","):
                reports.append(_bounds.find_threshold_radius(
                    params.d, params.alpha, kappa, float(eps_tok), tol,
                    radius_grid=radii, radius_budget=float(args.radius_budget),
                    workers=_WORKERS))
    elif check in ("sup", "classical", "threshold"):
        raise DomainError(f"--check {check} requires --kappa")
    if not reports:
        raise DomainError("nothing to certify with the given flags")

    out = _open_out(args)
    try:
        for i, report in enumerate(reports):
            if i:
                out.write("\n")
            _bounds.write_report_csv(report, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CERT_FAILED


# ---------------------------------------------------------------------------
# convergence

def cmd_convergence(args) -> int:
    kappa = _parse_kappa(args.kappa)
    d, alpha = int(args.d), float(args.alpha)
    StableParams(d, alpha)
    if not kappa.value > -d:
        raise DomainError(f"kappa must exceed -d = {-d}, got {kappa}")
    radii = (_parse_radius_grid(args.radius_grid) if args.radius_grid
             else np.array([25.0, 50.0, 100.0, 200.0]))
    tol = float(args.tol)
    try:
        const = laplacian_constant(d, alpha, kappa)
    except DomainError:
        const = None

    def compute(radius: float):
        prof = laplacian_profile_detailed(d, alpha, kappa, radius, tol)
        if const is not None and radius > 0.0:
            ratio = prof.value * radius**const.decay_exponent / const.value
        else:
            ratio = ""
        return [radius, prof.value, prof.err_estimate, prof.evals,
                prof.strategy.value, ratio]

    with ThreadPoolExecutor(max_workers=_WORKERS) as pool:
        rows = list(pool.map(compute, [float(r) for r in radii]))

    out = _open_out(args)
    try:
        out.write("radius,value,err_estimate,evals,strategy,ratio_to_asymptote\n")
        for row in rows:
            out.write(",".join(_fmt(v) for v in row) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# ---------------------------------------------------------------------------

def _add_common(sp, *, kappa_required: bool):
    sp.add_argument("--d", type=int, default=1, help="space dimension")
    sp.add_argument("--alpha", type=float, default=1.0,
                    help="stability index in (0, 2)")
    sp.add_argument("--c", type=float, default=1.0, help="diffusivity")
    sp.add_argument("--kappa", type=str, required=kappa_required, default=None,
                    help="operator order as an exact rational 'num/den'")
    sp.add_argument("--tol", type=float, default=1e-7, help="quadrature tolerance")
    sp.add_argument("--out", type=str, default=None, help="output CSV path")
    sp.add_argument("--config", type=str, default=None,
                    help="TOML config mirroring the flags (flags win)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stabletail",
        description="Stable transition densities, fractional derivatives, "
                    "tail constants and bound certification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate density and derivatives")
    _add_common(p_eval, kappa_required=True)
    p_eval.add_argument("--t", type=float, default=1.0, help="time > 0")
    p_eval.add_argument("--radius", type=float, default=None,
                        help="single |x - y| value")
    p_eval.add_argument("--radius-grid", type=str, default=None,
                        help="'start:stop:points[:log|lin]'")
    p_eval.set_defaults(func=cmd_eval)

    p_const = sub.add_parser("constants", help="tail constants per branch")
    _add_common(p_const, kappa_required=True)
    p_const.set_defaults(func=cmd_constants)

    p_cert = sub.add_parser("certify", help="bound certifications")
    _add_common(p_cert, kappa_required=False)
    p_cert.add_argument("--t", type=str, default=None,
                        help="comma-separated t grid")
    p_cert.add_argument("--radius-grid", type=str, default=None)
    p_cert.add_argument("--eps", type=str, default=None,
                        help="comma-separated epsilons in (0, 1)")
    p_cert.add_argument("--radius-budget", type=float, default=1e4)
    p_cert.add_argument("--check", type=str, default="all",
                        choices=("density", "sup", "classical", "threshold", "all"))
    p_cert.set_defaults(func=cmd_certify)

    p_conv = sub.add_parser("convergence", help="radius sweep diagnostics")
    _add_common(p_conv, kappa_required=True)
    p_conv.add_argument("--radius-grid", type=str, default=None)
    p_conv.set_defaults(func=cmd_convergence)
    return parser


def _join_negative_kappa(argv):
    """argparse mistakes '-3/1' for a flag; fold it into '--kappa=-3/1'."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--kappa" and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"--kappa={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = list(argv)
    try:
        if argv:
            argv = _apply_config(argv)
        args = parser.parse_args(_join_negative_kappa(argv))
        return args.func(args)
    except ParityError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NoConvergenceError as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
