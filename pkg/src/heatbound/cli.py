"""Command-line interface: constants, single bounds, verification sweeps,
crossover comparisons, cutoff tables and spectrum caching.

Exit codes: 0 success, 1 bound violation in a sweep, 2 usage or config
error, 3 numerical failure (oracle disagreement / tolerance not met).
Reports are byte-stable for a fixed config and seed: fixed column order,
17-significant-digit floats, no timestamps.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .ball_spectrum import (
    build_spectrum,
    load_spectrum_csv,
    neumann_trace,
    save_spectrum_csv,
    trace_weighted_integral,
)
from .exact_kernels import BC, FullLine, HalfLine, Interval, SeparableDomain, product_kernel_batch
from .heat_bounds import (
    BoundQuery,
    NeumannTraceParts,
    TimeWindowError,
    boundary_error_bound,
    canonical_error_bound,
    classical_dirichlet_bound,
    diagonal_hull_ratio,
    dirichlet_error_bound,
    neumann_error_bound,
)
from .polynomials import interpolating_cutoff
from .spectral_constants import DimensionParams, compute_constants, default_smoothing_order, free_green_diag

_THMS = ("11", "22", "dirichlet", "vdb-hull", "vdb-diag", "vdb-offdiag", "neumann41")

USAGE_ERROR = 2
VIOLATION = 1
NUMERICAL_ERROR = 3


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _emit(rows: list[dict], fmt: str, out: str | None) -> None:
    """Write rows as CSV (fixed column order from the first row) or JSON."""
    if fmt == "json":
        text = json.dumps(rows, indent=2, default=float) + "\n"
    else:
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            for r in rows:
                writer.writerow({k: _fmt(v) if isinstance(v, float) else v for k, v in r.items()})
        text = buf.getvalue()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _spectrum_for(d: int, lambda_max: float):
    """Build or load a cached spectrum table (HEATBOUND_CACHE_DIR)."""
    cache_dir = os.environ.get("HEATBOUND_CACHE_DIR")
    path = None
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        path = os.path.join(cache_dir, f"spectrum_d{d}_L{lambda_max:g}.csv")
        if os.path.exists(path):
            return load_spectrum_csv(path), path
    table = build_spectrum(d, lambda_max)
    if path:
        save_spectrum_csv(table, path)
    return table, path


def cmd_constants(args) -> int:
    d = args.dim
    m = args.m if args.m is not None else default_smoothing_order(d)
    p = DimensionParams(d=d, m=m)
    c = compute_constants(p)
    row = {
        "d": d,
        "m": m,
        "m_d": default_smoothing_order(d),
        **{k: v for k, v in c.as_dict().items()},
        "free_green_diag": free_green_diag(p),
    }
    _emit([row], args.format, args.out)
    return 0


def _neumann_parts(d: int, m: int) -> NeumannTraceParts:
    lam_max = 4000.0
    table, _ = _spectrum_for(d, lam_max)
    upper = trace_weighted_integral(table, m, tol=5e-2)
    tr1, tr1_err = neumann_trace(table, 1.0)
    return NeumannTraceParts(
        d=d, m=m, weighted_integral_upper=upper, trace_at_one_upper=tr1 + tr1_err
    )


def _evaluate_bound(thm: str, q: BoundQuery, delta: float | None):
    if thm == "11":
        return canonical_error_bound(q)
    if thm == "22":
        return boundary_error_bound(q)
    if thm == "dirichlet":
        return dirichlet_error_bound(q)
    if thm == "vdb-hull":
        return classical_dirichlet_bound(q, delta=delta, variant="hull")
    if thm == "vdb-diag":
        return classical_dirichlet_bound(q, variant="diag")
    if thm == "vdb-offdiag":
        return classical_dirichlet_bound(q, variant="offdiag")
    if thm == "neumann41":
        parts = _neumann_parts(q.d, q.order)
        return neumann_error_bound(q, parts)
    raise ValueError(f"unknown bound selector {thm!r}")


def cmd_bound(args) -> int:
    try:
        q = BoundQuery(
            d=args.dim, rho_x=args.rho_x, rho_y=args.rho_y, t=args.t,
            dist=args.dist, m=args.m,
        )
        res = _evaluate_bound(args.thm, q, args.delta)
    except TimeWindowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    row = {
        "thm": args.thm, "d": q.d, "m": q.order,
        "rho_x": q.rho_x, "rho_y": q.rho_y, "dist": q.dist, "t": q.t,
        "value": res.value,
    }
    row.update({f"factor_{k}": v for k, v in res.breakdown.items()})
    _emit([row], args.format, args.out)
    return 0


# --- verification sweeps ----------------------------------------------------

def _parse_bc(token: str) -> BC:
    token = token.strip()
    if token.upper() == "D":
        return BC.dirichlet()
    if token.upper() == "N":
        return BC.neumann()
    if token.upper().startswith("R"):
        _, _, sig = token.partition(":")
        return BC.robin(float(sig) if sig else 0.0)
    raise ValueError(f"cannot parse wall condition {token!r}")


def _domains_from_config(cfg: configparser.ConfigParser) -> list[tuple[str, SeparableDomain]]:
    """All sweep domains of a config: one fixed geometry, one domain per
    wall-condition entry in the bc list."""
    kind = cfg.get("domain", "kind")
    d = cfg.getint("domain", "dim")
    bc_field = cfg.get("domain", "bc")
    out = []
    if kind == "halfspace":
        for token in bc_field.split():
            bc = _parse_bc(token)
            out.append((token, SeparableDomain((HalfLine(bc),) + (FullLine(),) * (d - 1))))
        return out
    if kind == "box":
        lengths = [float(v) for v in cfg.get("domain", "lengths", fallback="").split()] or [1.0] * d
        if len(lengths) != d:
            raise ValueError("box needs one length per coordinate")
        for group in bc_field.split(";"):
            walls = group.split()
            if len(walls) != d:
                raise ValueError(
                    f"each bc group needs one wall pair per coordinate, got {group!r}"
                )
            factors = []
            for spec, L in zip(walls, lengths):
                if len(spec) != 2:
                    raise ValueError(f"wall pair must be two letters, got {spec!r}")
                factors.append(Interval(L, _parse_bc(spec[0]), _parse_bc(spec[1])))
            out.append((group.strip(), SeparableDomain(tuple(factors))))
        return out
    raise ValueError(f"unknown domain kind {kind!r}")


def _coordinate_range(f) -> tuple[float, float]:
    if isinstance(f, FullLine):
        return -1.0, 1.0
    if isinstance(f, HalfLine):
        return 0.05, 2.0
    return 0.02 * f.length, 0.98 * f.length


def _sample_points(dom: SeparableDomain, n: int, rule: str, rng: np.random.Generator):
    """Interior sample pairs, random (seeded) or a deterministic lattice."""
    d = dom.dimension
    X = np.empty((n, d))
    Y = np.empty((n, d))
    for i, f in enumerate(dom.factors):
        lo, hi = _coordinate_range(f)
        if rule == "random":
            X[:, i] = rng.uniform(lo, hi, n)
            Y[:, i] = rng.uniform(lo, hi, n)
        else:
            base = np.linspace(lo, hi, n, endpoint=False) + 0.5 * (hi - lo) / n
            X[:, i] = np.roll(base, i * (n // (d + 1) + 1))
            Y[:, i] = np.roll(base[::-1], i * (n // (d + 2) + 1))
    return X, Y


def run_verification(cfg: configparser.ConfigParser, seed_override: int | None = None) -> tuple[list[dict], dict]:
    """Execute one sweep config; returns (rows, summary).

    The geometry (points and times) is shared across the bc list, so each
    row set checks the same bound values against every wall condition.
    """
    domains = _domains_from_config(cfg)
    n = cfg.getint("sampling", "samples")
    seed = seed_override if seed_override is not None else cfg.getint("sampling", "seed")
    rule = cfg.get("sampling", "rule", fallback="random")
    if rule not in ("random", "grid"):
        raise ValueError(f"sampling rule must be random or grid, got {rule!r}")
    fracs = [float(v) for v in cfg.get("sampling", "t_fractions", fallback="0.05 0.2 1.0").split()]
    thms = cfg.get("bounds", "thms", fallback="11").split()
    m_override = cfg.get("bounds", "m", fallback="").strip()
    m = int(m_override) if m_override else None
    for thm in thms:
        if thm not in _THMS:
            raise ValueError(f"unknown bound selector {thm!r}")
    rng = np.random.default_rng(seed)
    geo_dom = domains[0][1]
    X, Y = _sample_points(geo_dom, n, rule, rng)
    rho_x = np.array([geo_dom.boundary_distance(x) for x in X])
    rho_y = np.array([geo_dom.boundary_distance(y) for y in Y])

    rows: list[dict] = []
    worst_ratio = 0.0
    violations = 0
    d = geo_dom.dimension
    idx = 0
    for frac in fracs:
        T = frac * (rho_x + rho_y) ** 2 / 8.0
        queries = [
            BoundQuery(
                d=d, rho_x=float(rho_x[j]), rho_y=float(rho_y[j]), t=float(T[j]),
                dist=float(np.linalg.norm(X[j] - Y[j])), m=m,
            )
            for j in range(n)
        ]
        # bound values are geometry-only: computed once, shared across bc
        bound_vals = {thm: [_evaluate_bound(thm, q, delta=None).value for q in queries] for thm in thms}
        for bc_label, dom in domains:
            _, devs, _, _ = product_kernel_batch(dom, X, Y, T)
            for j, q in enumerate(queries):
                exact = abs(float(devs[j]))
                row = {
                    "index": idx,
                    "bc": bc_label,
                    "t": q.t,
                    "rho_x": q.rho_x,
                    "rho_y": q.rho_y,
                    "dist": q.dist,
                    "exact_err": exact,
                }
                ok = True
                for thm in thms:
                    val = bound_vals[thm][j]
                    row[f"bound_{thm.replace('-', '_')}"] = val
                    ratio = exact / val if val > 0 else math.inf if exact > 0 else 0.0
                    row[f"ratio_{thm.replace('-', '_')}"] = ratio
                    worst_ratio = max(worst_ratio, ratio)
                    if exact > val * (1.0 + 1e-9):
                        ok = False
                row["pass"] = ok
                if not ok:
                    violations += 1
                rows.append(row)
                idx += 1
    summary = {
        "rows": len(rows),
        "violations": violations,
        "max_ratio_exact_over_bound": worst_ratio,
    }
    return rows, summary


def cmd_verify(args) -> int:
    cfg = configparser.ConfigParser()
    read = cfg.read(args.config)
    if not read:
        print(f"error: cannot read config {args.config}", file=sys.stderr)
        return USAGE_ERROR
    try:
        rows, summary = run_verification(cfg, seed_override=args.seed)
    except (ValueError, configparser.Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except RuntimeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR
    fmt = cfg.get("output", "format", fallback="csv")
    _emit(rows, fmt, args.out)
    print(
        f"# rows={summary['rows']} violations={summary['violations']} "
        f"max_ratio={summary['max_ratio_exact_over_bound']:.3e}",
        file=sys.stderr,
    )
    if summary["violations"]:
        for r in rows:
            if not r["pass"]:
                print(
                    "replay: heatbound bound --thm 11 "
                    f"--dim {args_dim_of(cfg)} --rho-x {_fmt(r['rho_x'])} "
                    f"--rho-y {_fmt(r['rho_y'])} --dist {_fmt(r['dist'])} --t {_fmt(r['t'])}",
                    file=sys.stderr,
                )
        return VIOLATION
    return 0


def args_dim_of(cfg) -> int:
    return cfg.getint("domain", "dim")


def find_hull_crossover(d: int, rho: float = 1.0) -> float | None:
    """Largest t/rho^2 in (0, 1/8] below which the composite diagonal bound
    beats the classical hull bound; None when the composite never wins.

    The ratio is evaluated with the common exponential stripped, so the
    crossover is located even where both raw bounds underflow.
    """
    fracs = np.geomspace(1e-16, 0.125, 400)
    ratios = np.array([diagonal_hull_ratio(d, rho, f * rho * rho) for f in fracs])
    below = ratios < 1.0
    if not below.any():
        return None
    if below.all():
        return 0.125
    i = int(np.nonzero(below)[0][-1])  # last frac with ratio < 1
    lo, hi = fracs[i], fracs[i + 1]
    for _ in range(80):
        mid = math.sqrt(lo * hi)
        if diagonal_hull_ratio(d, rho, mid * rho * rho) < 1.0:
            lo = mid
        else:
            hi = mid
    return float(math.sqrt(lo * hi))


def _deficit_rate_curve(d: int, rho: float, t: float) -> float:
    """t * log(composite / free diagonal): a reference curve only.

    Tends to -rho^2 as t -> 0 (the known decay rate of the relative
    Dirichlet deficit); computed in log space so it stays finite where the
    raw bound underflows.  Reported, never asserted.
    """
    from .heat_bounds import default_cutoff
    from .jm_bound import jm_laurent_coefficients

    md = default_smoothing_order(d)
    c = compute_constants(DimensionParams(d=d, m=md))
    pref = c.c5 * rho ** (-d) + c.c6
    poly = sum(
        coef * t**p for p, coef in jm_laurent_coefficients(md, _cutoff_for(md), 2.0 * rho).items()
    )
    log_bound_over_free = (
        math.log(pref * poly)
        - math.log(2.0 * math.sqrt(math.pi * t))
        + (d / 2.0) * math.log(4.0 * math.pi * t)
        - rho * rho / t
    )
    return t * log_bound_over_free


def _cutoff_for(m: int):
    return interpolating_cutoff(2 * m)


def cmd_compare(args) -> int:
    """Composite bound vs the classical hull bound on the diagonal."""
    rho = args.rho
    d = args.dim
    fracs = np.geomspace(args.t_min, 0.125, args.points)
    rows = []
    for frac in fracs:
        t = frac * rho * rho
        ratio = diagonal_hull_ratio(d, rho, t)
        q = BoundQuery(d=d, rho_x=rho, rho_y=rho, t=t, dist=0.0)
        comp = canonical_error_bound(q).value
        hull = classical_dirichlet_bound(q, delta=rho, variant="hull").value
        rows.append(
            {
                "t_over_rho_sq": float(frac),
                "composite": comp,
                "hull": hull,
                "ratio": ratio,
                "deficit_rate": _deficit_rate_curve(d, rho, t),
                "deficit_rate_limit": -rho * rho,
            }
        )
    _emit(rows, args.format, args.out)
    crossover = find_hull_crossover(d, rho)
    if crossover is not None:
        print(f"# composite beats hull for t/rho^2 <= {crossover:.9g}", file=sys.stderr)
    else:
        print("# no crossover in (0, 1/8]", file=sys.stderr)
    return 0


def cmd_cutoff_table(args) -> int:
    spec = interpolating_cutoff(args.n)
    coeffs = spec.base_polynomial.coefficients
    row = {
        "n": args.n,
        "degree": spec.base_polynomial.degree,
        "coefficients": " ".join(str(c) for c in coeffs),
    }
    for j, mj in enumerate(spec.sup_norms):
        row[f"M{j}"] = mj
    _emit([row], args.format, args.out)
    return 0


def cmd_spectrum(args) -> int:
    table, path = _spectrum_for(args.dim, args.lambda_max)
    if args.out:
        save_spectrum_csv(table, args.out)
        path = args.out
    row = {
        "dimension": table.dimension,
        "lambda_max": table.lambda_max,
        "modes": table.size,
        "distinct": int(table.lambdas.size),
        "cached_to": path or "",
    }
    _emit([row], args.format, None)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="heatbound",
        description="Explicit boundary-independence bounds for heat kernels, "
        "with verification against exactly solvable domains.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="print the universal constant set")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("bound", help="evaluate one bound with factor breakdown")
    p.add_argument("--thm", choices=_THMS, required=True,
                   help="11: composite at default order; 22: composite at --m; "
                   "dirichlet: Dirichlet-only sharpening; vdb-*: classical "
                   "comparison bounds; neumann41: trace-weighted bound")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--rho-x", dest="rho_x", type=float, required=True)
    p.add_argument("--rho-y", dest="rho_y", type=float, required=True)
    p.add_argument("--dist", type=float, default=0.0)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="run a sweep config and report rows")
    p.add_argument("config")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compare", help="composite vs classical hull bound on the diagonal")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--t-min", dest="t_min", type=float, default=1e-4)
    p.add_argument("--points", type=int, default=60)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("cutoff-table", help="print a cutoff polynomial and its sup norms")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_cutoff_table)

    p = sub.add_parser("spectrum", help="build (and cache) a disk/ball spectrum table")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--lambda-max", dest="lambda_max", type=float, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_spectrum)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; propagate cleanly
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except (ValueError, TimeWindowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except RuntimeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
