"""trace-atlas command line.

Single-shot subcommands print one JSON report envelope; sweeps print CSV.
Malformed arguments exit with status 2 (argparse usage error); errors raised
by the library exit with status 1 after printing a JSON error object.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any

import numpy as np

from . import __version__
from .errors import DomainError, ParseError, PrecisionError, TraceAtlasError
from .experiments import (
    CSV_HEADER,
    counting_measure,
    discretize,
    escape_modulus,
    escaping_family,
    weakstar_distance,
)
from .intpoly import chebyshev_shifted, discriminant, is_squarefree, parse_polynomial
from .means import fraction_str, means_report, sector_mean_bound, symmetric_mean
from .potential import (
    EXCEPTIONAL_RADIUS_TOL,
    QUADRATURE_NODES,
    CompactSetModel,
    discrete_energy,
    energy_sandwich,
    equilibrium_moment,
    equilibrium_moment_exact,
    equilibrium_quadrature,
    log_generalized_mahler,
    log_mahler,
    logplus_mass,
)
from .realroots import all_roots, default_eps, in_sector, is_totally_positive
from .search import (
    enumerate_totally_positive,
    minimal_symmetric_mean,
    records_to_jsonl,
    summary_csv,
    thread_count,
)


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return when.strftime("%Y-%m-%dT%H:%M:%SZ")


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return fraction_str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if math.isfinite(v) else None
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return x


@dataclass
class ReportEnvelope:
    command: str
    inputs: dict
    results: Any
    tolerances: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": _jsonable(self.inputs),
            "results": _jsonable(self.results),
            "provenance": {
                "tool": "trace-atlas",
                "version": __version__,
                "timestamp": _timestamp(),
                "tolerances": _jsonable(self.tolerances),
                "threads": thread_count(),
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


# --------------------------------------------------------------------------
# argument types (failures become usage errors, exit status 2)


def _poly_arg(text: str):
    try:
        return parse_polynomial(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _set_arg(text: str) -> CompactSetModel:
    try:
        return CompactSetModel.parse(text)
    except (ParseError, DomainError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, Fraction):
        return fraction_str(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


# --------------------------------------------------------------------------
# subcommands


def cmd_analyze(args) -> str:
    p = args.poly
    n = p.degree
    ms = args.m or list(range(1, n + 1))
    bad = [m for m in ms if not 1 <= m <= n]
    if bad:
        raise DomainError(f"m={bad[0]} outside 1..{n}")
    report = means_report(p, ms).to_dict()
    roots = all_roots(p)
    lm, lm_err = log_mahler(p, roots)
    sqf = is_squarefree(p)
    res: dict[str, Any] = {
        "polynomial": str(p),
        "means": report,
        "squarefree": sqf,
        "discriminant": str(discriminant(p)) if n >= 2 else None,
        "totally_positive": is_totally_positive(p) if sqf else None,
        "roots": roots.to_dict(),
        "mahler": {"value": math.exp(lm), "error_bound": math.exp(lm) * math.expm1(lm_err)},
    }
    if args.set is not None:
        lg = log_generalized_mahler(p, roots, args.set, require_unit_capacity=not args.any_capacity)
        res["generalized_mahler"] = {"set": str(args.set), "value": math.exp(lg),
                                     "error_bound": math.exp(lg) * math.expm1(lm_err)}
    res["sector"] = _sector_check(p, roots, args.gamma)
    return ReportEnvelope("analyze", _inputs(args), res, {"eps": roots.eps}).to_json()


def _sector_check(p, roots, gamma: float) -> dict:
    out: dict[str, Any] = {"gamma": gamma}
    try:
        inside = in_sector(roots, gamma)
    except PrecisionError as exc:
        out.update(in_sector=None, error=exc.to_dict())
        return out
    out["in_sector"] = inside
    if inside and p.constant != 0:
        b = sector_mean_bound(p, roots, gamma)
        out.update(lhs=b.lhs, rhs=b.rhs, slack=b.slack, holds=b.holds)
    return out


def cmd_chebyshev(args) -> str:
    interval = CompactSetModel.interval(0, 4)
    ms = args.m or [1, 2]
    header = list(CSV_HEADER) + ["ks_err"] + [f"S_{m}" for m in ms] + ["mahler_interval", "energy"]
    rows = []
    for n in args.n:
        if n < 1:
            raise DomainError("Chebyshev degree must be >= 1")
        t = chebyshev_shifted(n)
        roots = all_roots(t)
        mu = counting_measure(roots)
        ws = weakstar_distance(mu, interval, radii=(args.R,))
        s_vals = [symmetric_mean(t, m) if m <= n else "" for m in ms]
        m_e = math.exp(log_generalized_mahler(t, roots, interval))
        energy = discrete_energy(mu, args.R)
        rows.append(ws.csv_row() + [_ks_error(roots, interval)] + s_vals + [m_e, energy])
    if args.format == "json":
        results = {"rows": [dict(zip(header, [_cell(v) for v in row])) for row in rows]}
        return ReportEnvelope("chebyshev", _inputs(args), results,
                              {"eps": {str(n): default_eps(n) for n in args.n}}).to_json()
    return _csv_text(header, rows)


def _ks_error(roots, interval) -> float:
    """Bound on the KS error caused by the root radii (plus rounding)."""
    from .experiments import arcsine_cdf
    x = roots.roots.real
    r = roots.radii
    spread = arcsine_cdf(interval, x + r) - arcsine_cdf(interval, x - r)
    return float(spread.max(initial=0.0)) + 1e-14


def cmd_moments(args) -> str:
    model = args.set
    res = []
    for m in args.m:
        if m < 0:
            raise DomainError("moment order must be nonnegative")
        val = equilibrium_moment(model, m)
        quad = equilibrium_quadrature(model, lambda x, m=m: x ** m, QUADRATURE_NODES)
        row = {"m": m, "value": val, "quadrature": quad, "error_bound": abs(complex(val) - quad)}
        if model.kind == "interval":
            row["exact"] = equilibrium_moment_exact(model, m)
        res.append(row)
    return ReportEnvelope("moments", _inputs(args), {"set": model.to_dict(), "moments": res},
                          {"quadrature_nodes": QUADRATURE_NODES}).to_json()


def cmd_energy(args) -> str:
    seq = [(p, all_roots(p)) for p in args.poly]
    sand = energy_sandwich(seq, args.R)
    p, roots = seq[-1]
    mu = counting_measure(roots)
    res = {
        "polynomial": str(p),
        "energy": sand.energy,
        "logplus_mass": logplus_mass(mu),
        "sandwich": sand.to_dict(),
    }
    return ReportEnvelope("energy", _inputs(args), res,
                          {"exceptional_radius_tol": EXCEPTIONAL_RADIUS_TOL,
                           "eps": default_eps(p.degree)}).to_json()


ESCAPE_HEADER = ("p", "modulus", "mass_R", "mahler", "mahler_rel_err", "log_H", "energy",
                 "lower", "upper", "holds")


def cmd_escape(args) -> str:
    rows = []
    for p in args.p:
        P = escaping_family(p)
        roots = all_roots(P)
        lm, _ = log_mahler(P, roots)
        sand = energy_sandwich([(P, roots)], args.R)
        rel = abs(math.exp(lm - math.lgamma(p + 1)) - 1.0)
        rows.append([p, escape_modulus(p), sand.tau_R, math.exp(lm), rel, sand.log_H, sand.energy,
                     sand.lower, sand.upper, sand.holds])
    if args.format == "json":
        results = {"rows": [dict(zip(ESCAPE_HEADER, [_cell(v) for v in row])) for row in rows]}
        return ReportEnvelope("escape", _inputs(args), results).to_json()
    return _csv_text(ESCAPE_HEADER, rows)


def cmd_search(args) -> str:
    records = enumerate_totally_positive(args.degree, args.trace_max)
    if args.format == "jsonl":
        return records_to_jsonl(records)
    if args.format == "csv":
        return summary_csv([(args.degree, args.trace_max, records)])
    best = minimal_symmetric_mean(args.degree, args.m, args.trace_max, records,
                                  irreducible=not args.include_reducible)
    res = {"count": len(records), "minimal": best.to_dict(), "m": args.m}
    return ReportEnvelope("search", _inputs(args), res).to_json()


def cmd_discretize(args) -> str:
    try:
        with open(args.atoms, encoding="utf-8") as fh:
            raw = json.load(fh)
        atoms = [(complex(float(a["re"]), float(a["im"])), float(a["w"])) for a in raw]
    except OSError as exc:
        raise DomainError(f"cannot read atoms file: {exc}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"atoms file must be a JSON list of {{re, im, w}} objects ({exc})",
                         token=str(args.atoms)) from None
    d = discretize(atoms, args.L, args.rho_scale)
    res = {
        "measure": d.measure.to_dict(),
        "counts": d.counts,
        "rho": d.rho,
        "displacement_bound": d.displacement_bound,
    }
    return ReportEnvelope("discretize", _inputs(args), res, {"rho_scale": args.rho_scale}).to_json()


def _inputs(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in ("func", "command"):
            continue
        if isinstance(v, list):
            v = [x.to_text() if hasattr(x, "to_text") else x for x in v]
        elif hasattr(v, "to_text"):
            v = v.to_text()
        elif isinstance(v, CompactSetModel):
            v = str(v)
        out[k] = v
    return out


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trace-atlas",
                                 description="Symmetric means, Mahler measures and energies of integer polynomials.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="means, Mahler measures and sector check for one polynomial")
    a.add_argument("--poly", type=_poly_arg, required=True, help="coefficients a0,a1,...,an")
    a.add_argument("--m", type=_int_list, default=None)
    a.add_argument("--set", type=_set_arg, default=None, help="disk:cx,cy,r or interval:a,b")
    a.add_argument("--gamma", type=_positive_float, default=math.pi / 4)
    a.add_argument("--any-capacity", action="store_true", help="allow sets of capacity != 1")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("chebyshev", help="sweep over shifted Chebyshev polynomials t_n")
    c.add_argument("--n", type=_int_list, required=True)
    c.add_argument("--m", type=_int_list, default=None)
    c.add_argument("--R", type=_positive_float, default=5.0)
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.set_defaults(func=cmd_chebyshev)

    m = sub.add_parser("moments", help="equilibrium-measure moments")
    m.add_argument("--set", type=_set_arg, required=True)
    m.add_argument("--m", type=_int_list, required=True)
    m.set_defaults(func=cmd_moments)

    e = sub.add_parser("energy", help="discrete energy and the energy sandwich")
    e.add_argument("--poly", type=_poly_arg, action="append", required=True,
                   help="repeat to give a sequence; the last one is measured")
    e.add_argument("--R", type=_positive_float, required=True)
    e.set_defaults(func=cmd_energy)

    s = sub.add_parser("escape", help="z^p - p! table")
    s.add_argument("--p", type=_int_list, required=True)
    s.add_argument("--R", type=_positive_float, required=True)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.set_defaults(func=cmd_escape)

    r = sub.add_parser("search", help="totally positive polynomials of small degree")
    r.add_argument("--degree", type=int, required=True)
    r.add_argument("--trace-max", type=int, required=True)
    r.add_argument("--m", type=int, default=1)
    r.add_argument("--format", choices=("jsonl", "csv", "json"), default="jsonl")
    r.add_argument("--include-reducible", action="store_true",
                   help="let reducible polynomials compete for the minimum (json format)")
    r.set_defaults(func=cmd_search)

    d = sub.add_parser("discretize", help="replace atoms by points of mass 1/L")
    d.add_argument("--atoms", required=True, help='JSON file: [{"re":..,"im":..,"w":..}, ...]')
    d.add_argument("--L", type=int, required=True)
    d.add_argument("--rho-scale", type=_positive_float, default=2.0 ** -20)
    d.set_defaults(func=cmd_discretize)
    return ap


_NEGATIVE_VALUE = re.compile(r"^-\d[\d,.eE+-]*$")


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Rewrite ``--poly -1,2`` as ``--poly=-1,2``.

    argparse only treats plain numbers like ``-1`` as values; a comma list
    with a leading minus would otherwise be read as an unknown option.
    """
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE_VALUE.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = _attach_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out = args.func(args)
    except TraceAtlasError as exc:
        sys.stdout.write(json.dumps({"command": args.command, **exc.to_dict()}, sort_keys=True) + "\n")
        return 1
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
