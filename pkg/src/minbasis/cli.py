"""Command-line front end producing text and JSON analysis reports.

Exit codes: 0 when a report was produced (verdicts included), 1 when a
certify-style command ran with --strict and the verdict was negative, 2 on
invalid input or an operation whose preconditions fail.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import dual as dual_mod
from . import fullsyl as fullsyl_mod
from . import lify as lify_mod
from . import minimal as minimal_mod
from . import oracle as oracle_mod
from . import robust as robust_mod
from .errors import MinBasisError
from .polymat import PolyMat, load, to_dict

PROG = "minbasis"


def _resolve_tol(args) -> float | None:
    if getattr(args, "tol", None) is not None:
        return args.tol
    env = os.environ.get("MINBASIS_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            raise MinBasisError(f"MINBASIS_TOL is not a number: {env!r}")
    return None


def _digest(P: PolyMat) -> dict:
    return {
        "rows": P.rows,
        "cols": P.cols,
        "degree_bound": P.degree_bound,
        "field": P.field,
    }


def _tol_context(tol: float | None) -> dict:
    return {
        "tol": tol,
        "policy": "explicit" if tol is not None else "max(rows,cols)*eps*sigma1",
    }


def _emit(args, command: str, input_digest, results: dict, tol: float | None,
          started: float) -> None:
    report = {
        "command": command,
        "input": input_digest,
        "results": results,
        "tolerances": _tol_context(tol),
        "wall_time": time.perf_counter() - started,
    }
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True, default=_json_default))
    else:
        _print_text(report)


def _json_default(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


def _print_text(report: dict, indent: int = 0) -> None:
    pad = "  " * indent
    for key, value in report.items():
        if isinstance(value, dict):
            print(f"{pad}{key}:")
            _print_text(value, indent + 1)
        elif isinstance(value, (list, tuple)) and value and isinstance(value[0], dict):
            print(f"{pad}{key}:")
            for item in value:
                _print_text(item, indent + 1)
                print()
        else:
            if isinstance(value, float):
                value = f"{value:.12g}"
            print(f"{pad}{key}: {value}")


# -- subcommand bodies -----------------------------------------------------------


def _cmd_analyze(args) -> int:
    started = time.perf_counter()
    tol = _resolve_tol(args)
    M = load(args.file)
    cert = minimal_mod.certify_minimal_basis(M, tol=tol)
    profile = (
        cert.profile
        if args.kmax is None
        else minimal_mod.rank_profile(M, k_max=args.kmax, tol=tol)
    )
    results = {
        "ranks": list(profile.ranks),
        "nullities": list(profile.nullities),
        "alphas": list(profile.alphas),
        "d_prime": profile.d_prime,
        "normal_rank_full": profile.normal_rank_full,
        "minimal_indices": (
            minimal_mod.indices_from_profile(profile)
            if profile.normal_rank_full and profile.d_prime is not None
            else None
        ),
        "certificate": _cert_dict(cert),
    }
    _emit(args, "analyze", _digest(M), results, tol, started)
    return 0


def _cert_dict(cert) -> dict:
    return {
        "is_minimal_basis": cert.is_minimal_basis,
        "reason": cert.reason,
        "hr_rank": cert.hr_rank,
        "d_prime": cert.d_prime,
        "degree_sum_expected": cert.degree_sum_expected,
        "degree_sum_observed": cert.degree_sum_observed,
        "marginal": cert.marginal,
    }


def _cmd_certify(args) -> int:
    started = time.perf_counter()
    tol = _resolve_tol(args)
    M = load(args.file)
    cert = minimal_mod.certify_minimal_basis(M, tol=tol)
    _emit(args, "certify", _digest(M), _cert_dict(cert), tol, started)
    return 0 if cert.is_minimal_basis or not args.strict else 1


def _cmd_fullsyl(args) -> int:
    started = time.perf_counter()
    tol = _resolve_tol(args)
    M = load(args.file)
    report = fullsyl_mod.has_full_sylvester_rank(M, tol=tol)
    results = {
        "has_full_sylvester_rank": report.has_full_sylvester_rank,
        "k_prime": report.k_prime_t.k_prime,
        "t": report.k_prime_t.t,
        "checked_ranks": [
            {"k": c.k, "rank": c.rank, "required": c.required, "kind": c.kind}
            for c in report.checked_ranks
        ],
        "predicted_indices": list(report.predicted_indices),
        "margin": report.margin,
    }
    _emit(args, "fullsyl", _digest(M), results, tol, started)
    return 0 if report.has_full_sylvester_rank or not args.strict else 1


def _cmd_radius(args) -> int:
    started = time.perf_counter()
    tol = _resolve_tol(args)
    M = load(args.file)
    if args.kind == "fullsyl":
        report = robust_mod.robustness_radius_fullsyl(M, tol=tol)
    else:
        report = robust_mod.robustness_radius_minimal(M, scan_extra=args.scan_extra, tol=tol)
    _emit(args, "radius", _digest(M), report.to_dict(), tol, started)
    if not args.json:
        print(f"radius = {report.radius:.6g} at k = {report.k_used}")
    return 0


def _cmd_dual(args) -> int:
    started = time.perf_counter()
    tol = _resolve_tol(args)
    M = load(args.file)
    pair = dual_mod.dual_minimal_basis(M, tol=tol)
    from .polymat import row_degrees

    results = {
        "row_degrees": row_degrees(pair.N),
        "residual": pair.residual,
        "k_prime": pair.k_prime_t.k_prime,
        "t": pair.k_prime_t.t,
        "dual_basis": to_dict(pair.N),
    }
    _emit(args, "dual", _digest(M), results, tol, started)
    return 0


def _cmd_perturb(args) -> int:
    started = time.perf_counter()
    tol = _resolve_tol(args)
    M = load(args.file)
    delta_M = load(args.delta)
    if args.dual_file:
        N = load(args.dual_file)
        pair = dual_mod.verify_duality(M, N, tol=tol)
        if not pair.is_valid:
            raise MinBasisError("supplied dual basis failed verification: "
                                + "; ".join(pair.failures))
    else:
        pair = dual_mod.dual_minimal_basis(M, tol=tol)
    report = dual_mod.propagate_perturbation(pair, delta_M, tol=tol)
    results = report.to_dict()
    results["delta_N"] = to_dict(report.delta_N)
    _emit(args, "perturb", _digest(M), results, tol, started)
    return 0


def _cmd_generic(args) -> int:
    started = time.perf_counter()
    tol = _resolve_tol(args)
    result = fullsyl_mod.genericity_experiment(
        args.m,
        args.n,
        args.d,
        trials=args.trials,
        seed=args.seed,
        dist=args.dist,
        field_tag=args.field,
        zero_leading=args.zero_leading,
        tol=tol,
    )
    digest = {"m": args.m, "n": args.n, "d": args.d, "field": args.field}
    _emit(args, "generic", digest, result.to_dict(), tol, started)
    return 0


def _cmd_lify(args) -> int:
    started = time.perf_counter()
    tol = _resolve_tol(args)
    K = load(args.k_file)
    M = load(args.m_file)
    lif = lify_mod.build_lification(K, M, tol=tol)
    results = {
        "k_prime": lif.k_prime,
        "ell": lif.ell,
        "p_rows": lif.P.rows,
        "p_cols": lif.P.cols,
        "p_degree_bound": lif.P.degree_bound,
        "dual_residual": lif.pair.residual,
        "recovered_P": to_dict(lif.P),
    }
    if args.dk and args.dm:
        delta_K, delta_M = load(args.dk), load(args.dm)
        report = lify_mod.backward_error_map(lif, delta_K, delta_M, tol=tol)
        results["backward_error"] = report.to_dict()
        results["index_shift_check"] = lify_mod.minimal_index_shift_check(
            lif, delta_K, delta_M, tol=tol
        )
    elif args.dk or args.dm:
        raise MinBasisError("--dk and --dm must be given together")
    _emit(args, "lify", _digest(M), results, tol, started)
    return 0


def _cmd_oracle_rank(args) -> int:
    started = time.perf_counter()
    M = load(args.file)
    profile = oracle_mod.exact_rank_profile(M, k_max=args.kmax)
    results = {
        "ranks": list(profile.ranks),
        "nullities": list(profile.nullities),
        "alphas": list(profile.alphas),
        "d_prime": profile.d_prime,
        "normal_rank_full": profile.normal_rank_full,
        "minimal_indices": (
            minimal_mod.indices_from_profile(profile)
            if profile.normal_rank_full and profile.d_prime is not None
            else None
        ),
    }
    _emit(args, "oracle-rank", _digest(M), results, None, started)
    return 0


# -- argument parsing --------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Minimal-basis analysis of polynomial matrices via Sylvester ranks.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--tol", type=float, default=None,
                        help="rank tolerance (overrides MINBASIS_TOL)")
    common.add_argument("--seed", type=int, default=0, help="RNG seed")
    common.add_argument("--strict", action="store_true",
                        help="exit 1 when a certify-style verdict is negative")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common],
                       help="rank profile, index counts, and certificate")
    p.add_argument("file")
    p.add_argument("--kmax", type=int, default=None)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("certify", parents=[common], help="minimal-basis certificate")
    p.add_argument("file")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("fullsyl", parents=[common], help="full-Sylvester-rank test")
    p.add_argument("file")
    p.set_defaults(func=_cmd_fullsyl)

    p = sub.add_parser("radius", parents=[common], help="robustness radius")
    p.add_argument("file")
    p.add_argument("--kind", choices=["minimal", "fullsyl"], default="minimal")
    p.add_argument("--scan-extra", type=int, default=3)
    p.set_defaults(func=_cmd_radius)

    p = sub.add_parser("dual", parents=[common], help="extract a dual minimal basis")
    p.add_argument("file")
    p.set_defaults(func=_cmd_dual)

    p = sub.add_parser("perturb", parents=[common],
                       help="propagate a perturbation to the dual basis")
    p.add_argument("file")
    p.add_argument("delta")
    p.add_argument("--dual", dest="dual_file", default=None,
                   help="use this dual basis instead of extracting one")
    p.set_defaults(func=_cmd_perturb)

    p = sub.add_parser("generic", parents=[common],
                       help="Monte Carlo full-Sylvester-rank frequency")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--dist", choices=["gaussian", "uniform"], default="gaussian")
    p.add_argument("--field", choices=["real", "complex"], default="real")
    p.add_argument("--zero-leading", action="store_true",
                   help="sample the degenerate stratum with zero leading coefficient")
    p.set_defaults(func=_cmd_generic)

    p = sub.add_parser("lify", parents=[common],
                       help="assemble a strong l-ification and recover P")
    p.add_argument("k_file")
    p.add_argument("m_file")
    p.add_argument("--dk", default=None, help="perturbation of K (JSON file)")
    p.add_argument("--dm", default=None, help="perturbation of M (JSON file)")
    p.set_defaults(func=_cmd_lify)

    p = sub.add_parser("oracle-rank", parents=[common],
                       help="exact rational rank profile")
    p.add_argument("file")
    p.add_argument("--kmax", type=int, default=None)
    p.set_defaults(func=_cmd_oracle_rank)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MinBasisError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
