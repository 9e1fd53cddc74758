"""
Command-Line Interface

Subcommands:
    kmat inspect, potential sample|verify|dim, spectral genus,
    surface generate|verify, twoboundary analyze, suite run, sweep run

Exit codes: 0 pass, 1 verification failure, 2 usage, config or I/O error.
Tolerances must be > 0; a tolerance of 0 is a config error (exit 2).
"""

import argparse
import json
import logging
import uuid
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from src.frames import commutant_decompose, dressing_matrix, dressing_reconstruct, two_boundary_report
from src.kmatrix import (
    KMatrix,
    k_eigen,
    k_inverse_residues,
    k_kernels,
    k_product_decompose,
    k_roots,
    product_reconstruction_residual,
    near_null_set,
)
from src.loops import UnitCircleGrid
from src.potentials import (
    expected_dimension,
    expected_freedom_split,
    freedom_split,
    ksym_constraints,
    ksym_nullspace,
    ksym_residual,
    ksym_sample,
    load_potential,
    offdiag_sample,
    save_potential,
    structural_identities,
)
from src.spectral import spectral_curve
from src.utils import ResultStore, setup_logging
from src.utils.errors import CMCError, CommutantError
from .config import RunConfig, load_config
from .pipeline import compute_frames, load_input, run_pipeline, surface_config, surface_residuals
from .suite import list_checks, run_suite
from .sweep import run_sweep, sweep_passed, sweep_records
from .writers import to_jsonable, write_report

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

EXIT_CODES_HELP = """exit codes:
  0  all checks passed
  1  a check failed or the computation raised a library error
  2  usage, configuration or I/O error (every tolerance must be > 0; 0 is rejected)"""


def _emit(args, payload: Dict[str, Any]):
    """Print the result and write it to --json when requested."""
    data = to_jsonable(payload)
    print(json.dumps(data, indent=2))
    if getattr(args, "json", None):
        write_report(args.json, data)


def _k_json(K: KMatrix) -> Dict[str, Any]:
    roots = k_roots(K)
    out: Dict[str, Any] = {"A": K.A, "B": K.B, "roots": roots.to_json()}
    eig = k_eigen(K)
    out["mu"] = {"mu_minus": eig.mu_minus.to_json(), "mu_plus": eig.mu_plus.to_json()}
    if not roots.degenerate:
        v, v_perp = k_kernels(K)
        res = k_inverse_residues(K)
        out["kernels"] = [v.tolist(), v_perp.tolist()]
        out["residues"] = [
            {"pole": complex(p), "scalar": complex(s), "matrix": np.asarray(r, dtype=complex).tolist()}
            for p, s, r in zip(res.poles, res.scalar, res.residues)
        ]
    return out


def cmd_kmat_inspect(args, config: RunConfig) -> int:
    K = KMatrix(args.A, args.B)
    payload = _k_json(K)
    if args.A1 is not None and args.B1 is not None:
        K1 = KMatrix(args.A1, args.B1)
        dec = k_product_decompose(K, K1)
        grid = UnitCircleGrid(64).points
        mask = ~(near_null_set(K, grid) | near_null_set(K1, grid))
        payload["product"] = {
            "p_numerator": dec.p_num.to_json(),
            "q_numerator": dec.q_num.to_json(),
            "denominator": dec.den.to_json(),
            "eta": dec.eta.to_json(),
            "reconstruction_residual": product_reconstruction_residual(K, K1, grid[mask]),
        }
    _emit(args, payload)
    return EXIT_PASS


def cmd_potential_sample(args, config: RunConfig) -> int:
    seed = config.seed if args.seed is None else args.seed
    K = KMatrix.from_rational(args.A, args.B)
    if args.offdiag:
        xi = offdiag_sample(args.degree, K, seed)
    else:
        xi = ksym_sample(args.degree, K, seed, exact=not args.float)
    path = save_potential(args.out, xi, K, seed=seed)
    _emit(args, {"path": str(path), **xi.to_json(K)})
    return EXIT_PASS


def cmd_potential_verify(args, config: RunConfig) -> int:
    xi, K = load_input(args.path, args.A, args.B)
    if K is None:
        raise ValueError("no K-matrix: the file stores none and --A/--B were not given")
    tol = config.tolerances.structural
    residual = ksym_residual(xi, K)
    payload: Dict[str, Any] = {"degree": xi.d, "ksym_residual": residual, "tolerance": tol}
    if residual > tol:
        payload["passed"] = False
        _emit(args, payload)
        return EXIT_FAIL
    identities = structural_identities(xi, K)
    payload["identities"] = identities
    payload["passed"] = max(identities.values()) <= tol
    _emit(args, payload)
    return EXIT_PASS if payload["passed"] else EXIT_FAIL


def cmd_potential_dim(args, config: RunConfig) -> int:
    K = KMatrix.from_rational(args.A, args.B)
    system = ksym_constraints(args.degree, K, exact=not args.float)
    ns = ksym_nullspace(system)
    split = freedom_split(system, ns)
    payload = {
        "degree": args.degree,
        "dimension": ns.dimension,
        "expected": expected_dimension(args.degree),
        "freedom_split": list(split),
        "expected_split": list(expected_freedom_split(args.degree)),
        "exact": ns.exact,
    }
    payload["passed"] = (ns.dimension == payload["expected"]
                         and tuple(split) == expected_freedom_split(args.degree))
    _emit(args, payload)
    return EXIT_PASS if payload["passed"] else EXIT_FAIL


def cmd_spectral_genus(args, config: RunConfig) -> int:
    xi, _ = load_potential(args.path)
    exact = True if args.exact else (False if args.float else None)
    curve = spectral_curve(xi, exact=exact)
    _emit(args, curve.to_json())
    return EXIT_PASS


def _surface_settings(args, config: RunConfig) -> RunConfig:
    return surface_config(config, grid=args.grid, domain=args.domain, sym_point=args.sym_point,
                          H=args.H, modes=args.modes)


def cmd_surface_generate(args, config: RunConfig) -> int:
    config = _surface_settings(args, config)
    out_dir, obj_path = args.out, None
    if args.out and Path(args.out).suffix.lower() == ".obj":
        out_dir, obj_path = str(Path(args.out).parent), args.out
    result = run_pipeline(config, args.path, out_dir, args.A, args.B,
                          obj_path=obj_path, report_path=args.report, omega_path=args.omega)
    _emit(args, result.to_json())
    return EXIT_PASS if result.passed else EXIT_FAIL


def cmd_surface_verify(args, config: RunConfig) -> int:
    config = _surface_settings(args, config)
    xi, K = load_input(args.path, args.A, args.B)
    second = None
    if args.A1 is not None or args.B1 is not None or args.y1 is not None:
        if args.A1 is None or args.B1 is None or args.y1 is None:
            raise ValueError("--A1, --B1 and --y1 must be given together")
        second = (KMatrix(args.A1, args.B1), args.y1)
    frames = compute_frames(xi, config)
    result = surface_residuals(xi, K, frames, config, second=second)
    _emit(args, {**result.to_json(), "tolerances": config.tolerances.model_dump()})
    return EXIT_PASS if result.passed else EXIT_FAIL


def cmd_twoboundary_analyze(args, config: RunConfig) -> int:
    xi, _ = load_potential(args.path)
    K0, K1 = KMatrix(args.A0, args.B0), KMatrix(args.A1, args.B1)
    frames = compute_frames(xi, config)
    dd = dressing_matrix(frames, K0, K1, args.y1)
    report = two_boundary_report(xi, K0, K1, args.y1, frames)
    payload: Dict[str, Any] = {"y1": dd.y1, "dressing": dd.residuals, "report": report}
    try:
        commutant = commutant_decompose(dd, xi, tol=config.tolerances.commutant)
        dressing_reconstruct(dd, xi, commutant)
        payload["commutant"] = commutant.residuals
        payload["reconstruct"] = dd.residuals["reconstruct"]
    except CommutantError as e:
        logger.warning(f"Commutant decomposition skipped: {e}")
        payload["commutant"] = None
    tol = config.tolerances
    passed = (dd.residuals["det"] <= tol.dressing and dd.residuals["unitarity"] <= tol.dressing
              and max(report["dressed_phi_sym"], report["dressed_b_sym"]) <= tol.dressed_sym)
    payload["passed"] = passed
    _emit(args, payload)
    return EXIT_PASS if passed else EXIT_FAIL


def cmd_suite_run(args, config: RunConfig) -> int:
    if args.list:
        for entry in list_checks():
            print(f"{entry['test_id']:40s} {entry['anchor']}")
        return EXIT_PASS
    if args.profile:
        config = config.model_copy(update={"profile": args.profile})
    report = run_suite(config, only=args.only)
    path = Path(args.report or Path(config.output.output_dir) / f"suite_{config.seed}.json")
    write_report(path, report.to_json())
    if config.output.store and not args.no_store:
        store = ResultStore(config.output.db_path)
        store.save_suite_run(config.seed, report.passed, len(report.entries), str(path))
        store.close()
    print(f"{len(report.entries) - report.n_failed}/{len(report.entries)} checks passed; report: {path}")
    if args.json:
        write_report(args.json, report.to_json())
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_sweep_run(args, config: RunConfig) -> int:
    settings = config.sweep
    updates: Dict[str, Any] = {}
    if args.mode:
        updates["mode"] = args.mode
    if args.degrees is not None:
        updates["degrees"] = args.degrees
    if updates:
        settings = settings.model_validate({**settings.model_dump(), **updates})
    table = run_sweep(settings, config.seed)
    out = Path(args.out or Path(config.output.output_dir) / f"sweep_{settings.mode}.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(out, index=False)
    logger.info(f"✓ Sweep table written to {out}")
    records = sweep_records(table)
    if config.output.store and not args.no_store:
        store = ResultStore(config.output.db_path)
        store.save_sweep_rows(uuid.uuid4().hex, records)
        store.close()
    print(table.to_string(index=False) if not table.empty else "empty sweep")
    if args.json:
        write_report(args.json, {"mode": settings.mode, "rows": records})
    return EXIT_PASS if sweep_passed(table) else EXIT_FAIL


def _grid_size(text: str) -> Tuple[int, int]:
    try:
        nx, ny = (int(part) for part in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NXxNY, e.g. 64x64, got {text!r}")
    return nx, ny


def _float_list(*counts: int) -> Callable[[str], List[float]]:
    def parse(text: str) -> List[float]:
        try:
            values = [float(part) for part in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
        if len(values) not in counts:
            raise argparse.ArgumentTypeError(f"expected {' or '.join(map(str, counts))} values, got {len(values)}")
        return values
    return parse


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("--json", metavar="PATH", help="also write the result as JSON")
    parser.add_argument("--seed", type=int, help="64-bit seed (overrides the config)")
    parser.add_argument("--tol-file", metavar="PATH", help="tolerance JSON file")
    parser.add_argument("--config", metavar="PATH", help="full RunConfig JSON file")
    parser.add_argument("--log-dir", metavar="DIR", help="log directory (overrides the config)")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="run.py", description="Integrable boundary conditions of CMC surfaces",
                                     epilog=EXIT_CODES_HELP,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    groups = parser.add_subparsers(dest="group", required=True)

    kmat = groups.add_parser("kmat").add_subparsers(dest="action", required=True)
    p = kmat.add_parser("inspect", help="roots, kernels, eigen data and residues of K")
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--A1", type=float)
    p.add_argument("--B1", type=float)
    p.set_defaults(handler=cmd_kmat_inspect)

    pot = groups.add_parser("potential").add_subparsers(dest="action", required=True)
    p = pot.add_parser("sample", help="random K-symmetric potential")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--A", required=True, help="rational, e.g. 1/3")
    p.add_argument("--B", required=True)
    p.add_argument("--offdiag", action="store_true")
    p.add_argument("--float", action="store_true", help="float rank instead of exact")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_potential_sample)
    p = pot.add_parser("verify", help="K-symmetry and structural identities of a potential file")
    p.add_argument("path")
    p.add_argument("--A", type=float)
    p.add_argument("--B", type=float)
    p.set_defaults(handler=cmd_potential_verify)
    p = pot.add_parser("dim", help="dimension of the K-symmetric potentials of degree d")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--float", action="store_true")
    p.set_defaults(handler=cmd_potential_dim)

    spec = groups.add_parser("spectral").add_subparsers(dest="action", required=True)
    p = spec.add_parser("genus", help="branch points and genus of the spectral curve")
    p.add_argument("path")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--float", action="store_true")
    p.set_defaults(handler=cmd_spectral_genus)

    surf = groups.add_parser("surface").add_subparsers(dest="action", required=True)
    for name, handler in (("generate", cmd_surface_generate), ("verify", cmd_surface_verify)):
        p = surf.add_parser(name)
        p.add_argument("path")
        p.add_argument("--A", type=float)
        p.add_argument("--B", type=float)
        p.add_argument("--grid", type=_grid_size, metavar="NXxNY", help="domain grid, e.g. 64x64")
        p.add_argument("--domain", type=_float_list(4), metavar="X0,X1,Y0,Y1",
                       help="domain rectangle; write --domain=-1,1,-1,1 for negative bounds")
        p.add_argument("--sym-point", type=_float_list(1, 2), metavar="RE[,IM]",
                       help="λ₀ of the Sym–Bobenko formula")
        p.add_argument("--H", type=float, help="mean curvature")
        p.add_argument("--modes", type=int, help="Iwasawa truncation")
        if name == "generate":
            p.add_argument("--out", help="output directory, or the OBJ path when it ends in .obj")
            p.add_argument("--report", metavar="PATH", help="report JSON path")
            p.add_argument("--omega", metavar="PATH", help="conformal factor CSV path")
        else:
            p.add_argument("--A1", type=float)
            p.add_argument("--B1", type=float)
            p.add_argument("--y1", type=float)
        p.set_defaults(handler=handler)

    two = groups.add_parser("twoboundary").add_subparsers(dest="action", required=True)
    p = two.add_parser("analyze", help="dressing diagnostics at a second boundary line")
    p.add_argument("path")
    for name in ("A0", "B0", "A1", "B1", "y1"):
        p.add_argument(f"--{name}", type=float, required=True)
    p.set_defaults(handler=cmd_twoboundary_analyze)

    suite = groups.add_parser("suite").add_subparsers(dest="action", required=True)
    p = suite.add_parser("run", help="run the named verification checks")
    p.add_argument("--list", action="store_true", help="print check ids and anchors only")
    p.add_argument("--profile", choices=["quick", "standard"])
    p.add_argument("--only", nargs="+", metavar="PREFIX")
    p.add_argument("--report", metavar="PATH")
    p.add_argument("--no-store", action="store_true")
    p.set_defaults(handler=cmd_suite_run)

    sweep = groups.add_parser("sweep").add_subparsers(dest="action", required=True)
    p = sweep.add_parser("run", help="parameter sweep to CSV")
    p.add_argument("--mode", choices=["generic", "offdiag"])
    p.add_argument("--degrees", type=int, nargs="*")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--no-store", action="store_true")
    p.set_defaults(handler=cmd_sweep_run)

    for sub in (kmat, pot, spec, surf, two, suite, sweep):
        for action_parser in sub.choices.values():
            _common(action_parser)
    return parser


def _configure(args) -> RunConfig:
    config = load_config(tol_file=args.tol_file, config_file=args.config)
    updates: Dict[str, Any] = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.log_level:
        updates["log_level"] = args.log_level
    if args.log_dir:
        updates["output"] = config.output.model_copy(update={"log_dir": args.log_dir})
    return config.model_copy(update=updates) if updates else config


def main(argv: Optional[List[str]] = None, configure_logging: bool = True) -> int:
    """Parse, configure and dispatch; returns the exit code."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_PASS if e.code == 0 else EXIT_USAGE
    try:
        config = _configure(args)
    except (OSError, ValueError, ValidationError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_USAGE
    if configure_logging:
        setup_logging(log_dir=config.output.log_dir, log_level=config.log_level)
    handler: Callable[[Any, RunConfig], int] = args.handler
    logger.info("=" * 60)
    logger.info(f"{args.group} {args.action}")
    logger.info("=" * 60)
    verbose = logger.isEnabledFor(logging.DEBUG)
    try:
        return handler(args, config)
    except CMCError as e:
        logger.error(f"{type(e).__name__}: {e}", exc_info=verbose)
        return EXIT_FAIL
    except (OSError, KeyError, ValueError, ValidationError) as e:
        logger.error(f"{type(e).__name__}: {e}", exc_info=verbose)
        return EXIT_USAGE
    finally:
        logger.info("=" * 60)
