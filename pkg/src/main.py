"""
Tool_fermiwit - Entanglement witnesses for three fermions in a Fermi gas

Main entry point for density matrices, witness evaluation and validation,
linear programs, bound checks and geometry scans.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .config import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DETECTION_THRESHOLD,
    KF_STEP_1D,
    KF_STEP_2D,
    OUTPUT_DIR,
    REFINE_ITERATIONS,
    ROTATION_GRID,
    THETA_POINTS,
)
from .data import ScanRequest, run_scan
from .lp import (
    COMBOS,
    SYSTEMS,
    InfeasibleError,
    UnboundedError,
    constraint_set,
    derived_constraints,
    dump_constraints,
    feasible_region,
    validate_witness,
    verify_bound,
)
from .models import (
    PANEL_BY_NAME,
    ClassTarget,
    GeometryConfig,
    NifgCoefficients,
    WitnessFamily,
    WitnessSpec,
    build_rho3,
    classify,
    coefficients_from_geometry,
    entanglement_radius_diagnostics,
    minimize_over_rotations,
    purity_bound_check,
    rho3_eigenvalues,
    validity,
)

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_LP = 3


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValueError(f"Expected comma-separated numbers, got '{text}'")


def _banner(title: str) -> None:
    print()
    print("=" * 60)
    print(f"  {title}")
    print("=" * 60)
    print()


def _geometry(args) -> GeometryConfig:
    if args.geom == "1d":
        if args.kfx is None:
            raise ValueError("1d geometry needs --kfx")
        return GeometryConfig.one_d(args.kfr, args.kfx)
    if args.theta is None:
        raise ValueError("2d geometry needs --theta")
    return GeometryConfig.two_d(args.kfr, args.theta)


def _coefficients(args) -> NifgCoefficients:
    if getattr(args, "rho_from", "geometry") == "triple":
        if args.triple is None:
            raise ValueError("--rho-from triple needs --triple A,B,C")
        values = _floats(args.triple)
        if len(values) != 3:
            raise ValueError(f"--triple takes 3 numbers, got {len(values)}")
        return NifgCoefficients(*values)
    return coefficients_from_geometry(_geometry(args))


def _witness_spec(args) -> WitnessSpec:
    if args.witness:
        if args.witness not in PANEL_BY_NAME:
            raise ValueError(f"Unknown witness '{args.witness}', choose from {sorted(PANEL_BY_NAME)}")
        return PANEL_BY_NAME[args.witness]
    if args.family is None or args.params is None:
        raise ValueError("Give --witness NAME or both --family and --params")
    target = ClassTarget(args.target) if args.target else ClassTarget.W_EW
    return WitnessSpec(WitnessFamily(args.family), tuple(_floats(args.params)), target)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_rho(args) -> int:
    c = _coefficients(args)
    build_rho3(c)
    verdict = classify(c)
    print(f"a   = {c.a:.12f}")
    print(f"b   = {c.b:.12f}")
    print(f"c   = {c.c:.12f}")
    print(f"eta = {c.eta:.12f}")
    print("eigenvalues: " + " ".join(f"{v:.12f}" for v in rho3_eigenvalues(c)))
    print("ppt flags:   " + " ".join(str(f) for f in verdict.ppt_flags))
    print(f"verdict:     {verdict.detected_class.value}")
    return EXIT_OK


def cmd_witness_eval(args) -> int:
    spec = _witness_spec(args)
    c = _coefficients(args)
    trace = spec.trace(c)
    print(f"witness: {spec.name or spec.family.value} {spec.params}")
    print(f"trace:   {trace:.12f}")
    print(f"this witness: {'detected' if trace < DETECTION_THRESHOLD else 'not detected'}")

    check = validity(c)
    if not check.valid:
        logger.warning(f"{c.as_tuple()} is not a density matrix: {'; '.join(check.failures)}")
        print("panel verdict: n/a (invalid triple)")
        return EXIT_OK

    if args.rotate:
        search = minimize_over_rotations(spec.operator(), build_rho3(c), args.rotation_grid)
        print(f"rotated: {search.value:.12f} at t={search.t:.6f}, phi={search.phi:.6f}")
    verdict = classify(c)
    print(f"panel verdict: {verdict.detected_class.value}"
          + (f" ({verdict.witness_name})" if verdict.witness_name else ""))
    return EXIT_OK


def cmd_witness_validate(args) -> int:
    spec = _witness_spec(args)
    report = validate_witness(spec)
    for row in report.rows:
        print(f"{row.tag:<28} {row.value:+.9f}  {'ok' if row.passed else 'FAIL'}")
    print()
    print(f"LP minimum:         {report.lp_minimum:.12f} (certified: {report.certified})")
    print("eigenvalues:        " + " ".join(f"{e:.9f}" for e in report.eigenvalues))
    print(f"negative eigenvalue: {report.has_negative_eigenvalue}")
    if spec.family is WitnessFamily.GHZ_PROJECTOR:
        print(f"a0 rule:            {report.a0_rule}")
    print(f"result:             {'PASS' if report.passed else 'FAIL'}")
    return EXIT_OK


def cmd_lp_vertices(args) -> int:
    region = feasible_region(args.system)
    for v in region.vertices:
        print(" ".join(f"{x:.12f}" for x in v))
    logger.info(f"{args.system}: {len(region.vertices)} vertices")
    return EXIT_OK


def cmd_lp_table(args) -> int:
    family, target = WitnessFamily(args.family), ClassTarget(args.target)
    rows = derived_constraints(family, target) if args.derived else constraint_set(family, target)
    for row in rows:
        coeffs = " ".join(f"{x:+.6f}" for x in row.coefficients)
        offset = f" {row.offset:+.6f}" if row.offset else ""
        flag = f"  [{row.flag}]" if row.flag else ""
        print(f"{row.tag:<24} {coeffs}{offset} >= 0{flag}")
    if args.dump:
        dump_constraints(rows, args.dump)
    return EXIT_OK


def cmd_bounds_verify(args) -> int:
    _banner(f"Bound check: {args.combo} over {args.family}")
    report = verify_bound(
        args.combo, args.family, args.claimed, args.samples, args.seed, args.refine
    )
    print(f"empirical max: {report.empirical_max:.12f}")
    print(f"spectral max:  {report.spectral_max:.12f}")
    print(f"claimed:       {report.claimed:.12f}")
    print(f"gap:           {report.gap:+.12f}")
    print(f"verdict:       {report.verdict}")
    return EXIT_OK


def cmd_scan(args) -> int:
    witnesses = tuple(args.witness) if args.witness else tuple(PANEL_BY_NAME)
    output = Path(args.output) if args.output else OUTPUT_DIR / f"scan_{args.geom}_{args.seed}.csv"
    req = ScanRequest(
        geometry=args.geom,
        kf_r_min=args.kfr_min,
        kf_r_max=args.kfr_max if args.kfr_max is not None else args.kfr_min,
        kf_r_step=args.kfr_step or (KF_STEP_1D if args.geom == "1d" else KF_STEP_2D),
        secondary_min=args.kfx_min,
        secondary_max=args.kfx_max,
        secondary_step=args.kfx_step,
        theta_points=args.theta_points,
        witnesses=witnesses,
        rotation=args.rotate,
        rotation_grid=args.rotation_grid,
        seed=args.seed,
        output=output,
        workers=args.workers,
        purity_samples=args.purity_samples,
        refine_iterations=args.refine,
    )

    _banner(f"Tool_fermiwit - {req.geometry} scan ({req.n_points} points)")
    rows, summary = run_scan(req)
    print(summary.windows.to_string())
    print()
    print(f"points: {summary.total}, skipped: {summary.skipped}, min p: {summary.p_min:.6e}")
    print(f"Output: {output}")
    return EXIT_OK


def cmd_purity(args) -> int:
    c = _coefficients(args)
    result = purity_bound_check(c, args.samples, args.seed, args.refine)
    print(f"max overlap:    {result.max_value:.12f}")
    print(f"sampled max:    {result.sampled_max:.12f}")
    print(f"uniform value:  {result.uniform_value:.12f}")
    print(f"lambda_max:     {result.lambda_max:.12f}")
    return EXIT_OK


def cmd_radius(args) -> int:
    diag = entanglement_radius_diagnostics()
    print(f"f^2 = 1/2 at k_F r = {diag.f_root:.12f}")
    if diag.j1_root is None:
        print(f"j1^2 = 1/2 has no root (max j1 = {diag.j1_max:.6f} at {diag.j1_argmax:.6f})")
    else:
        print(f"j1^2 = 1/2 at k_F r = {diag.j1_root:.12f}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_geometry(p: argparse.ArgumentParser) -> None:
    p.add_argument("--geom", choices=["1d", "2d"], default="1d", help="Particle arrangement")
    p.add_argument("--kfr", type=float, default=None, help="k_F r")
    p.add_argument("--kfx", type=float, default=None, help="k_F x (1d)")
    p.add_argument("--theta", type=float, default=None, help="Angle in radians (2d)")


def _add_witness(p: argparse.ArgumentParser) -> None:
    p.add_argument("--witness", default=None, help=f"Named witness: {', '.join(PANEL_BY_NAME)}")
    p.add_argument("--family", choices=[f.value for f in WitnessFamily], default=None)
    p.add_argument("--params", default=None, help="Comma-separated parameters, e.g. --params=3.75,-2,-3,-3,-4")
    p.add_argument("--target", choices=[t.value for t in ClassTarget], default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Entanglement witnesses for three fermions in a noninteracting Fermi gas",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python -m src.main rho --geom 1d --kfr 10 --kfx 5
  python -m src.main witness eval --witness w_gen --kfr 0.1 --kfx 0.05
  python -m src.main witness eval --family stabilizer --params 1.41421356,1,1,-1 \\
      --rho-from triple --triple=-0.8,0.1,0.1
  python -m src.main witness validate --witness ghz_projector0
  python -m src.main lp vertices --system ghz-projector
  python -m src.main lp table --family stabilizer --target w --dump table.tsv
  python -m src.main bounds verify --combo spin-chain-23 --family B --samples 1000
  python -m src.main scan --geom 1d --kfr-min 0.1 --kfx-min 0.005 --kfx-max 0.095 --rotate
  python -m src.main purity --geom 2d --kfr 3 --theta 1.2 --samples 10000
  python -m src.main radius
        """,
    )
    parser.add_argument("--debug", "-d", action="store_true", help="Enable debug logging")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # rho
    rho = subparsers.add_parser("rho", help="Coefficients, spectrum and PPT flags of rho3")
    _add_geometry(rho)
    rho.set_defaults(handler=cmd_rho)

    # witness
    witness = subparsers.add_parser("witness", help="Evaluate or validate a witness")
    witness_sub = witness.add_subparsers(dest="witness_command")
    ev = witness_sub.add_parser("eval", help="Trace of a witness against rho3")
    _add_witness(ev)
    _add_geometry(ev)
    ev.add_argument("--rho-from", choices=["geometry", "triple"], default="geometry")
    ev.add_argument("--triple", default=None, help="a,b,c; use --triple=-0.8,0.1,0.1 for negative values")
    ev.add_argument("--rotate", action="store_true", help="Also minimize over u x u x u")
    ev.add_argument("--rotation-grid", type=int, default=ROTATION_GRID)
    ev.set_defaults(handler=cmd_witness_eval)
    va = witness_sub.add_parser("validate", help="Constraint rows and eigenvalue gate")
    _add_witness(va)
    va.set_defaults(handler=cmd_witness_validate)

    # lp
    lp = subparsers.add_parser("lp", help="Feasible regions and constraint tables")
    lp_sub = lp.add_subparsers(dest="lp_command")
    vertices = lp_sub.add_parser("vertices", help="Vertices of a feasible region")
    vertices.add_argument("--system", choices=sorted(SYSTEMS), required=True)
    vertices.set_defaults(handler=cmd_lp_vertices)
    table = lp_sub.add_parser("table", help="Constraint table for a family and target")
    table.add_argument("--family", choices=[f.value for f in WitnessFamily], required=True)
    table.add_argument("--target", choices=[t.value for t in ClassTarget], required=True)
    table.add_argument("--derived", action="store_true", help="Rows from region vertices")
    table.add_argument("--dump", default=None, help="Write a tab-separated audit file")
    table.set_defaults(handler=cmd_lp_table)

    # bounds
    bounds = subparsers.add_parser("bounds", help="Empirical maxima of region faces")
    bounds_sub = bounds.add_subparsers(dest="bounds_command")
    verify = bounds_sub.add_parser("verify", help="Sample, refine and compare with the claimed bound")
    verify.add_argument("--combo", choices=sorted(COMBOS), required=True)
    verify.add_argument("--family", choices=["B", "W", "all"], default="B")
    verify.add_argument("--claimed", type=float, default=None)
    verify.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    verify.add_argument("--refine", type=int, default=REFINE_ITERATIONS)
    verify.set_defaults(handler=cmd_bounds_verify)

    # scan
    scan = subparsers.add_parser("scan", help="Sweep particle geometries")
    scan.add_argument("--geom", choices=["1d", "2d"], default="1d")
    scan.add_argument("--kfr-min", type=float, default=0.1)
    scan.add_argument("--kfr-max", type=float, default=None)
    scan.add_argument("--kfr-step", type=float, default=None, help="Defaults to 0.1 (1d) or 0.2 (2d)")
    scan.add_argument("--kfx-min", type=float, default=None, help="1d only (default 0)")
    scan.add_argument("--kfx-max", type=float, default=None, help="1d only (default 0.1)")
    scan.add_argument("--kfx-step", type=float, default=None, help="1d only (default 0.005)")
    scan.add_argument("--theta-points", type=int, default=THETA_POINTS)
    scan.add_argument("--witness", action="append", default=None, help="Repeat to select several")
    scan.add_argument("--rotate", action="store_true", help="Add rotation-minimized traces")
    scan.add_argument("--rotation-grid", type=int, default=ROTATION_GRID)
    scan.add_argument("--seed", type=int, default=DEFAULT_SEED)
    scan.add_argument("--output", "-o", default=None)
    scan.add_argument("--workers", type=int, default=1)
    scan.add_argument("--purity-samples", type=int, default=0)
    scan.add_argument("--refine", type=int, default=REFINE_ITERATIONS)
    scan.set_defaults(handler=cmd_scan)

    # purity
    purity = subparsers.add_parser("purity", help="Largest rotated |W1> overlap with rho3")
    _add_geometry(purity)
    purity.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    purity.add_argument("--seed", type=int, default=DEFAULT_SEED)
    purity.add_argument("--refine", type=int, default=REFINE_ITERATIONS)
    purity.set_defaults(handler=cmd_purity)

    # radius
    radius = subparsers.add_parser("radius", help="Entanglement radius f^2 = 1/2")
    radius.set_defaults(handler=cmd_radius)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.debug:
        logging.getLogger().setLevel(logging.DEBUG)

    handler = getattr(args, "handler", None)
    if handler is None:
        parser.print_help()
        print()
        print("Quick start:")
        print("  python -m src.main radius                      # Entanglement radius")
        print("  python -m src.main rho --kfr 0.1 --kfx 0.05    # rho3 at one geometry")
        return EXIT_OK

    if getattr(args, "kfr", 0.0) is None and getattr(args, "rho_from", "geometry") == "geometry":
        logger.error("--kfr is required for a geometry")
        return EXIT_INVALID

    try:
        return handler(args)
    except (InfeasibleError, UnboundedError) as e:
        logger.error(f"Linear program failed: {e}")
        return EXIT_LP
    except ValueError as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
