"""Command-line entry point: `sonic-patch {check,solve,verify,converge}`.

Exit codes: 0 success, 1 configuration error, 2 inadmissible boundary data, 3 solver
failure, 4 invariant or verification failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any

from sonic_patch.boundary.region import region_corners
from sonic_patch.boundary.spec import BoundarySpec
from sonic_patch.boundary.trace import AdmissibilityReport, check_admissibility, compute_trace
from sonic_patch.config import RunConfig, apply_overrides, load_config
from sonic_patch.errors import (
    ConfigError,
    DomainError,
    ExitCode,
    GeometryError,
    InversionError,
    MarchError,
    MeshError,
    QuadratureError,
    TraceError,
)
from sonic_patch.io.writers import SUMMARY_SCHEMA, write_json, write_solution
from sonic_patch.pipeline import SolutionHook, build_boundary, solve_patch
from sonic_patch.verify.convergence import DEFAULT_DT0, convergence_study
from sonic_patch.verify.manufactured import manufactured_order
from sonic_patch.verify.oracle import run_oracle_checks

logger = logging.getLogger(__name__)

SOLVER_ERRORS = (
    DomainError,
    TraceError,
    GeometryError,
    MeshError,
    MarchError,
    InversionError,
    QuadratureError,
)

# Acceptance thresholds of `sonic-patch verify`
HODOGRAPH_HOLDER_MIN = 0.30
PHYSICAL_HOLDER_MIN = 0.11
MANUFACTURED_RATIO_RANGE = (3.5, 4.5)
FLIPPED_SOURCE_FACTOR = 2.0


def _summary(config: RunConfig, command: str, passed: bool, **sections: Any) -> dict[str, Any]:
    return {"config_hash": config.config_hash(), "command": command, "passed": passed, **sections}


def _write_summary(config: RunConfig, name: str, report: dict[str, Any]) -> None:
    if "json" in config.output.formats:
        write_json(Path(config.output.directory) / name, report, SUMMARY_SCHEMA)


def _print_failures(report: AdmissibilityReport) -> None:
    for name in report.failures():
        check = report.checks[name]
        print(f"  {name}: margin {check.min_margin:.4g} at x={check.worst_x:.6g} ({check.description})")


def _admissible_boundary(config: RunConfig) -> tuple[BoundarySpec | None, int]:
    """Build the boundary and check it; returns (spec, exit code) with spec None on failure."""
    spec = build_boundary(config.boundary)
    report = check_admissibility(spec, config.gas.to_params())
    if not report.passed:
        _print_failures(report)
        return None, ExitCode.ADMISSIBILITY
    return spec, ExitCode.OK


def cmd_check(config: RunConfig) -> int:
    """Check the boundary hypotheses and write admissibility.json."""
    spec = build_boundary(config.boundary)
    report = check_admissibility(spec, config.gas.to_params())
    _write_summary(
        config, "admissibility.json", _summary(config, "check", report.passed, admissibility=report.to_dict())
    )

    status = "admissible" if report.passed else "NOT admissible"
    print(f"Boundary '{spec.name}' on [{spec.x1}, {spec.x2}]: {status}")
    _print_failures(report)
    return ExitCode.OK if report.passed else ExitCode.ADMISSIBILITY


def cmd_solve(config: RunConfig, post_march_hook: SolutionHook | None = None) -> int:
    """Solve the patch and write nodes, curves and diagnostics.

    Args:
        config: Run configuration.
        post_march_hook: Test hook applied to the closed hodograph solution before
            inversion.
    """
    spec, code = _admissible_boundary(config)
    if spec is None:
        return code
    run = solve_patch(
        spec,
        config.gas.to_params(),
        config.solver,
        residual_t_floor=config.verify.residual_t_floor,
        post_march_hook=post_march_hook,
    )
    write_solution(run, config.output.directory, config.config_hash(), config.output.formats)

    d_x, d_y = run.curves.corner_d
    print(f"Solved '{spec.name}': {run.solution.mesh.n_nodes} nodes, D = ({d_x:.6f}, {d_y:.6f})")
    print(f"  closed-form residual {run.residuals.closed_form:.3e}, discrete {run.residuals.discrete:.3e}")
    if run.failures():
        print(f"  invariant failures: {', '.join(run.failures())}")
        return ExitCode.INVARIANT
    return ExitCode.OK


def cmd_verify(config: RunConfig) -> int:
    """Run the verify checks selected in the config and write verify.json."""
    gas = config.gas.to_params()
    checks = config.verify.checks
    sections: dict[str, Any] = {}
    failed: list[str] = []

    if "oracle" in checks:
        reports = run_oracle_checks(gas, config.verify.oracle_samples, config.verify.seed)
        sections["oracle"] = [report.to_dict() for report in reports]
        failed.extend(f"oracle.{r.family}" for r in reports if not r.passed)

    if "manufactured" in checks:
        spec, code = _admissible_boundary(config)
        if spec is None:
            return code
        trace = compute_trace(spec, gas)
        result = manufactured_order(trace, region_corners(trace, gas), gas)
        low, high = MANUFACTURED_RATIO_RANGE
        result["passed"] = bool(
            low <= result["ratio"] <= high
            and result["error_flipped_source"] > FLIPPED_SOURCE_FACTOR * result["error_coarse"]
        )
        sections["manufactured"] = result
        if not result["passed"]:
            failed.append("manufactured")

    if "residual" in checks or "holder" in checks:
        spec, code = _admissible_boundary(config)
        if spec is None:
            return code
        run = solve_patch(spec, gas, config.solver, residual_t_floor=config.verify.residual_t_floor)
        if "residual" in checks:
            sections["residuals"] = run.residuals.to_dict()
            if "closed_form_residual" in run.failures():
                failed.append("residual")
        if "holder" in checks:
            hodograph = run.diagnostics.holder["u_bar_sonic"]
            physical = {name: fit.exponent for name, fit in run.pd_holder.items() if fit.defined}
            sections["holder"] = {
                "hodograph": {name: fit.to_dict() for name, fit in run.diagnostics.holder.items()},
                "physical": {name: fit.to_dict() for name, fit in run.pd_holder.items()},
            }
            if not (hodograph.defined and hodograph.exponent >= HODOGRAPH_HOLDER_MIN):
                failed.append("holder.hodograph")
            if not physical or min(physical.values()) < PHYSICAL_HOLDER_MIN:
                failed.append("holder.physical")

    _write_summary(config, "verify.json", _summary(config, "verify", not failed, failures=failed, **sections))
    print(f"Verify ({', '.join(checks)}): {'passed' if not failed else 'FAILED: ' + ', '.join(failed)}")
    return ExitCode.OK if not failed else ExitCode.INVARIANT


def cmd_converge(config: RunConfig, dt0: float = DEFAULT_DT0) -> int:
    """Refinement study over `verify.refine` levels; writes convergence.json."""
    spec, code = _admissible_boundary(config)
    if spec is None:
        return code
    table = convergence_study(
        spec,
        config.gas.to_params(),
        n_levels=config.verify.refine,
        dt0=dt0,
        base=config.solver,
        residual_t_floor=config.verify.residual_t_floor,
    )
    _write_summary(
        config,
        "convergence.json",
        _summary(config, "converge", table.passed, orders=table.orders, table=table.to_dict()),
    )

    print(f"{'dt':>10} " + " ".join(f"{metric:>16}" for metric in table.errors))
    for i, dt in enumerate(table.dts):
        print(f"{dt:>10.3e} " + " ".join(f"{values[i]:>16.4e}" for values in table.errors.values()))
    for metric, orders in table.orders.items():
        print(f"  order {metric}: " + ", ".join(f"{order:.2f}" for order in orders))
    return ExitCode.OK if table.passed else ExitCode.INVARIANT


COMMANDS = {"check": cmd_check, "solve": cmd_solve, "verify": cmd_verify, "converge": cmd_converge}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sonic-patch", description="Supersonic-sonic patch solver for steady isentropic flow"
    )
    subparsers = parser.add_subparsers(dest="command", help="Command to run", required=True)

    for name, help_text in (
        ("check", "Check the boundary hypotheses"),
        ("solve", "Solve the patch and write nodes, curves and diagnostics"),
        ("verify", "Run oracle, manufactured, residual and Hoelder checks"),
        ("converge", "Refinement study with observed orders"),
    ):
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--config", required=True, help="Path to the TOML run configuration")
        sub.add_argument("--out", help="Output directory (overrides output.directory)")
        sub.add_argument("--verbose", "-v", action="store_true", help="Log at DEBUG level")
        if name in ("solve", "verify", "converge"):
            sub.add_argument("--dt", type=float, help="Level spacing (converge: coarsest level)")
            sub.add_argument("--t-min", type=float, help="Last marched level")
        if name == "verify":
            sub.add_argument("--seed", type=int, help="Seed for oracle sample placement")
        if name == "converge":
            sub.add_argument("--refine", type=int, help="Number of refinement levels (>= 3)")
    return parser


def main(argv: list[str] | None = None, post_march_hook: SolutionHook | None = None) -> int:
    """Parse arguments, run the command and map failures to exit codes."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s - %(levelname)s - %(message)s",
    )

    try:
        config = apply_overrides(
            load_config(args.config),
            dt=getattr(args, "dt", None) if args.command != "converge" else None,
            t_min=getattr(args, "t_min", None),
            out=args.out,
            seed=getattr(args, "seed", None),
            refine=getattr(args, "refine", None),
        )
        if args.command == "solve":
            return int(cmd_solve(config, post_march_hook=post_march_hook))
        if args.command == "converge":
            return int(cmd_converge(config, dt0=args.dt or DEFAULT_DT0))
        return int(COMMANDS[args.command](config))
    except ConfigError as e:
        logger.error(str(e))
        return ExitCode.CONFIG
    except SOLVER_ERRORS as e:
        logger.error(f"{type(e).__name__}: {e}")
        return ExitCode.SOLVER


if __name__ == "__main__":
    sys.exit(main())
