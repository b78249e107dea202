"""Command-line front end.

Subcommands: steady | entangle | sweep | infer | validate.
Flags: --config PATH (required), --out PATH, --workers N,
--mode {paper|self_consistent}; the TRIMODE_WORKERS environment variable is
the fallback for --workers.

Exit codes: 0 success, 2 configuration error, 3 physics/numerics error,
4 I/O error. All numeric output uses shortest round-trip decimals, so
re-running an identical configuration produces byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

import numpy as np

from . import dynamics, entanglement, gaussian, inference, model, sweep as sweep_mod
from .config import Config, load_config, resolved_params_dict
from .errors import ConfigError, TrimodeError, UnstableSystem
from .inference import DetectorModel

CSV_HEADER = (
    "delta_rad_s,y_value,stable,e_sm,e_fm,e_fs,e_f_sm,e_s_fm,e_m_fs,e_tri,u,n_roots"
)


def _fmt(value) -> str:
    """Shortest round-trip decimal; empty string for nulls."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def _matrix(m) -> list[list[float]]:
    return [[float(x) for x in row] for row in np.asarray(m)]


def _emit(report: dict, out_path: Optional[str]) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _pipeline(cfg: Config, mode: str):
    """Mean fields, drift, diffusion and stability at the configured point."""
    fields = model.steady_state_mean_fields(
        cfg.params, mode=mode, root_method=cfg.root_method
    )
    A = model.drift_matrix(cfg.params, fields)
    D = model.diffusion_matrix(cfg.params)
    report = dynamics.stability(A)
    return fields, A, D, report


def _mean_fields_dict(fields: model.MeanFields) -> dict:
    return {
        "u": fields.u,
        "a_F_real": fields.a_F.real,
        "a_F_imag": fields.a_F.imag,
        "a_S_real": fields.a_S.real,
        "a_S_imag": fields.a_S.imag,
        "phi": fields.phi,
        "x_bar": fields.x_bar,
        "p_bar": fields.p_bar,
        "alpha": fields.alpha if fields.alpha != float("inf") else None,
        "beta": fields.beta,
        "roots": list(fields.roots),
        "n_roots": fields.n_roots,
        "mode": fields.mode,
        "root_method": fields.root_method,
    }


def _stability_dict(report: dynamics.StabilityReport) -> dict:
    return {
        "stable": report.stable,
        "max_real_eigenvalue_rad_s": report.max_real_eigenvalue,
        "routh_hurwitz_pass": report.routh_hurwitz_pass,
        "char_poly_coeffs": list(report.char_poly_coeffs),
        "eigenvalues_rad_s": [[e.real, e.imag] for e in report.eigenvalues],
    }


def cmd_steady(cfg: Config, mode: str, out_path: Optional[str]) -> int:
    fields = model.steady_state_mean_fields(
        cfg.params, mode=mode, root_method=cfg.root_method
    )
    report = {
        "mean_fields": _mean_fields_dict(fields),
        "cubic_residuals": [
            model.mean_field_residual(cfg.params, u, fields.phi)
            if u > 0 else 0.0
            for u in fields.roots
        ],
        "resolved_params": resolved_params_dict(cfg.params),
    }
    _emit(report, out_path)
    return 0


def cmd_entangle(cfg: Config, mode: str, out_path: Optional[str]) -> int:
    fields, A, D, stab = _pipeline(cfg, mode)
    report = {
        "mean_fields": _mean_fields_dict(fields),
        "stability": _stability_dict(stab),
        "resolved_params": resolved_params_dict(cfg.params),
    }
    if not stab.stable:
        report["entanglement"] = {key: None for key in (
            "e_sm", "e_fm", "e_fs", "e_f_sm", "e_s_fm", "e_m_fs", "e_tri",
            "giedke_class",
        )}
        report["entanglement"]["stable"] = False
        _emit(report, out_path)
        return 3
    V = dynamics.steady_state_covariance(A, D, check_stability=False)
    ent = entanglement.analyze(V)
    report["entanglement"] = ent.as_dict()
    report["covariance_matrix"] = _matrix(V.entries)
    _emit(report, out_path)
    return 0


def cmd_sweep(cfg: Config, mode: str, out_path: Optional[str], workers: int) -> int:
    if cfg.sweep is None:
        raise ConfigError("sweep command requires a [sweep] block in the config")
    if not out_path:
        raise ConfigError("sweep command requires --out")
    spec = cfg.sweep
    grid = sweep_mod.build_grid(
        cfg.params,
        (spec.delta_min, spec.delta_max),
        spec.n_delta,
        spec.y_axis,
        (spec.y_min, spec.y_max),
        spec.n_y,
        mode=mode,
        root_method=cfg.root_method,
    )
    result = sweep_mod.run_sweep(grid, workers=workers)

    base = out_path[:-4] if out_path.endswith(".csv") else out_path
    csv_path = base + ".csv"
    lines = [CSV_HEADER]
    for cell in result.cells:
        lines.append(",".join([
            _fmt(cell.delta), _fmt(cell.y_value), _fmt(cell.stable),
            _fmt(cell.e_sm), _fmt(cell.e_fm), _fmt(cell.e_fs),
            _fmt(cell.e_f_sm), _fmt(cell.e_s_fm), _fmt(cell.e_m_fs),
            _fmt(cell.e_tri), _fmt(cell.u), _fmt(cell.n_roots),
        ]))
    with open(csv_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")

    meta = {
        "resolved_params": resolved_params_dict(cfg.params),
        "grid": {
            "delta_rad_s": list(grid.delta_values),
            "y_axis": grid.y_axis,
            "y_values": list(grid.y_values),
            "mode": grid.mode,
            "root_method": grid.root_method,
        },
        "n_cells": len(result.cells),
        "errors": sorted({c.error for c in result.cells if c.error}),
    }
    _emit(meta, base + ".meta.json")
    boundaries = sweep_mod.region_boundaries(result)
    _emit(
        {name: [[list(p1), list(p2)] for p1, p2 in segs]
         for name, segs in boundaries.items()},
        base + ".boundaries.json",
    )
    return 0


def cmd_infer(cfg: Config, mode: str, out_path: Optional[str]) -> int:
    fields, A, D, stab = _pipeline(cfg, mode)
    if not stab.stable:
        raise UnstableSystem("cannot infer a steady state of an unstable system")
    V = dynamics.steady_state_covariance(A, D, check_stability=False)
    det = DetectorModel.from_bandwidth(cfg.detector_bandwidth_hz)
    vt = inference.inferred_covariance(A, D, V, det)
    vt1 = inference.inferred_covariance_first_order(V, D, det)
    fidelities = {
        name: inference.inference_fidelity(V, vt, idx)
        for idx, name in enumerate(("F", "S", "M"))
    }
    report = {
        "tau_s": det.tau,
        "bandwidth_hz": det.bandwidth,
        "V": _matrix(V.entries),
        "V_inferred_exact": _matrix(vt.entries),
        "V_inferred_first_order": _matrix(vt1.entries),
        "fidelity": fidelities,
        "first_order_residual_fro": float(np.linalg.norm(vt.entries - vt1.entries)),
        "stability": _stability_dict(stab),
        "resolved_params": resolved_params_dict(cfg.params),
    }
    _emit(report, out_path)
    return 0


def cmd_validate(cfg: Config, mode: str, out_path: Optional[str]) -> int:
    fields, A, D, stab = _pipeline(cfg, mode)
    checks: dict[str, bool] = {
        "gauge_a_F_real": abs(fields.a_F.imag) <= 1e-12 * max(1.0, abs(fields.a_F)),
        "stable": stab.stable,
    }
    if mode == "paper" and cfg.params.chi > 0.0:
        A_resc = model.drift_matrix_rescaled(cfg.params, fields.alpha, fields.beta)
        checks["dual_drift_construction"] = bool(
            np.linalg.norm(A - A_resc) <= 1e-10 * np.linalg.norm(A)
        )
    if stab.stable:
        V = dynamics.steady_state_covariance(A, D, check_stability=False)
        Vm = V.entries.copy()
        if os.environ.get("TRIMODE_TEST_CORRUPT_V"):
            # test hook: corrupt the solution to exercise the failure path
            Vm = Vm - 0.3 * np.eye(6)
            V = gaussian.CovarianceMatrix(Vm, V.mode_labels)
        residual = dynamics.lyapunov_residual(A, D, Vm)
        checks["lyapunov_residual"] = bool(
            residual <= dynamics.LYAPUNOV_RESIDUAL_TOL * np.linalg.norm(D)
        )
        try:
            checks["covariance_physical"] = gaussian.is_physical(V)
        except TrimodeError:
            checks["covariance_physical"] = False
    report = {
        "checks": checks,
        "all_passed": all(checks.values()),
        "resolved_params": resolved_params_dict(cfg.params),
    }
    _emit(report, out_path)
    return 0 if report["all_passed"] else 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trimode",
        description="Steady-state Gaussian dynamics of a chi(2) microtoroid "
        "with two optical modes and one mechanical mode.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("steady", "entangle", "sweep", "infer", "validate"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to TOML config")
        p.add_argument("--out", default=None, help="output path")
        p.add_argument("--workers", type=int, default=None,
                       help="parallel workers (default: TRIMODE_WORKERS or 1)")
        p.add_argument("--mode", choices=list(model.MODES), default=None,
                       help="override the config's linearization mode")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        mode = args.mode or cfg.mode
        workers = args.workers
        if workers is None:
            workers = int(os.environ.get("TRIMODE_WORKERS", "1"))
        if workers < 1:
            raise ConfigError(f"workers must be >= 1, got {workers}")
        if args.command == "steady":
            return cmd_steady(cfg, mode, args.out)
        if args.command == "entangle":
            return cmd_entangle(cfg, mode, args.out)
        if args.command == "sweep":
            return cmd_sweep(cfg, mode, args.out, workers)
        if args.command == "infer":
            return cmd_infer(cfg, mode, args.out)
        if args.command == "validate":
            return cmd_validate(cfg, mode, args.out)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except TrimodeError as exc:
        print(f"physics error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
