"""Experiment orchestration: single runs, coupling sweeps, and pointer sampling.

A run evolves a scenario, post-selects, applies every extraction route that
fits the pointer kind, and compares each against the analytic oracle under
the quadratic tolerance model.  A sweep reruns a scenario over a grid of
expansion parameters and fits the log-log slope of the extraction error,
which should be 2 (the next-order correction is quadratic in the coupling).
Sampling draws pointer positions from the conditioned marginal density by
inverse-CDF lookup, reproducing the statistics an ensemble would record.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    GridError,
    TruncationLeakageError,
    UnsupportedScenarioError,
    WeakMeasurementError,
)
from .evolution import PostSelectionResult, evolve_exact, post_select
from .pointers import FockPointerSpec, position_wavefunctions
from .scenario import Scenario, ensure_valid, resolve_scenario
from .weak_values import (
    analytic_oracle,
    correlator_decomposition,
    extract_joint_fock,
    extract_joint_spin,
    extraction_tolerance,
    pointer_shift_check,
)

#: Number of grid points used for position densities and inverse-CDF sampling.
SAMPLING_GRID_POINTS = 2**12

#: Fock dimension the sweep escalates to when the leakage guard trips.
SWEEP_ESCALATED_DIM = 16

_CSV_COLUMNS = (
    "scenario",
    "method",
    "lambda",
    "re_extracted",
    "im_extracted",
    "re_analytic",
    "im_analytic",
    "abs_error",
    "prob_success",
    "pass",
)


@dataclass(frozen=True)
class WeakValueReport:
    """Extracted weak values by method, against the analytic oracle."""

    scenario: str
    analytic: complex
    prob_success: float
    lambda_max: float
    tolerance: float
    extracted_lowering: complex | None = None
    extracted_correlators: complex | None = None
    extracted_spin: complex | None = None
    xp_shift: tuple[float, float] | None = None
    abs_errors: dict[str, float] = field(default_factory=dict)
    passed: bool = True

    def methods(self) -> dict[str, complex]:
        out = {}
        if self.extracted_lowering is not None:
            out["lowering"] = self.extracted_lowering
        if self.extracted_correlators is not None:
            out["correlators"] = self.extracted_correlators
        if self.extracted_spin is not None:
            out["spin"] = self.extracted_spin
        return out


@dataclass(frozen=True)
class SweepResult:
    """Extraction error versus expansion parameter, with a power-law fit."""

    scenario: str
    lambda_grid: tuple[float, ...]
    errors: tuple[float, ...]
    fitted_slope: float
    fitted_intercept: float

    @property
    def passed(self) -> bool:
        return abs(self.fitted_slope - 2.0) <= 0.3


@dataclass(frozen=True)
class SampleSet:
    """Simulated position measurements of one pointer."""

    pointer_index: int
    positions: np.ndarray
    n_shots: int
    seed: int


def run_scenario(
    scenario: Scenario, tolerance: float | None = None, label: str | None = None
) -> WeakValueReport:
    """Evolve, post-select, and extract along every applicable route."""
    ensure_valid(scenario)
    analytic = analytic_oracle(scenario)
    result = post_select(evolve_exact(scenario), scenario)

    fock = all(isinstance(p, FockPointerSpec) for p in scenario.pointers)
    extracted_lowering = extracted_correlators = extracted_spin = None
    xp_shift = None
    if fock:
        extracted_lowering = extract_joint_fock(result, scenario)
        _, extracted_correlators = correlator_decomposition(result, scenario)
        if scenario.n_pointers == 1:
            xp_shift = pointer_shift_check(result, scenario)
    else:
        extracted_spin = extract_joint_spin(result, scenario)

    lambda_max = scenario.lambda_max
    tol = tolerance if tolerance is not None else extraction_tolerance(lambda_max, analytic)
    errors: dict[str, float] = {}
    for method, value in (
        ("lowering", extracted_lowering),
        ("correlators", extracted_correlators),
        ("spin", extracted_spin),
    ):
        if value is not None:
            errors[method] = abs(value - analytic)
    return WeakValueReport(
        scenario=label or scenario.name or "scenario",
        analytic=analytic,
        prob_success=result.prob_success,
        lambda_max=lambda_max,
        tolerance=tol,
        extracted_lowering=extracted_lowering,
        extracted_correlators=extracted_correlators,
        extracted_spin=extracted_spin,
        xp_shift=xp_shift,
        abs_errors=errors,
        passed=all(e <= tol for e in errors.values()),
    )


def run_experiment(
    scenario_ref: str | Path,
    dim: int | None = None,
    tolerance: float | None = None,
) -> WeakValueReport:
    """Load a scenario by catalog name or path and run it.

    Parameters
    ----------
    scenario_ref : str or Path
        Catalog name (e.g. ``"aav_qubit"``) or path to a scenario file.
    dim : int, optional
        Override the truncation of every Fock pointer.
    tolerance : float, optional
        Override the absolute pass/fail tolerance.
    """
    scenario = resolve_scenario(scenario_ref)
    if dim is not None:
        scenario = scenario.with_fock_dim(dim)
    try:
        return run_scenario(scenario, tolerance=tolerance, label=str(scenario_ref))
    except WeakMeasurementError as exc:
        exc.args = (f"{scenario_ref}: {exc}",)
        raise


def _sweep_error(scenario: Scenario) -> float:
    report = run_scenario(scenario)
    route = "spin" if report.extracted_spin is not None else "lowering"
    return report.abs_errors[route]


def sweep_lambda(
    scenario_ref: str | Path, grid, dim: int | None = None
) -> SweepResult:
    """Rerun a scenario over a decreasing lambda grid and fit the error slope.

    Couplings are rescaled to realize each grid value while pointer widths
    and truncations stay fixed; if the largest grid point trips the
    truncation guard, every Fock pointer is escalated to
    :data:`SWEEP_ESCALATED_DIM` levels before giving up.
    """
    grid = [float(g) for g in grid]
    if len(grid) < 4:
        raise ValueError(f"a sweep needs at least 4 grid points, got {len(grid)}")
    if len(set(grid)) != len(grid):
        raise ValueError("sweep grid contains duplicate values")
    if any(g <= 0.0 or g > 0.2 for g in grid):
        raise ValueError("sweep grid values must lie in (0, 0.2]")
    grid = sorted(grid, reverse=True)

    scenario = resolve_scenario(scenario_ref)
    if dim is not None:
        scenario = scenario.with_fock_dim(dim)

    try:
        errors = [_sweep_error(scenario.with_lambda(grid[0]))]
    except TruncationLeakageError:
        scenario = scenario.with_fock_dim(
            max([SWEEP_ESCALATED_DIM] + [p.dim for p in scenario.pointers])
        )
        try:
            errors = [_sweep_error(scenario.with_lambda(grid[0]))]
        except TruncationLeakageError as exc:
            raise TruncationLeakageError(
                exc.pointer_index, exc.leakage, exc.dim, exc.guard, lam=grid[0]
            ) from None
    for lam in grid[1:]:
        try:
            errors.append(_sweep_error(scenario.with_lambda(lam)))
        except TruncationLeakageError as exc:
            raise TruncationLeakageError(
                exc.pointer_index, exc.leakage, exc.dim, exc.guard, lam=lam
            ) from None

    log_lam = np.log(np.asarray(grid))
    log_err = np.log(np.maximum(np.asarray(errors), 1e-300))
    slope, intercept = np.polyfit(log_lam, log_err, 1)
    return SweepResult(
        scenario=str(scenario_ref),
        lambda_grid=tuple(grid),
        errors=tuple(errors),
        fitted_slope=float(slope),
        fitted_intercept=float(intercept),
    )


# ---------------------------------------------------------------------------
# Pointer-position sampling
# ---------------------------------------------------------------------------


def sampling_grid(spec: FockPointerSpec) -> np.ndarray:
    """Position grid spanning +/- (6 sigma + 4 sigma sqrt(d))."""
    half = 6.0 * spec.sigma + 4.0 * spec.sigma * math.sqrt(spec.dim)
    return np.linspace(-half, half, SAMPLING_GRID_POINTS)


def position_density(
    result: PostSelectionResult,
    scenario: Scenario,
    pointer_index: int,
    grid: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Marginal position density of one conditioned pointer on a grid.

    Synthesizes the reduced density matrix of the chosen pointer in the
    oscillator eigenbasis.  Raises :class:`GridError` if more than 1e-9 of
    the probability mass falls off the grid.
    """
    spec = scenario.pointers[pointer_index]
    if not isinstance(spec, FockPointerSpec):
        raise UnsupportedScenarioError("position sampling requires a Fock pointer")
    if grid is None:
        grid = sampling_grid(spec)
    dims = result.conditioned.layout.dims
    tensor = result.conditioned.amps.reshape(dims)
    moved = np.moveaxis(tensor, pointer_index, 0).reshape(dims[pointer_index], -1)
    reduced = moved @ moved.conj().T
    basis = position_wavefunctions(spec, grid)
    density = np.einsum("mx,mn,nx->x", basis, reduced, basis).real
    mass = float(np.trapezoid(density, grid))
    if abs(1.0 - mass) > 1e-9:
        raise GridError(
            f"density mass off the sampling grid: 1 - integral = {1.0 - mass:.3e}"
        )
    return grid, np.maximum(density, 0.0)


def sample_positions(
    result: PostSelectionResult,
    scenario: Scenario,
    pointer_index: int,
    n_shots: int,
    seed: int,
) -> SampleSet:
    """Draw position measurements of one pointer by inverse-CDF sampling.

    Uses the counter-based Philox generator keyed on ``seed``, so sample
    sets are bitwise reproducible.
    """
    if n_shots < 1:
        raise ValueError("n_shots must be positive")
    grid, density = position_density(result, scenario, pointer_index)
    steps = 0.5 * (density[1:] + density[:-1]) * np.diff(grid)
    cdf = np.concatenate([[0.0], np.cumsum(steps)])
    cdf /= cdf[-1]
    rng = np.random.Generator(np.random.Philox(int(seed)))
    uniform = rng.random(int(n_shots))
    positions = np.interp(uniform, cdf, grid)
    positions.flags.writeable = False
    return SampleSet(
        pointer_index=int(pointer_index),
        positions=positions,
        n_shots=int(n_shots),
        seed=int(seed),
    )


# ---------------------------------------------------------------------------
# Report emission
# ---------------------------------------------------------------------------


def _sig(x: float) -> str:
    return f"{x:.12g}"


def report_rows(report: WeakValueReport) -> list[dict[str, str]]:
    """CSV rows of a run report, one per extraction method."""
    rows = []
    for method, value in report.methods().items():
        rows.append(
            {
                "scenario": report.scenario,
                "method": method,
                "lambda": _sig(report.lambda_max),
                "re_extracted": _sig(value.real),
                "im_extracted": _sig(value.imag),
                "re_analytic": _sig(report.analytic.real),
                "im_analytic": _sig(report.analytic.imag),
                "abs_error": _sig(report.abs_errors[method]),
                "prob_success": _sig(report.prob_success),
                "pass": str(report.abs_errors[method] <= report.tolerance).lower(),
            }
        )
    return rows


def sweep_rows(result: SweepResult) -> list[dict[str, str]]:
    """CSV rows of a sweep: one per grid point plus a slope summary row."""
    rows = [
        {
            "scenario": result.scenario,
            "method": "error",
            "lambda": _sig(lam),
            "re_extracted": "",
            "im_extracted": "",
            "re_analytic": "",
            "im_analytic": "",
            "abs_error": _sig(err),
            "prob_success": "",
            "pass": "",
        }
        for lam, err in zip(result.lambda_grid, result.errors)
    ]
    rows.append(
        {
            "scenario": result.scenario,
            "method": "slope",
            "lambda": "",
            "re_extracted": _sig(result.fitted_slope),
            "im_extracted": _sig(result.fitted_intercept),
            "re_analytic": "",
            "im_analytic": "",
            "abs_error": "",
            "prob_success": "",
            "pass": str(result.passed).lower(),
        }
    )
    return rows


def _maybe_pair(z: complex | None) -> list[float] | None:
    return None if z is None else [z.real, z.imag]


def report_json(report: WeakValueReport) -> dict:
    """JSON form of a report; full float precision so values round-trip."""
    return {
        "scenario": report.scenario,
        "analytic": _maybe_pair(report.analytic),
        "extracted_lowering": _maybe_pair(report.extracted_lowering),
        "extracted_correlators": _maybe_pair(report.extracted_correlators),
        "extracted_spin": _maybe_pair(report.extracted_spin),
        "xp_shift": list(report.xp_shift) if report.xp_shift is not None else None,
        "prob_success": report.prob_success,
        "lambda_max": report.lambda_max,
        "tolerance": report.tolerance,
        "abs_errors": dict(report.abs_errors),
        "passed": report.passed,
    }


def sweep_json(result: SweepResult) -> dict:
    return {
        "scenario": result.scenario,
        "lambda_grid": list(result.lambda_grid),
        "errors": list(result.errors),
        "fitted_slope": result.fitted_slope,
        "fitted_intercept": result.fitted_intercept,
        "passed": result.passed,
    }


def emit_report(results, fmt: str = "csv", destination=None) -> str:
    """Render run reports and sweep results as CSV or JSON.

    Parameters
    ----------
    results : report, sweep result, or a list of them
        What to render.
    fmt : {"csv", "json"}
        Output format.  CSV prints 12 significant digits; JSON keeps full
        precision so parsed values equal the originals.
    destination : path or file-like, optional
        Where to write; the rendered text is also returned.
    """
    if isinstance(results, (WeakValueReport, SweepResult)):
        results = [results]
    else:
        results = list(results)
    if not results:
        raise ValueError("no results to emit")
    if fmt == "csv":
        rows = []
        for item in results:
            rows.extend(report_rows(item) if isinstance(item, WeakValueReport) else sweep_rows(item))
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=_CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buffer.getvalue()
    elif fmt == "json":
        payload = [
            report_json(item) if isinstance(item, WeakValueReport) else sweep_json(item)
            for item in results
        ]
        text = json.dumps(payload[0] if len(payload) == 1 else payload, indent=2)
    else:
        raise ValueError(f"unknown report format {fmt!r}")

    if destination is not None:
        if hasattr(destination, "write"):
            destination.write(text)
        else:
            Path(destination).write_text(text, encoding="utf-8")
    return text
