"""Parameter sweeps over scenario fields.

Grid points are independent, so they may be evaluated in worker processes;
rows always come back in grid order (first axis slowest).
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .concentration import run
from .errors import PhysicalRegimeError
from .scenario import Scenario, build_config

ROW_FIELDS = ("img_n_w", "success", "success_prob", "is_density", "entropy_gain", "majorized",
              "fidelity", "max_residual", "error")


def grid_points(scenario: Scenario):
    return list(itertools.product(*(ax.values.tolist() for ax in scenario.axes)))


def evaluate_point(scenario: Scenario, values: tuple) -> dict:
    names = [ax.name for ax in scenario.axes]
    config = build_config(scenario.with_values(dict(zip(names, values))))
    row = dict(zip(names, (float(v) for v in values)))
    try:
        res = run(config, analytic_weak_value=scenario.weak_value_source == "analytic")
    except PhysicalRegimeError as e:
        row.update({k: None for k in ROW_FIELDS})
        row["error"] = type(e).__name__
        return row
    row.update({
        "img_n_w": None if res.weak_value is None else float(res.weak_value.value.imag),
        "success": res.success,
        "success_prob": float(res.success_prob),
        "is_density": bool(res.is_density),
        "entropy_gain": float(res.verdict.entropy_gain),
        "majorized": bool(res.verdict.majorized),
        "fidelity": res.fidelity,
        "max_residual": None if res.residuals is None else res.residuals.max_abs,
        "error": "UnphysicalOutput" if res.unphysical_output else None,
    })
    return row


def _evaluate(args):
    return evaluate_point(*args)


def validate(scenario: Scenario):
    """Build the config at every grid point; raises ``ScenarioError`` on the first invalid one."""
    names = [ax.name for ax in scenario.axes]
    for values in grid_points(scenario):
        build_config(scenario.with_values(dict(zip(names, values))))


def run_sweep(scenario: Scenario, jobs: int = 1) -> list:
    points = grid_points(scenario)
    tasks = [(scenario, p) for p in points]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_evaluate, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        rows = [_evaluate(t) for t in tasks]
    return [{"index": i, **r} for i, r in enumerate(rows)]


def flag_boundaries(xs, flags) -> list:
    """Midpoints between consecutive grid points where a boolean flag flips."""
    xs = np.asarray(xs, dtype=float)
    out = []
    for i in range(len(xs) - 1):
        if flags[i] is None or flags[i + 1] is None:
            continue
        if bool(flags[i]) != bool(flags[i + 1]):
            out.append(0.5 * (xs[i] + xs[i + 1]))
    return out
