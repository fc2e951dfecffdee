"""Kernel-width, kernel-number and goal-change experiments."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .generator import IntegrationBlowupError, Rollout, rollout
from .learner import DegenerateGoalError, DmpModel, Formulation, TransformParams, fit_dmp
from .phase import PhaseKind
from .trajectory import Demonstration, euclidean_error

WIDTH_FACTORS = (0.2, 2.0 / 3.0, 1.0, 2.0, 4.0, 10.0, 20.0)
KERNEL_COUNTS = (5, 10, 25, 50, 100, 200, 500)


@dataclass(frozen=True)
class SweepReport:
    """Error grid of shape (letters, axis); failed cells hold NaN."""

    axis_name: str
    axis: tuple
    letters: tuple
    errors: np.ndarray

    def argmin(self, letter: str):
        row = self.errors[self.letters.index(letter)]
        if np.all(np.isnan(row)):
            return None
        return self.axis[int(np.nanargmin(row))]

    def column(self, letter: str) -> np.ndarray:
        return self.errors[self.letters.index(letter)]

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow([self.axis_name, *self.letters])
        for k, a in enumerate(self.axis):
            w.writerow([repr(a), *(repr(float(e)) for e in self.errors[:, k])])
        return out.getvalue()

    def to_json(self) -> str:
        doc = {
            "axis_name": self.axis_name,
            "axis": list(self.axis),
            "letters": list(self.letters),
            "errors": [[None if math.isnan(e) else float(e) for e in row] for row in self.errors],
        }
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "SweepReport":
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
        if len(rows) < 2 or len(rows[0]) < 2:
            raise ValueError("report needs a header and at least one row")
        header = rows[0]
        try:
            data = np.array([[float(v) for v in r] for r in rows[1:]])
        except ValueError:
            raise ValueError("report contains a non-numeric cell") from None
        if data.shape[1] != len(header):
            raise ValueError("report rows do not match its header")
        cast = int if header[0] == "kernels" else float
        return cls(header[0], tuple(cast(a) for a in data[:, 0]), tuple(header[1:]),
                   data[:, 1:].T.copy())


def round_trip_error(demo: Demonstration, **fit_options) -> float:
    """Fit ``demo``, roll out with its own endpoints and measure the error."""
    model = fit_dmp(demo, **fit_options)
    return euclidean_error(rollout(model).positions, demo.positions)


def _cell(demo, **fit_options) -> float:
    try:
        return round_trip_error(demo, **fit_options)
    except (DegenerateGoalError, IntegrationBlowupError, ValueError):
        return float("nan")


def _sweep(demos, axis_name, axis, options_for) -> SweepReport:
    if not axis:
        raise ValueError("sweep axis is empty")
    names = tuple(demos)
    errors = np.array([[_cell(demos[n], **options_for(v)) for v in axis] for n in names])
    return SweepReport(axis_name, tuple(axis), names, errors.reshape(len(names), len(axis)))


def _base_options(params):
    return {"params": params or TransformParams(), "phase_kind": PhaseKind.LINEAR,
            "truncated": True}


def sweep_width(demos: Mapping[str, Demonstration], width_factors: Sequence[float] = WIDTH_FACTORS,
                params: TransformParams | None = None) -> SweepReport:
    """Round-trip error per letter for each kernel width (in units of 1/N).

    The kernel count follows the one-per-ten-samples rule.
    """
    if any(not w > 0 for w in width_factors):
        raise ValueError("width factors must be positive")
    base = _base_options(params)
    return _sweep(demos, "width_factor", tuple(float(w) for w in width_factors),
                  lambda w: {**base, "width_factor": w})


def sweep_number(demos: Mapping[str, Demonstration], counts: Sequence[int] = KERNEL_COUNTS,
                 params: TransformParams | None = None) -> SweepReport:
    """Round-trip error per letter for each kernel count at width 1/N."""
    if any(int(n) < 1 for n in counts):
        raise ValueError("kernel counts must be at least 1")
    base = _base_options(params)
    return _sweep(demos, "kernels", tuple(int(n) for n in counts),
                  lambda n: {**base, "width_factor": 1.0, "n_kernels": n})


def reanchor(demo: Demonstration, goal, phase=None) -> np.ndarray:
    """Demonstration positions shifted so the endpoint lands on ``goal``.

    The shift grows linearly from 0 at the start to ``goal - g`` at the
    end (in time, or in ``1 - x`` when a phase config is given).
    """
    goal = np.asarray(goal, dtype=float)
    pos = demo.positions
    if phase is None:
        progress = np.linspace(0.0, 1.0, demo.sample_count)
    else:
        progress = 1.0 - phase.at(demo.times) / phase.x0
    return pos + progress[:, None] * (goal - pos[-1])


@dataclass(frozen=True)
class GoalChangeResult:
    original_error: float
    dmpstar_error: float
    mirror_flag: bool
    goal: np.ndarray
    original: Rollout
    dmpstar: Rollout
    reference: np.ndarray
    original_model: DmpModel
    dmpstar_model: DmpModel


def goal_change_experiment(demo: Demonstration, goal_deltas, alpha_z: float = 25.0,
                           beta_z: float = 25.0 / 4.0, **fit_options) -> GoalChangeResult:
    """Compare both formulations when the goal moves by ``goal_deltas``.

    Errors are measured against the demonstration re-anchored to the new
    goal, so they score shape rather than position.
    """
    deltas = np.asarray(goal_deltas, dtype=float).reshape(-1)
    if deltas.size != demo.n_dofs:
        raise ValueError(f"{deltas.size} goal deltas for {demo.n_dofs} dofs")
    orig = fit_dmp(demo, TransformParams(alpha_z, beta_z, Formulation.ORIGINAL), **fit_options)
    star = fit_dmp(demo, TransformParams(alpha_z, beta_z, Formulation.GOAL_ROBUST), **fit_options)
    goal = orig.g + deltas
    r_orig = rollout(orig, g=goal)
    r_star = rollout(star, g=goal)
    reference = reanchor(demo, goal, star.phase)
    mirrored = bool(np.any(np.sign(goal - orig.y0) != np.sign(orig.g - orig.y0)))
    return GoalChangeResult(
        euclidean_error(r_orig.positions, reference),
        euclidean_error(r_star.positions, reference),
        mirrored, goal, r_orig, r_star, reference, orig, star)
