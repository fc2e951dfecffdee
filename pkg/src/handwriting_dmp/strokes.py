"""Pen-stroke segmentation of 3-D captures and multi-stroke composition."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .generator import Rollout, rollout
from .learner import DmpModel, Formulation
from .trajectory import Demonstration

MIN_STROKE_SAMPLES = 3


@dataclass(frozen=True)
class SegmentationConfig:
    """Pen-down rule: ``|z - mu_z| < sigma`` and ``dz/dt <= theta``.

    ``mu_z=None`` estimates the writing plane from the capture.
    """

    theta: float = 0.05
    sigma: float = 0.005
    mu_z: float | None = None

    def __post_init__(self):
        if not (self.theta > 0 and self.sigma > 0):
            raise ValueError("theta and sigma must be positive")


@dataclass(frozen=True)
class Stroke:
    """A maximal pen-down run; ``end_index`` is exclusive."""

    samples: Demonstration
    start_index: int
    end_index: int
    pen_down: bool = True


@dataclass(frozen=True)
class Segmentation:
    strokes: tuple
    pen_down: np.ndarray
    mu_z: float
    theta: float
    sigma: float

    @property
    def pen_up_count(self) -> int:
        return int(np.count_nonzero(~self.pen_down))

    def manifest(self) -> dict:
        return {
            "strokes": [{"start_index": s.start_index, "end_index": s.end_index}
                        for s in self.strokes],
            "mu_z": self.mu_z,
            "theta": self.theta,
            "sigma": self.sigma,
            "pen_up_samples": self.pen_up_count,
        }

    def dumps(self) -> str:
        return json.dumps(self.manifest(), indent=1) + "\n"


def _z_channel(demo: Demonstration) -> int:
    if "z" not in demo.dofs:
        raise ValueError("demonstration has no z channel")
    return demo.dof_index("z")


def estimate_plane(demo: Demonstration) -> tuple[float, float]:
    """Writing-plane height and a suggested band half-width.

    The height is the median of z. The band is three median absolute
    deviations of z about that height, measured on slow samples
    (``|dz/dt|`` at most three times its median).
    """
    j = _z_channel(demo)
    z = demo.positions[:, j]
    vz = np.abs(demo.velocities[:, j])
    mu = float(np.median(z))
    slow = vz <= 3.0 * np.median(vz)
    sigma = 3.0 * float(np.median(np.abs(z[slow] - mu)))
    return mu, sigma


def _runs(mask: np.ndarray):
    """(start, stop) of every maximal run of True values."""
    edges = np.diff(np.concatenate([[0], mask.astype(np.int8), [0]]))
    return zip(np.flatnonzero(edges == 1), np.flatnonzero(edges == -1))


def segment(demo: Demonstration, config: SegmentationConfig | None = None,
            planar_dofs: Sequence[str] = ("x", "y")) -> Segmentation:
    """Split a 3-D capture into pen-down strokes, in writing order.

    Runs shorter than three samples are treated as pen-up. An empty
    stroke tuple is a valid result.
    """
    config = config or SegmentationConfig()
    j = _z_channel(demo)
    mu = estimate_plane(demo)[0] if config.mu_z is None else float(config.mu_z)
    z = demo.positions[:, j]
    vz = demo.velocities[:, j]
    down = (np.abs(z - mu) < config.sigma) & (vz <= config.theta)

    planar = demo.select(planar_dofs)
    strokes = []
    for start, stop in _runs(down):
        if stop - start < MIN_STROKE_SAMPLES:
            down[start:stop] = False
            continue
        sub = Demonstration(demo.dt, planar.positions[start:stop], planar.dofs)
        strokes.append(Stroke(sub, int(start), int(stop)))
    return Segmentation(tuple(strokes), down, mu, config.theta, config.sigma)


@dataclass(frozen=True)
class Composition:
    """Ordered stroke rollouts of a composed letter.

    ``gaps`` lists the pen-up travel between consecutive strokes; nothing
    is interpolated across them.
    """

    strokes: tuple
    gaps: tuple
    flagged: tuple = ()

    def manifest(self) -> dict:
        return {
            "strokes": [{"index": k, "samples": len(r.positions),
                         "start": r.positions[0].tolist(), "end": r.positions[-1].tolist()}
                        for k, r in enumerate(self.strokes)],
            "pen_up": [dict(g) for g in self.gaps],
            "original_formulation_strokes": list(self.flagged),
        }

    def dumps(self) -> str:
        return json.dumps(self.manifest(), indent=1) + "\n"


def compose(models: Sequence[DmpModel],
            overrides: Mapping[int, Mapping[str, Sequence[float]]] | None = None,
            settle: float = 1.0) -> Composition:
    """Roll out each stroke model with its start/goal overrides.

    ``overrides`` maps a stroke index to ``{"y0": [...], "g": [...]}``
    (either key optional). ``settle`` extends every rollout so the
    attractor reaches a moved goal.
    """
    overrides = overrides or {}
    rolls: list[Rollout] = []
    flagged = []
    for k, model in enumerate(models):
        ov = overrides.get(k, {})
        rolls.append(rollout(model, y0=ov.get("y0"), g=ov.get("g"), settle=settle))
        if model.params.formulation is Formulation.ORIGINAL:
            flagged.append(k)
    gaps = tuple(
        {"from": k, "to": k + 1,
         "lift": rolls[k].positions[-1].tolist(), "land": rolls[k + 1].positions[0].tolist()}
        for k in range(len(rolls) - 1))
    return Composition(tuple(rolls), gaps, tuple(flagged))
