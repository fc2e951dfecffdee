"""Synthetic handwriting samples.

Each letter is a cubic spline through a fixed list of control points (in
millimeters), traversed at constant path speed under a minimum-jerk
progress profile so the pen starts and ends at rest.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

from .trajectory import Demonstration

SAMPLES = 1000
DT = 1.0 / 150.0

# single-stroke letters, roughly 30-40 mm tall
_CONTROL_POINTS = {
    "a": [(24, 26), (18, 30), (8, 28), (3, 18), (5, 6), (12, 1), (20, 5),
          (24, 14), (25, 25), (27, 27), (28.5, 24), (28, 12), (29, 3), (32, 0), (35, 2)],
    "B": [(2, 0), (2, 12), (2, 24), (2, 36), (12, 36), (19, 32), (19, 24),
          (12, 21), (7, 19), (12, 17), (22, 13), (22, 4), (13, 0), (5, 1)],
    "D": [(3, 36), (3, 24), (3, 12), (3, 0), (14, 1), (24, 8), (27, 18),
          (24, 29), (14, 34), (6, 33)],
    "e": [(3, 14), (14, 14), (23, 15), (22, 24), (14, 28), (5, 24), (2, 13),
          (6, 3), (15, 0), (24, 4)],
    "M": [(1, 0), (2, 18), (4, 34), (9, 22), (15, 9), (21, 22), (26, 34),
          (28, 18), (29, 3)],
}

LETTERS = tuple(_CONTROL_POINTS)


def min_jerk(s):
    """Minimum-jerk progress 0 -> 1 with zero end velocity and acceleration."""
    s = np.asarray(s, dtype=float)
    return s**3 * (10.0 - 15.0 * s + 6.0 * s**2)


def spline_path(points, samples: int, speed_floor: float = 0.005) -> np.ndarray:
    """Points along the spline through ``points`` sampled in time.

    Path speed follows the two-thirds power law of handwriting (speed
    proportional to curvature**(-1/3), relative to the slowest allowed
    ``speed_floor``) under a global minimum-jerk progress profile.
    """
    pts = np.asarray(points, dtype=float)
    chord = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(pts, axis=0), axis=1))])
    spline = CubicSpline(chord, pts, bc_type="natural")
    u = np.linspace(0.0, chord[-1], 20 * samples)
    d1, d2 = spline(u, 1), spline(u, 2)
    speed = np.linalg.norm(d1, axis=1)
    curvature = np.abs(d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]) / np.maximum(speed, 1e-12) ** 3
    rel_speed = np.maximum(speed_floor, (1.0 + curvature * chord[-1]) ** (-1.0 / 3.0))
    # time spent per unit of the spline parameter, accumulated into a clock
    dtime = speed / rel_speed
    clock = np.concatenate([[0.0], np.cumsum(0.5 * (dtime[1:] + dtime[:-1]) * np.diff(u))])
    target = min_jerk(np.linspace(0.0, 1.0, samples)) * clock[-1]
    return spline(np.interp(target, clock, u))


def letter(name: str, samples: int = SAMPLES, dt: float = DT) -> Demonstration:
    """Two-DoF (x, y) demonstration of a bundled letter, in meters."""
    try:
        pts = _CONTROL_POINTS[name]
    except KeyError:
        raise KeyError(f"unknown letter {name!r}; bundled: {', '.join(LETTERS)}") from None
    return Demonstration(dt, spline_path(pts, samples) * 1e-3, ("x", "y"))


def bundled_letters(samples: int = SAMPLES, dt: float = DT) -> dict:
    return {name: letter(name, samples, dt) for name in LETTERS}


def two_stroke_d(dt: float = DT, stroke_samples: int = 400, lift_samples: int = 30,
                 lift_height: float = 0.03) -> Demonstration:
    """Three-DoF 'D' written as a stem and a bowl with a pen lift between.

    The pen lifts ``lift_height`` meters over ``lift_samples * dt`` seconds
    while travelling from the stem's bottom back to its top.
    """
    plane = 0.02
    stem = spline_path([(3, 36), (3, 24), (3, 12), (3, 0)], stroke_samples) * 1e-3
    bowl = spline_path([(3, 36), (14, 35), (24, 29), (27, 18), (24, 8), (14, 1), (3, 0)],
                       stroke_samples) * 1e-3
    s = min_jerk(np.linspace(0.0, 1.0, lift_samples + 2))[1:-1, None]
    travel = stem[-1] + s * (bowl[0] - stem[-1])
    bump = lift_height * np.sin(np.pi * np.linspace(0.0, 1.0, lift_samples + 2)[1:-1]) ** 2
    xy = np.vstack([stem, travel, bowl])
    z = np.concatenate([np.full(stroke_samples, plane), plane + bump, np.full(stroke_samples, plane)])
    return Demonstration(dt, np.column_stack([xy, z]), ("x", "y", "z"))


def on_plane(demo: Demonstration, height: float = 0.02) -> Demonstration:
    """Lift a planar demonstration into 3-D, written entirely on the plane z = ``height``."""
    z = np.full(demo.sample_count, height)
    return Demonstration(demo.dt, np.column_stack([demo.positions, z]), (*demo.dofs, "z"))
