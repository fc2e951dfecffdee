"""Canonical system: the phase variable that replaces explicit time."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class PhaseKind(str, Enum):
    EXPONENTIAL = "exponential"
    LINEAR = "linear"


@dataclass(frozen=True)
class PhaseConfig:
    """Phase decay settings.

    ``alpha_x`` is used by the exponential kind, ``T`` (seconds) by the
    linear kind. A linear phase falls from ``x0`` to exactly 0 at ``t = T``
    and stays there.
    """

    kind: PhaseKind = PhaseKind.LINEAR
    alpha_x: float = 1.0
    T: float = 1.0
    x0: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", PhaseKind(self.kind))
        if not self.alpha_x > 0:
            raise ValueError("alpha_x must be positive")
        if not self.T > 0:
            raise ValueError("T must be positive")
        if not 0 < self.x0 <= 1:
            raise ValueError("x0 must lie in (0, 1]")

    def at(self, t):
        """Phase value(s) at time(s) ``t``, evaluated in closed form."""
        t = np.asarray(t, dtype=float)
        if self.kind is PhaseKind.EXPONENTIAL:
            return self.x0 * np.exp(-self.alpha_x * t)
        return np.maximum(0.0, self.x0 * (1.0 - t / self.T))

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "alpha_x": self.alpha_x, "T": self.T, "x0": self.x0}

    @classmethod
    def from_dict(cls, d: dict) -> "PhaseConfig":
        return cls(PhaseKind(d["kind"]), float(d["alpha_x"]), float(d["T"]), float(d["x0"]))


def step_count(duration: float, dt: float) -> int:
    """Number of samples ``floor(duration/dt) + 1``, tolerant of float round-off."""
    return int(math.floor(duration / dt + 1e-9)) + 1


def phase_sequence(config: PhaseConfig, duration: float, dt: float) -> np.ndarray:
    """Phase values x_t at t = 0, dt, 2 dt, ... up to ``duration``."""
    if not duration > 0 or not dt > 0:
        raise ValueError("duration and dt must be positive")
    if dt > duration:
        raise ValueError("dt must not exceed duration")
    return config.at(np.arange(step_count(duration, dt)) * dt)
