"""Euler integration of a learned model into a trajectory."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .kernels import activations, normalized_forcing
from .learner import MIN_GOAL_OFFSET, DmpModel, Formulation
from .phase import step_count

#: Rollouts abort once any position leaves this range (meters).
BLOWUP_LIMIT = 1e6


class IntegrationBlowupError(RuntimeError):
    def __init__(self, step: int):
        super().__init__(f"integration diverged at step {step}")
        self.step = step


@dataclass(frozen=True)
class RolloutRequest:
    model: DmpModel
    y0: Sequence[float] | None = None
    g: Sequence[float] | None = None
    dt: float | None = None
    duration: float | None = None
    settle: float = 0.0
    v0: Sequence[float] | None = None


@dataclass(frozen=True)
class Rollout:
    """Generated trajectory; arrays have shape (samples, n_dofs)."""

    dt: float
    positions: np.ndarray
    velocities: np.ndarray
    accelerations: np.ndarray
    phase: np.ndarray
    dofs: tuple
    y0: np.ndarray
    g: np.ndarray
    # DoFs where the ORIGINAL formulation was run with g == y0
    degenerate: tuple = ()

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.positions)) * self.dt


def _vector(value, default: np.ndarray, what: str) -> np.ndarray:
    if value is None:
        return default.copy()
    v = np.array(value, dtype=float).reshape(-1)
    if v.shape != default.shape:
        raise ValueError(f"{what} override has {v.size} values for {default.size} dofs")
    return v


def forcing_profile(model: DmpModel, x: np.ndarray) -> np.ndarray:
    """Forcing term of every DoF at phases ``x``; shape (len(x), n_dofs)."""
    return normalized_forcing(activations(model.bank, x), model.weights, x[:, None])


def acceleration(model: DmpModel, y, yd, x, f, y0, g):
    """Transformation-system acceleration for the model's formulation."""
    p = model.params
    spring = p.alpha_z * (p.beta_z * (g - y) - yd)
    if p.formulation is Formulation.ORIGINAL:
        return spring + (g - y0) * f
    k = p.stiffness
    return spring - k * (g - y0) * x + k * f


def initial_acceleration(model: DmpModel, y0=None, g=None) -> np.ndarray:
    """Acceleration of every DoF at t=0 from rest, without integrating."""
    y0 = _vector(y0, model.y0, "start")
    g = _vector(g, model.g, "goal")
    x0 = np.array([model.phase.x0])
    f = forcing_profile(model, x0)[0]
    return acceleration(model, y0, np.zeros_like(y0), model.phase.x0, f, y0, g)


def rollout(req: RolloutRequest | DmpModel, **overrides) -> Rollout:
    """Integrate the transformation system with explicit Euler steps.

    Accepts a :class:`RolloutRequest` or a model plus the request's fields
    as keyword arguments. The acceleration at step t is evaluated at the
    state (y_t, yd_t, x_t); then ``y_{t+1} = y_t + yd_t dt`` and
    ``yd_{t+1} = yd_t + ydd_t dt``. Integration starts at rest unless
    ``v0`` is given.
    """
    if isinstance(req, DmpModel):
        req = RolloutRequest(req, **overrides)
    model = req.model
    dt = req.dt or model.dt
    duration = (req.duration or model.duration) + req.settle
    if not (dt > 0 and duration > 0):
        raise ValueError("dt and duration must be positive")
    y0 = _vector(req.y0, model.y0, "start")
    g = _vector(req.g, model.g, "goal")
    v = _vector(req.v0, np.zeros_like(y0), "velocity")

    n = step_count(duration, dt)
    x = model.phase.at(np.arange(n) * dt)
    f = forcing_profile(model, x)

    pos = np.empty((n, len(y0)))
    vel = np.empty_like(pos)
    acc = np.empty_like(pos)
    y = y0.copy()
    for t in range(n):
        a = acceleration(model, y, v, x[t], f[t], y0, g)
        pos[t], vel[t], acc[t] = y, v, a
        if not (np.all(np.isfinite(a)) and np.all(np.abs(y) < BLOWUP_LIMIT)):
            raise IntegrationBlowupError(t)
        y = y + v * dt
        v = v + a * dt

    degenerate = ()
    if model.params.formulation is Formulation.ORIGINAL:
        degenerate = tuple(j for j in range(len(y0)) if abs(g[j] - y0[j]) < MIN_GOAL_OFFSET)
    return Rollout(dt, pos, vel, acc, x, model.dof_names, y0, g, degenerate)
