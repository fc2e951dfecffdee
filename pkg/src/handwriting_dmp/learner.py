"""Learning DMP weights from a single demonstration.

Two transformation systems are supported. ORIGINAL scales the forcing term
by the goal offset ``g - y0``; GOAL_ROBUST scales it by ``alpha_z*beta_z``
and subtracts a phase-weighted copy of the goal offset, so the learned
weights do not depend on where the goal lies.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .kernels import KernelBank, activations, build_bank
from .phase import PhaseConfig, PhaseKind
from .trajectory import Demonstration

log = logging.getLogger(__name__)

#: Smallest goal offset the ORIGINAL formulation can learn from.
MIN_GOAL_OFFSET = 1e-8


class Formulation(str, Enum):
    ORIGINAL = "original"
    GOAL_ROBUST = "goal-robust"


class DegenerateGoalError(ValueError):
    """ORIGINAL formulation asked to learn a DoF whose goal equals its start."""


@dataclass(frozen=True)
class TransformParams:
    alpha_z: float = 25.0
    beta_z: float = 25.0 / 4.0
    formulation: Formulation = Formulation.GOAL_ROBUST

    def __post_init__(self):
        object.__setattr__(self, "formulation", Formulation(self.formulation))
        if not (self.alpha_z > 0 and self.beta_z > 0):
            raise ValueError("alpha_z and beta_z must be positive")

    @property
    def stiffness(self) -> float:
        return self.alpha_z * self.beta_z


@dataclass(frozen=True)
class DofModel:
    weights: np.ndarray
    y0: float
    g: float
    name: str = ""

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 1 or not np.all(np.isfinite(w)):
            raise ValueError("weights must be a finite 1-D array")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "y0", float(self.y0))
        object.__setattr__(self, "g", float(self.g))


@dataclass(frozen=True)
class DmpModel:
    bank: KernelBank
    phase: PhaseConfig
    params: TransformParams
    dofs: tuple
    dt: float
    duration: float
    # kernel indices (per DoF) that saw no activated sample during fitting
    inactive_kernels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "dofs", tuple(self.dofs))
        if not (self.dt > 0 and self.duration > 0):
            raise ValueError("dt and duration must be positive")
        for d in self.dofs:
            if len(d.weights) != self.bank.n_kernels:
                raise ValueError(f"dof {d.name!r} has {len(d.weights)} weights for "
                                 f"{self.bank.n_kernels} kernels")

    @property
    def dof_names(self) -> tuple:
        return tuple(d.name for d in self.dofs)

    @property
    def weights(self) -> np.ndarray:
        """Weights as an (N, n_dofs) array."""
        return np.column_stack([d.weights for d in self.dofs])

    @property
    def y0(self) -> np.ndarray:
        return np.array([d.y0 for d in self.dofs])

    @property
    def g(self) -> np.ndarray:
        return np.array([d.g for d in self.dofs])

    def to_dict(self) -> dict:
        return {
            "params": {"alpha_z": self.params.alpha_z, "beta_z": self.params.beta_z,
                       "formulation": self.params.formulation.value},
            "phase": self.phase.to_dict(),
            "bank": self.bank.to_dict(),
            "dofs": [{"name": d.name, "weights": d.weights.tolist(), "y0": d.y0, "g": d.g}
                     for d in self.dofs],
            "dt": self.dt,
            "duration": self.duration,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "DmpModel":
        p = doc["params"]
        return cls(
            bank=KernelBank.from_dict(doc["bank"]),
            phase=PhaseConfig.from_dict(doc["phase"]),
            params=TransformParams(float(p["alpha_z"]), float(p["beta_z"]),
                                   Formulation(p["formulation"])),
            dofs=tuple(DofModel(d["weights"], d["y0"], d["g"], d.get("name", ""))
                       for d in doc["dofs"]),
            dt=float(doc["dt"]),
            duration=float(doc["duration"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def loads(cls, text: str) -> "DmpModel":
        return cls.from_dict(json.loads(text))


def forcing_targets(y, yd, ydd, g: float, y0: float, x, params: TransformParams) -> np.ndarray:
    """Per-sample forcing values that make the transformation system
    reproduce the demonstrated accelerations exactly."""
    y, yd, ydd, x = (np.asarray(a, dtype=float) for a in (y, yd, ydd, x))
    spring = params.alpha_z * (params.beta_z * (g - y) - yd)
    if params.formulation is Formulation.ORIGINAL:
        if abs(g - y0) < MIN_GOAL_OFFSET:
            raise DegenerateGoalError(
                f"goal {g!r} equals start {y0!r}; the original formulation cannot learn this DoF")
        return (ydd - spring) / (g - y0)
    k = params.stiffness
    return (ydd - spring + k * (g - y0) * x) / k


def fit_weights(x, psi, targets) -> tuple[np.ndarray, np.ndarray]:
    """Locally weighted regression of ``targets ~ w_i * x`` for every kernel.

    Parameters
    ----------
    x : array, shape (M,)
        Phase value of each sample.
    psi : array, shape (M, N)
        Activation of each kernel at each sample.
    targets : array, shape (M,)
        Forcing values to fit.

    Returns
    -------
    weights : array, shape (N,)
    inactive : bool array, shape (N,)
        Kernels whose weighted denominator is zero; their weight is 0.
    """
    x = np.asarray(x, dtype=float)
    psi = np.asarray(psi, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if psi.ndim != 2 or psi.shape[0] != x.shape[0] or targets.shape != x.shape:
        raise ValueError("phase, activation matrix and targets must share the sample axis")
    num = (x * targets) @ psi
    den = (x * x) @ psi
    inactive = den <= 0.0
    weights = np.divide(num, den, out=np.zeros_like(num), where=~inactive)
    return weights, inactive


def default_kernel_count(samples: int) -> int:
    """One kernel per ten samples, rounded half up, at least one."""
    return max(1, int(math.floor(samples / 10.0 + 0.5)))


def fit_dmp(
    demo: Demonstration,
    params: TransformParams | None = None,
    phase_kind: PhaseKind | str = PhaseKind.LINEAR,
    width_factor: float = 1.0,
    n_kernels: int | None = None,
    truncated: bool = True,
    alpha_x: float | None = None,
) -> DmpModel:
    """Fit one weight vector per DoF of ``demo``.

    The kernel count defaults to ``round(M / 10)``. For an exponential phase
    ``alpha_x`` defaults to ``ln(100) / duration`` so the phase decays to
    1% over the demonstration.
    """
    params = params or TransformParams()
    duration = demo.duration
    if alpha_x is None:
        alpha_x = math.log(100.0) / duration
    phase = PhaseConfig(PhaseKind(phase_kind), alpha_x=alpha_x, T=duration)
    bank = build_bank(n_kernels or default_kernel_count(demo.sample_count), width_factor, truncated)

    x = phase.at(demo.times)
    psi = activations(bank, x)
    dofs, inactive = [], []
    for j, name in enumerate(demo.dofs):
        y = demo.positions[:, j]
        f = forcing_targets(y, demo.velocities[:, j], demo.accelerations[:, j],
                            y[-1], y[0], x, params)
        w, empty = fit_weights(x, psi, f)
        dofs.append(DofModel(w, y[0], y[-1], name))
        inactive.append(tuple(np.flatnonzero(empty).tolist()))
    if inactive and inactive[0]:
        log.debug("%d of %d kernels saw no samples", len(inactive[0]), bank.n_kernels)
    return DmpModel(bank, phase, params, tuple(dofs), demo.dt, duration, tuple(inactive))


def with_formulation(model: DmpModel, formulation: Formulation) -> DmpModel:
    """Same weights and constants under another transformation system."""
    params = TransformParams(model.params.alpha_z, model.params.beta_z, formulation)
    return DmpModel(model.bank, model.phase, params, model.dofs, model.dt, model.duration)


def models_from_arrays(bank: KernelBank, phase: PhaseConfig, params: TransformParams,
                       weights, y0: Sequence[float], g: Sequence[float],
                       dt: float, duration: float, names: Sequence[str] | None = None) -> DmpModel:
    """Build a model directly from an (N, n_dofs) weight array."""
    weights = np.asarray(weights, dtype=float).reshape(bank.n_kernels, -1)
    names = names or [f"q{j}" for j in range(weights.shape[1])]
    dofs = tuple(DofModel(weights[:, j], y0[j], g[j], names[j]) for j in range(weights.shape[1]))
    return DmpModel(bank, phase, params, dofs, dt, duration)
