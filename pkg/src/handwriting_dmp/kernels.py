"""Basis-function banks and the forcing term built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Kernel value at the edge of its truncated support.
BOUNDARY_VALUE = 0.5
# round-off allowance on the support test, so abutting supports share their edge
_EDGE_TOL = 1e-12


@dataclass(frozen=True)
class KernelBank:
    """N kernels evenly spread over the phase interval [0, 1].

    Kernel ``i`` sits in the middle of the ``i``-th of N equal cells, so a
    bank of width factor 1 (support width 1/N) tiles [0, 1] with adjacent
    supports meeting exactly. ``shapes`` follow from the half-width through
    the boundary rule ``h = 2 ln(1/rho) / theta**2``.
    """

    centers: np.ndarray
    shapes: np.ndarray
    half_widths: np.ndarray
    width_factor: float
    truncated: bool
    rho: float = BOUNDARY_VALUE

    @property
    def n_kernels(self) -> int:
        return len(self.centers)

    def to_dict(self) -> dict:
        return {"N": self.n_kernels, "width_factor": self.width_factor,
                "truncated": self.truncated, "rho": self.rho}

    @classmethod
    def from_dict(cls, d: dict) -> "KernelBank":
        return build_bank(int(d["N"]), float(d["width_factor"]), bool(d["truncated"]),
                          rho=float(d.get("rho", BOUNDARY_VALUE)))


def build_bank(n_kernels: int, width_factor: float = 1.0, truncated: bool = True,
               rho: float = BOUNDARY_VALUE) -> KernelBank:
    if n_kernels < 1:
        raise ValueError("kernel count must be at least 1")
    if not width_factor > 0:
        raise ValueError("width_factor must be positive")
    if not 0 < rho < 1:
        raise ValueError("rho must lie in (0, 1)")
    n = n_kernels
    centers = (np.arange(n) + 0.5) / n
    theta = np.full(n, width_factor / (2.0 * n))
    shapes = 2.0 * math.log(1.0 / rho) / theta**2
    for a in (centers, theta, shapes):
        a.setflags(write=False)
    return KernelBank(centers, shapes, theta, float(width_factor), bool(truncated), float(rho))


def activations(bank: KernelBank, x) -> np.ndarray:
    """Kernel activations at phase value(s) ``x``.

    Returns an array of shape ``np.shape(x) + (N,)``. Truncated kernels use
    ``exp(-h/2 (x-c)^2)`` inside ``|x-c| <= theta`` and 0 outside; the full
    Gaussian variant uses ``exp(-h (x-c)^2)`` everywhere.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or np.any(x > 1.0) or np.any(np.isnan(x)):
        raise ValueError("phase must lie in [0, 1]")
    d = x[..., None] - bank.centers
    if not bank.truncated:
        return np.exp(-bank.shapes * d**2)
    psi = np.exp(-0.5 * bank.shapes * d**2)
    return np.where(np.abs(d) <= bank.half_widths + _EDGE_TOL, psi, 0.0)


def normalized_forcing(psi: np.ndarray, weights: np.ndarray, x) -> np.ndarray:
    """``(sum psi w / sum psi) * x`` with 0 wherever no kernel is active."""
    total = psi.sum(axis=-1)
    num = psi @ weights
    if num.ndim > total.ndim:
        total = total[..., None]
    safe = np.where(total > 0, total, 1.0)
    return np.where(total > 0, num / safe, 0.0) * np.asarray(x, dtype=float)


def forcing_value(bank: KernelBank, weights, x):
    """Forcing term f(x) for one DoF's weights (scalar or array ``x``)."""
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (bank.n_kernels,):
        raise ValueError(f"expected {bank.n_kernels} weights, got {weights.shape}")
    f = normalized_forcing(activations(bank, x), weights, x)
    return float(f) if np.ndim(f) == 0 else f
