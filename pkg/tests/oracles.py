"""Independent reference computations used by several test modules."""

import numpy as np


def scan_minimizer(x, psi_i, f, span=None, points=4001):
    """Minimize sum psi (f - w x)^2 over w without the closed-form solution.

    A dense grid scan of the objective brackets the minimum; the bracket is
    then bisected on the sign of the objective's slope, which keeps full
    precision where the objective itself is too flat to resolve.
    """
    def objective(w):
        return np.sum(psi_i[None, :] * (f[None, :] - w[:, None] * x[None, :]) ** 2, axis=1)

    def slope(w):
        return np.sum(psi_i * x * (w * x - f))

    if span is None:
        active = (psi_i > 0) & (x != 0)
        span = 2.0 * np.max(np.abs(f[active] / x[active])) + 1.0
    grid = np.linspace(-span, span, points)
    k = int(np.argmin(objective(grid)))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, points - 1)]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if slope(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def random_lwr_instance(rng, samples=None, kernels=None):
    samples = samples or int(rng.integers(20, 200))
    kernels = kernels or int(rng.integers(1, 12))
    x = np.sort(rng.uniform(0.0, 1.0, samples))[::-1]
    psi = rng.uniform(0.0, 1.0, (samples, kernels))
    psi[rng.uniform(size=psi.shape) < 0.4] = 0.0
    psi[0, :] = np.maximum(psi[0, :], 0.1)  # every kernel sees at least one sample
    f = rng.normal(scale=3.0, size=samples)
    return x, psi, f
