"""Friedrichs mollifier on the circle: bump kernel, smoothing, commutator.

The kernel is the standard exponential bump scaled to width epsilon and
normalized to unit grid quadrature, so smoothing preserves constants
exactly and the multiplier satisfies |rho_hat(k)| <= rho_hat(0) = 1.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .spectral import Grid, PeriodicField, Spectrum, analyze, derivative, synthesize


@dataclass(frozen=True)
class BumpKernel:
    epsilon: float
    samples: PeriodicField

    @cached_property
    def multiplier(self) -> np.ndarray:
        """Convolution-theorem factor 2pi*rho_hat(k), shifted mode order."""
        return 2.0 * np.pi * analyze(self.samples).coeffs


def bump_kernel(epsilon: float, grid: Grid) -> BumpKernel:
    """Rescaled weight-1 bump rho_eps(x) = (1/eps) rho(x/eps) on the grid."""
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    if epsilon * grid.n < 16:
        raise ValueError("kernel unresolved: need epsilon * n >= 16")
    x = grid.nodes
    xw = np.mod(x + np.pi, 2.0 * np.pi) - np.pi
    s = xw / epsilon
    vals = np.zeros(grid.n)
    inside = np.abs(s) < 0.5
    vals[inside] = np.exp(-1.0 / (1.0 - (2.0 * s[inside]) ** 2)) / epsilon
    weight = vals.sum() * (2.0 * np.pi / grid.n)
    vals /= weight
    return BumpKernel(epsilon, PeriodicField(grid, vals))


def mollify(u: PeriodicField, kernel: BumpKernel) -> PeriodicField:
    """Spectral convolution rho_eps * u."""
    if u.grid != kernel.samples.grid:
        raise ValueError("grid mismatch")
    c = analyze(u).coeffs * kernel.multiplier
    return synthesize(Spectrum(u.grid, c))


def mollifier_commutator(u: PeriodicField, m: PeriodicField,
                         kernel: BumpKernel) -> PeriodicField:
    """J_eps(u m_x) - u J_eps(m_x), the smoothing/transport commutator."""
    if u.grid != m.grid:
        raise ValueError("grid mismatch")
    dm = derivative(m)
    left = mollify(PeriodicField(u.grid, u.values * dm.values), kernel)
    right = mollify(dm, kernel)
    return PeriodicField(u.grid, left.values - u.values * right.values)
