"""Monitored scalars and property probes.

DiagRow is the one record type every integrator emits; the probe functions
here are pure evaluators shared by the solvers, the verify command, and the
test suite.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .lagrangian import DiffeoMap, compose
from .spectral import (
    PeriodicField,
    _clip_noise,
    analyze,
    derivative,
    l2_norm,
    lambda_power,
    linf_norm,
)

SENTINEL = float("nan")

CSV_COLUMNS = (
    "t",
    "energy_A",
    "h_q_norm",
    "min_ux",
    "min_phix",
    "m_l2",
    "dq_from_start",
    "apriori_residual",
    "chain_rule_residual",
)


@dataclass
class DiagRow:
    t: float
    energy_A: float
    h_q_norm: float
    min_ux: float
    min_phix: float
    m_l2: float
    dq_from_start: float
    apriori_residual: float
    chain_rule_residual: float
    step: Optional[int] = None  # recorder metadata, not serialized


def min_slope(u: PeriodicField) -> float:
    """Grid minimum of the spectral derivative (wave-breaking monitor)."""
    return float(np.min(derivative(u).values))


def min_jacobian(phi: DiffeoMap) -> float:
    """Grid minimum of phi_x (Jacobian-degeneration monitor)."""
    return float(np.min(phi.jacobian_values))


def apriori_residual(row1: DiagRow, row2: DiagRow) -> float:
    """One-sided check of d/dt ||m||^2 <= -3 min(u_x) ||m||^2.

    Evaluated at the left endpoint of a pair of consecutively recorded
    rows; nonpositive up to a time-discretization term on valid runs.
    """
    if not (row2.t > row1.t) or not math.isfinite(row2.t - row1.t):
        raise ValueError("non-adjacent rows")
    if row1.step is not None and row2.step is not None and row2.step <= row1.step:
        raise ValueError("non-adjacent rows")
    dt = row2.t - row1.t
    return (row2.m_l2**2 - row1.m_l2**2) / dt + 3.0 * row1.min_ux * row1.m_l2**2


def kato_ponce_ratio(u: PeriodicField, v: PeriodicField, s: float) -> float:
    """Measured constant of the commutator estimate
    ||L^s(uv) - u L^s v|| / (||u_x||_inf ||L^{s-1}v|| + ||L^s u|| ||v||_inf),
    with L^s the multiplier (1+k^2)^(s/2).  Returns 0 when both sides vanish.

    The commutator is assembled in its exact bilinear spectral form
    sum_j u_hat_j v_hat_m [L(j+m) - L(m)], which vanishes term by term for
    constant u; inputs band-limited to n/3 keep the product resolved.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    if u.grid != v.grid:
        raise ValueError("grid mismatch")
    n = u.grid.n
    modes = u.grid.modes.astype(np.float64)
    lam = (1.0 + modes**2) ** (s / 2.0)
    cu = _clip_noise(analyze(u).coeffs)
    cv = _clip_noise(analyze(v).coeffs)
    lhs_hat = np.zeros(n, dtype=np.complex128)
    for idx in np.nonzero(cu)[0]:
        j = idx - n // 2
        if j >= 0:
            src = slice(0, n - j)
            dst = slice(j, n)
        else:
            src = slice(-j, n)
            dst = slice(0, n + j)
        lhs_hat[dst] += cu[idx] * cv[src] * (lam[dst] - lam[src])
    lhs = float(np.sqrt(2.0 * np.pi * np.sum(np.abs(lhs_hat) ** 2)))
    rhs = linf_norm(derivative(u)) * l2_norm(lambda_power(v, s - 1.0)) \
        + l2_norm(lambda_power(u, s)) * linf_norm(v)
    if rhs == 0.0:
        return 0.0
    return lhs / rhs


def chain_rule_residual(u: PeriodicField, v: PeriodicField, phi: DiffeoMap) -> float:
    """max_x |u_x o phi - v_x / phi_x| for a Lagrangian snapshot."""
    ux_along = compose(derivative(u), phi)
    vx = derivative(v)
    return float(np.max(np.abs(ux_along.values - vx.values / phi.jacobian_values)))
