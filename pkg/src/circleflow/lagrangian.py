"""Geodesic flow in Lagrangian variables (phi, v) and the d_q metric.

Circle diffeomorphisms are stored as periodic displacements, phi(x) = x +
f(x), lift-anchored so phi(0) lies in [0, 2pi).  Composition evaluates the
truncated Fourier series at mapped nodes and inversion runs a safeguarded
per-node Newton iteration; both go through the selected kernel backend.
The Lagrangian and Eulerian integrations are independent code paths used to
cross-validate each other.
"""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence

import numpy as np

from . import kernels
from .euler import (
    EulerState,
    NumericalOverflow,
    SolverConfig,
    SpectralEngine,
    Trajectory,
)
from .spectral import Grid, PeriodicField, SymbolSpec, sobolev_norm

_NEWTON_TOL = 1e-12
_NEWTON_CAP = 50


def _coeffs(values: np.ndarray) -> np.ndarray:
    """Shifted-order spectrum of a value array (kernel input format)."""
    return np.fft.fftshift(np.fft.fft(values)) / values.shape[0]


def _deriv_values(values: np.ndarray) -> np.ndarray:
    n = values.shape[0]
    k = np.fft.ifftshift(np.arange(-n // 2, n // 2)).astype(np.float64)
    mult = 1j * k
    mult[n // 2] = 0.0
    return np.fft.ifft(mult * np.fft.fft(values)).real


@dataclass(frozen=True)
class DiffeoMap:
    """Orientation-preserving circle map phi(x) = x + f(x), min phi_x > 0."""

    displacement: PeriodicField

    def __post_init__(self):
        f = self.displacement.values
        shift = 2.0 * np.pi * math.floor(f[0] / (2.0 * np.pi))
        if shift != 0.0:
            object.__setattr__(
                self, "displacement",
                PeriodicField(self.displacement.grid, f - shift))
        if np.min(self.jacobian_values) <= 0.0:
            raise ValueError("not a diffeomorphism: Jacobian must be positive")

    @property
    def grid(self) -> Grid:
        return self.displacement.grid

    @cached_property
    def jacobian_values(self) -> np.ndarray:
        return 1.0 + _deriv_values(self.displacement.values)

    @cached_property
    def phi_values(self) -> np.ndarray:
        return self.grid.nodes + self.displacement.values

    @classmethod
    def identity(cls, grid: Grid) -> "DiffeoMap":
        return cls(PeriodicField.zero(grid))

    @classmethod
    def from_displacement(cls, f: PeriodicField) -> "DiffeoMap":
        return cls(f)


@dataclass
class LagrangianState:
    t: float
    phi: DiffeoMap
    v: PeriodicField


def compose(w: PeriodicField, phi: DiffeoMap) -> PeriodicField:
    """w o phi: the truncated series of w evaluated at the mapped nodes."""
    if w.grid != phi.grid:
        raise ValueError("grid mismatch")
    vals = kernels.eval_series(_coeffs(w.values), phi.phi_values)
    return PeriodicField(w.grid, vals)


def _invert_targets(f_values: np.ndarray, targets: np.ndarray) -> np.ndarray:
    c = _coeffs(f_values)
    bound = float(np.sum(np.abs(c))) + 1e-9
    return kernels.invert_monotone(c, targets, bound, _NEWTON_TOL, _NEWTON_CAP)


def invert_diffeo(phi: DiffeoMap) -> DiffeoMap:
    """phi^{-1} via monotone Newton per node (bisection fallback)."""
    x = phi.grid.nodes
    y = _invert_targets(phi.displacement.values, x)
    return DiffeoMap(PeriodicField(phi.grid, y - x))


def s_operator(u: PeriodicField, a: SymbolSpec) -> PeriodicField:
    """A^{-1}{[A,u]u_x - 2(Au)u_x}, the quadratic geodesic operator."""
    if a.invertible_on == "mean_zero_only":
        if abs(float(np.mean(u.values))) > 1e-12 * max(float(np.max(np.abs(u.values))), 1e-300):
            raise ValueError("zero mode not invertible")
    eng = SpectralEngine(u.grid, a)
    return PeriodicField(u.grid, eng.s_operator_values(u.values))


def spray(phi: DiffeoMap, v: PeriodicField, a: SymbolSpec) -> PeriodicField:
    """Conjugated quadratic operator S_phi(v) = (S(v o phi^{-1})) o phi."""
    u = compose(v, invert_diffeo(phi))
    return compose(s_operator(u, a), phi)


def dq_distance(phi1: DiffeoMap, phi2: DiffeoMap, q: float) -> float:
    """Chord sup-distance + H^{q-1} Jacobian gap + sup gap of 1/phi_x."""
    if q <= 1.5:
        raise ValueError("dq_distance requires q > 3/2")
    if phi1.grid != phi2.grid:
        raise ValueError("grid mismatch")
    d0 = float(np.max(np.abs(np.exp(1j * phi1.phi_values) - np.exp(1j * phi2.phi_values))))
    jac_gap = PeriodicField(phi1.grid, phi1.jacobian_values - phi2.jacobian_values)
    mid = sobolev_norm(jac_gap, q - 1.0)
    last = float(np.max(np.abs(1.0 / phi1.jacobian_values - 1.0 / phi2.jacobian_values)))
    return d0 + mid + last


class GeodesicEngine:
    """Array-level stage evaluations for the coupled (f, v) system."""

    def __init__(self, grid: Grid, symbol: SymbolSpec, dealias: str = "two_thirds"):
        self.grid = grid
        self.nodes = grid.nodes
        self.spectral = SpectralEngine(grid, symbol, dealias)

    def eulerian_velocity(self, f: np.ndarray, v: np.ndarray) -> np.ndarray:
        """u = v o phi^{-1} sampled on the grid."""
        y = _invert_targets(f, self.nodes)
        return kernels.eval_series(_coeffs(v), y)

    def spray_values(self, f: np.ndarray, v: np.ndarray) -> np.ndarray:
        u = self.eulerian_velocity(f, v)
        s = self.spectral.s_operator_values(u)
        return kernels.eval_series(_coeffs(s), self.nodes + f)

    def rk4(self, f: np.ndarray, v: np.ndarray, dt: float):
        k1f, k1v = v, self.spray_values(f, v)
        f2, v2 = f + 0.5 * dt * k1f, v + 0.5 * dt * k1v
        k2f, k2v = v2, self.spray_values(f2, v2)
        f3, v3 = f + 0.5 * dt * k2f, v + 0.5 * dt * k2v
        k3f, k3v = v3, self.spray_values(f3, v3)
        f4, v4 = f + dt * k3f, v + dt * k3v
        k4f, k4v = v4, self.spray_values(f4, v4)
        fn = f + (dt / 6.0) * (k1f + 2.0 * k2f + 2.0 * k3f + k4f)
        vn = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if not (np.all(np.isfinite(fn)) and np.all(np.isfinite(vn))):
            raise NumericalOverflow("numerical overflow")
        return fn, vn


def integrate_geodesic(phi0: DiffeoMap, v0: PeriodicField,
                       cfg: SolverConfig) -> Trajectory:
    """RK4 on phi_t = v, v_t = S_phi(v), with Jacobian-floor stopping."""
    from .diagnostics import DiagRow, SENTINEL, chain_rule_residual

    if phi0.grid != v0.grid:
        raise ValueError("grid mismatch")
    grid = phi0.grid
    geo = GeodesicEngine(grid, cfg.symbol, cfg.dealias)
    eng = geo.spectral
    rules = cfg.stop_rules
    q = cfg.q_work

    states: List[LagrangianState] = []
    rows: List[DiagRow] = []
    status = "completed"
    stop_time: Optional[float] = None

    def record(step: int, t: float, f: np.ndarray, v: np.ndarray) -> None:
        phi = DiffeoMap(PeriodicField(grid, f))
        vf = PeriodicField(grid, v)
        u = PeriodicField(grid, geo.eulerian_velocity(f, v))
        dq = dq_distance(phi0, phi, q) if q > 1.5 else SENTINEL
        row = DiagRow(
            t=t,
            energy_A=eng.energy_norm_values(u.values),
            h_q_norm=eng.sobolev_norm_values(u.values, q),
            min_ux=float(np.min(_deriv_values(v) / (1.0 + _deriv_values(f)))),
            min_phix=float(np.min(1.0 + _deriv_values(f))),
            m_l2=eng.momentum_l2_values(u.values),
            dq_from_start=dq,
            apriori_residual=0.0,
            chain_rule_residual=chain_rule_residual(u, vf, phi),
            step=step,
        )
        if rows:
            prev = rows[-1]
            row.apriori_residual = (
                (row.m_l2**2 - prev.m_l2**2) / (row.t - prev.t)
                + 3.0 * prev.min_ux * prev.m_l2**2
            )
        rows.append(row)
        states.append(LagrangianState(t, phi, vf))

    f = phi0.displacement.values.copy()
    v = v0.values.copy()
    record(0, 0.0, f, v)
    for step in range(1, cfg.n_steps + 1):
        t = step * cfg.dt
        try:
            f, v = geo.rk4(f, v, cfg.dt)
        except NumericalOverflow:
            status = "stopped:overflow"
            stop_time = t
            break
        except RuntimeError:
            # stage-level inversion failure: the map degenerated mid-step
            status = "stopped:jacobian_floor"
            stop_time = t
            break
        min_phix = float(np.min(1.0 + _deriv_values(f)))
        min_ux = float(np.min(_deriv_values(v) / (1.0 + _deriv_values(f))))
        if min_phix <= rules.jacobian_floor:
            status = "stopped:jacobian_floor"
            stop_time = t
            if min_phix > 0.0:
                record(step, t, f, v)
            break
        if min_ux <= rules.min_slope_floor:
            status = "stopped:min_slope"
            stop_time = t
            record(step, t, f, v)
            break
        if step % cfg.record_every == 0 or step == cfg.n_steps:
            u = geo.eulerian_velocity(f, v)
            if eng.sobolev_norm_values(u, q) >= rules.norm_ceiling:
                status = "stopped:norm_ceiling"
                stop_time = t
                record(step, t, f, v)
                break
            record(step, t, f, v)

    return Trajectory("lagrangian", states, rows, status, stop_time, cfg)


@dataclass
class FlowResult:
    maps: List[DiffeoMap]
    status: str


def flow_from_velocity(u_traj: Sequence[EulerState],
                       jacobian_floor: float = 0.0) -> FlowResult:
    """Reconstruct the flow map of a recorded velocity field, phi_t = u o phi.

    RK4 over each recording interval; the midpoint velocity comes from
    cubic (interior) or quadratic (ends) interpolation in time.  Truncates
    with status stopped:jacobian_floor when min phi_x falls to the floor.
    """
    if len(u_traj) < 2:
        raise ValueError("need at least two recorded states")
    grid = u_traj[0].u.grid
    times = np.array([s.t for s in u_traj])
    gaps = np.diff(times)
    if np.max(np.abs(gaps - gaps[0])) > 1e-9 * max(gaps[0], 1e-300):
        raise ValueError("velocity trajectory is not time-uniform")
    dt = float(gaps[0])
    u_vals = [s.u.values for s in u_traj]
    m = len(u_vals)

    def midpoint(i: int) -> np.ndarray:
        if m == 2:
            return 0.5 * (u_vals[i] + u_vals[i + 1])
        if i == 0:
            return (3.0 * u_vals[0] + 6.0 * u_vals[1] - u_vals[2]) / 8.0
        if i >= m - 2:
            return (-u_vals[m - 3] + 6.0 * u_vals[m - 2] + 3.0 * u_vals[m - 1]) / 8.0
        return (-u_vals[i - 1] + 9.0 * u_vals[i] + 9.0 * u_vals[i + 1] - u_vals[i + 2]) / 16.0

    nodes = grid.nodes
    f = np.zeros(grid.n)
    maps = [DiffeoMap.identity(grid)]
    status = "completed"
    for i in range(m - 1):
        u_mid = midpoint(i)
        c0 = _coeffs(u_vals[i])
        cm = _coeffs(u_mid)
        c1 = _coeffs(u_vals[i + 1])
        k1 = kernels.eval_series(c0, nodes + f)
        k2 = kernels.eval_series(cm, nodes + f + 0.5 * dt * k1)
        k3 = kernels.eval_series(cm, nodes + f + 0.5 * dt * k2)
        k4 = kernels.eval_series(c1, nodes + f + dt * k3)
        f = f + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if float(np.min(1.0 + _deriv_values(f))) <= jacobian_floor:
            status = "stopped:jacobian_floor"
            break
        maps.append(DiffeoMap(PeriodicField(grid, f)))
    return FlowResult(maps, status)
