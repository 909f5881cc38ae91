"""Eulerian-frame integration of the inertia-operator Euler equation.

The evolution is u_t = -A^{-1}[u (Au)_x + 2 (Au) u_x] for a Fourier
multiplier A; its momentum form m_t = -m_x u - 2 m u_x (m = Au) is exposed
separately so the two routes can cross-check each other.  Fixed-step RK4
with 2/3-rule dealiasing of the quadratic products; blow-up is detected by
stop rules rather than adaptive stepping.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .spectral import Grid, PeriodicField, SymbolSpec

_BAND_LIMIT_TOL = 1e-10


class NumericalOverflow(RuntimeError):
    """Raised when a step produces non-finite values (blow-up indicator)."""


@dataclass
class EulerState:
    t: float
    u: PeriodicField


@dataclass
class MomentumState:
    t: float
    m: PeriodicField


@dataclass(frozen=True)
class StopRules:
    min_slope_floor: float = -50.0
    norm_ceiling: float = 1e6
    jacobian_floor: float = 0.05

    def __post_init__(self):
        if self.norm_ceiling <= 0:
            raise ValueError("norm_ceiling must be positive")
        if self.jacobian_floor <= 0:
            raise ValueError("jacobian_floor must be positive")


@dataclass(frozen=True)
class SolverConfig:
    symbol: SymbolSpec
    dt: float
    t_end: float
    scheme: str = "rk4"
    dealias: str = "two_thirds"
    record_every: int = 1
    stop_rules: StopRules = field(default_factory=StopRules)

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_end < 0:
            raise ValueError("t_end must be >= 0")
        if self.scheme != "rk4":
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.dealias not in ("two_thirds", "none"):
            raise ValueError(f"unknown dealias rule {self.dealias!r}")
        if self.record_every < 1:
            raise ValueError("record_every must be a positive integer")
        steps = round(self.t_end / self.dt)
        if abs(steps * self.dt - self.t_end) > 1e-9 * max(1.0, self.t_end):
            raise ValueError("dt and t_end are inconsistent (t_end must be a multiple of dt)")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    @property
    def q_work(self) -> float:
        """Working regularity exponent, one above the symbol order."""
        return self.symbol.order + 1.0


@dataclass
class Trajectory:
    frame: str
    states: list
    rows: list
    status: str
    stop_time: Optional[float]
    config: SolverConfig


class SpectralEngine:
    """Per-run precomputation: mode numbers, symbol values, dealias mask.

    Operates on raw value arrays in natural FFT ordering; the dataclass
    wrappers stay at the module boundary.
    """

    def __init__(self, grid: Grid, symbol: SymbolSpec, dealias: str = "two_thirds"):
        self.grid = grid
        self.symbol = symbol
        n = grid.n
        k = np.fft.ifftshift(grid.modes).astype(np.float64)
        self.k = k
        self.deriv = 1j * k
        self.deriv[n // 2] = 0.0  # unpaired Nyquist mode dropped for odd symbols
        self.a = np.fft.ifftshift(symbol.values_on(grid.modes))
        self.mean_zero_only = symbol.invertible_on == "mean_zero_only"
        a_safe = self.a.copy()
        a_safe[a_safe == 0.0] = 1.0
        self.a_inv = 1.0 / a_safe
        if self.mean_zero_only:
            self.a_inv[0] = 0.0
        elif np.any(self.a == 0.0):
            raise ValueError("symbol vanishes on a resolved mode but claims full invertibility")
        if dealias == "two_thirds":
            self.mask = (np.abs(k) <= grid.dealias_cutoff).astype(np.float64)
        else:
            self.mask = np.ones(n)

    def dealias_values(self, v: np.ndarray) -> np.ndarray:
        return np.fft.ifft(self.mask * np.fft.fft(v)).real

    def euler_rhs_values(self, u: np.ndarray) -> np.ndarray:
        uh = np.fft.fft(u)
        mh = self.a * uh
        m = np.fft.ifft(mh).real
        dm = np.fft.ifft(self.deriv * mh).real
        du = np.fft.ifft(self.deriv * uh).real
        wh = np.fft.fft(u * dm + 2.0 * m * du)
        wh *= self.mask
        if self.mean_zero_only:
            wh[0] = 0.0  # project: a(0) = 0 symbols evolve on the mean-zero subspace
        return -np.fft.ifft(wh * self.a_inv).real

    def ep_rhs_values(self, m: np.ndarray, u: np.ndarray) -> np.ndarray:
        dm = np.fft.ifft(self.deriv * np.fft.fft(m)).real
        du = np.fft.ifft(self.deriv * np.fft.fft(u)).real
        wh = np.fft.fft(dm * u + 2.0 * m * du)
        return -np.fft.ifft(self.mask * wh).real

    def s_operator_values(self, u: np.ndarray) -> np.ndarray:
        uh = np.fft.fft(u)
        du = np.fft.ifft(self.deriv * uh).real
        m = np.fft.ifft(self.a * uh).real
        a_uux = np.fft.ifft(self.a * np.fft.fft(u * du)).real
        a_du = np.fft.ifft(self.a * self.deriv * uh).real
        wh = np.fft.fft(a_uux - u * a_du - 2.0 * m * du)
        wh *= self.mask
        if self.mean_zero_only:
            wh[0] = 0.0
        return np.fft.ifft(wh * self.a_inv).real

    def rk4(self, u: np.ndarray, dt: float, rhs) -> np.ndarray:
        # non-finite intermediates are an expected blow-up signal, not a warning
        with np.errstate(over="ignore", invalid="ignore"):
            k1 = rhs(u)
            k2 = rhs(u + 0.5 * dt * k1)
            k3 = rhs(u + 0.5 * dt * k2)
            k4 = rhs(u + dt * k3)
            out = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(out)):
            raise NumericalOverflow("numerical overflow")
        return out

    def min_slope_values(self, u: np.ndarray) -> float:
        return float(np.min(np.fft.ifft(self.deriv * np.fft.fft(u)).real))

    def sobolev_norm_values(self, u: np.ndarray, q: float) -> float:
        c = np.fft.fft(u) / self.grid.n
        return float(np.sqrt(np.sum((1.0 + self.k**2) ** q * np.abs(c) ** 2)))

    def energy_norm_values(self, u: np.ndarray) -> float:
        c = np.fft.fft(u) / self.grid.n
        return float(np.sqrt(2.0 * np.pi * np.sum(self.a.real * np.abs(c) ** 2)))

    def momentum_l2_values(self, u: np.ndarray) -> float:
        c = self.a * np.fft.fft(u) / self.grid.n
        return float(np.sqrt(2.0 * np.pi * np.sum(np.abs(c) ** 2)))


def dealias(w: PeriodicField) -> PeriodicField:
    """2/3-rule: zero every mode above floor(n/3).  Idempotent."""
    cut = w.grid.dealias_cutoff
    mask = np.abs(np.fft.ifftshift(w.grid.modes)) <= cut
    return PeriodicField(w.grid, np.fft.ifft(mask * np.fft.fft(w.values)).real)


def euler_rhs(u: PeriodicField, a: SymbolSpec) -> PeriodicField:
    """-A^{-1} dealias[u (Au)_x + 2 (Au) u_x]."""
    if a.invertible_on == "mean_zero_only":
        scale = max(float(np.max(np.abs(u.values))), 1e-300)
        if abs(float(np.mean(u.values))) > 1e-12 * scale:
            raise ValueError("zero mode not invertible")
    eng = SpectralEngine(u.grid, a)
    return PeriodicField(u.grid, eng.euler_rhs_values(u.values))


def ep_rhs(m: PeriodicField, u: PeriodicField) -> PeriodicField:
    """-dealias[m_x u + 2 m u_x]."""
    if m.grid != u.grid:
        raise ValueError("grid mismatch")
    eng = SpectralEngine(m.grid, SymbolSpec.identity())
    return PeriodicField(m.grid, eng.ep_rhs_values(m.values, u.values))


def rk4_step(state: EulerState, dt: float, a: SymbolSpec) -> EulerState:
    if dt <= 0:
        raise ValueError("dt must be positive")
    eng = SpectralEngine(state.u.grid, a)
    out = eng.rk4(state.u.values, dt, eng.euler_rhs_values)
    return EulerState(state.t + dt, PeriodicField(state.u.grid, out))


def check_band_limited(u: PeriodicField, tol: float = _BAND_LIMIT_TOL) -> None:
    c = np.fft.fftshift(np.fft.fft(u.values)) / u.grid.n
    outside = np.abs(u.grid.modes) > u.grid.dealias_cutoff
    scale = max(float(np.max(np.abs(c))), 1e-300)
    if np.max(np.abs(c[outside])) > tol * scale:
        raise ValueError("initial datum is not band-limited to the dealias band")


def integrate_euler(u0: PeriodicField, cfg: SolverConfig) -> Trajectory:
    """March the Euler equation to t_end or a stop rule, recording DiagRows."""
    from .diagnostics import DiagRow, SENTINEL

    check_band_limited(u0)
    if cfg.symbol.invertible_on == "mean_zero_only":
        c0 = np.mean(u0.values)
        if abs(c0) > 1e-12 * max(float(np.max(np.abs(u0.values))), 1e-300):
            raise ValueError("zero mode not invertible")

    grid = u0.grid
    eng = SpectralEngine(grid, cfg.symbol, cfg.dealias)
    rules = cfg.stop_rules
    q = cfg.q_work

    states: List[EulerState] = []
    rows: List[DiagRow] = []
    status = "completed"
    stop_time: Optional[float] = None

    def make_row(step: int, t: float, u: np.ndarray) -> DiagRow:
        m_l2 = eng.momentum_l2_values(u)
        row = DiagRow(
            t=t,
            energy_A=eng.energy_norm_values(u),
            h_q_norm=eng.sobolev_norm_values(u, q),
            min_ux=eng.min_slope_values(u),
            min_phix=SENTINEL,
            m_l2=m_l2,
            dq_from_start=SENTINEL,
            apriori_residual=0.0,
            chain_rule_residual=SENTINEL,
            step=step,
        )
        if rows:
            prev = rows[-1]
            dt_rec = row.t - prev.t
            row.apriori_residual = (
                (row.m_l2**2 - prev.m_l2**2) / dt_rec + 3.0 * prev.min_ux * prev.m_l2**2
            )
        return row

    def record(step: int, t: float, u: np.ndarray) -> None:
        rows.append(make_row(step, t, u))
        states.append(EulerState(t, PeriodicField(grid, u)))

    u = u0.values.copy()
    record(0, 0.0, u)
    for step in range(1, cfg.n_steps + 1):
        t = step * cfg.dt
        try:
            u = eng.rk4(u, cfg.dt, eng.euler_rhs_values)
        except NumericalOverflow:
            status = "stopped:overflow"
            stop_time = t
            break
        min_ux = eng.min_slope_values(u)
        if min_ux <= rules.min_slope_floor:
            status = "stopped:min_slope"
            stop_time = t
            record(step, t, u)
            break
        if eng.sobolev_norm_values(u, q) >= rules.norm_ceiling:
            status = "stopped:norm_ceiling"
            stop_time = t
            record(step, t, u)
            break
        if step % cfg.record_every == 0 or step == cfg.n_steps:
            record(step, t, u)

    return Trajectory("eulerian", states, rows, status, stop_time, cfg)


def integrate_momentum(m0: PeriodicField, cfg: SolverConfig) -> List[MomentumState]:
    """RK4 on m_t = -m_x u - 2 m u_x with u = A^{-1} m, for cross-checks."""
    grid = m0.grid
    eng = SpectralEngine(grid, cfg.symbol, cfg.dealias)

    def rhs(m: np.ndarray) -> np.ndarray:
        mh = np.fft.fft(m)
        u = np.fft.ifft(mh * eng.a_inv).real
        return eng.ep_rhs_values(m, u)

    m = m0.values.copy()
    out = [MomentumState(0.0, PeriodicField(grid, m))]
    for step in range(1, cfg.n_steps + 1):
        m = eng.rk4(m, cfg.dt, rhs)
        if step % cfg.record_every == 0 or step == cfg.n_steps:
            out.append(MomentumState(step * cfg.dt, PeriodicField(grid, m)))
    return out
