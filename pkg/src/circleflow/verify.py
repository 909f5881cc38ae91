"""Invariant suite behind ``circleflow verify``.

Each property is a deterministic, fast check; the command reports one
PASS/FAIL line per property.  The ``symbol_table`` fault hook corrupts the
symbol values fed into the first check so the failure path can be tested
end-to-end.
"""

import numpy as np

from .diagnostics import kato_ponce_ratio
from .euler import SolverConfig, euler_rhs, ep_rhs, dealias, integrate_euler
from .lagrangian import DiffeoMap, compose, integrate_geodesic, invert_diffeo, s_operator
from .mollifier import bump_kernel, mollify, mollifier_commutator
from .spectral import (
    Grid,
    PeriodicField,
    SymbolSpec,
    analyze,
    apply_symbol,
    derivative,
    field_from_modes,
    l2_norm,
    linf_norm,
    sobolev_norm,
    solve_symbol,
    synthesize,
)


def _random_band_limited(grid, rng, max_mode=None, decay=2.0):
    max_mode = max_mode or grid.dealias_cutoff
    modes = []
    for k in range(1, max_mode + 1):
        amp = (1.0 + k) ** (-decay)
        modes.append((k, amp * rng.standard_normal(), amp * rng.standard_normal()))
    return field_from_modes(grid, modes)


def check_spectral_exactness(fault=None):
    grid = Grid(256)
    symbols = [SymbolSpec.bessel(s) for s in (0.5, 1.0, 1.75, 2.0)] + [SymbolSpec.clm()]
    worst = 0.0
    for sym in symbols:
        avals = sym.values_on(grid.modes)
        if fault == "symbol_table":
            avals = avals.copy()
            avals[grid.n // 2 + 5] *= -1.0
        for k in (0, 1, 2, 5, 17, 40, 85):
            u = field_from_modes(grid, [(k, 1.0, 0.0)])
            out = apply_symbol(sym, u)
            lam = avals[grid.n // 2 + k].real
            expected = lam * u.values
            scale = max(float(np.max(np.abs(expected))), 1e-300)
            worst = max(worst, float(np.max(np.abs(out.values - expected))) / scale)
    return worst <= 1e-12, f"max relative eigenfunction error {worst:.3e} (tol 1e-12)"


def check_symbol_certificates(fault=None):
    grid = Grid(256)
    worst = 0.0
    for s in (0.5, 1.0, 1.75, 2.0):
        sym = SymbolSpec.bessel(s)
        worst = max(worst, abs(sym.order_certificate(grid) - 1.0),
                    abs(sym.inverse_certificate(grid) - 1.0))
    return worst <= 1e-12, f"bessel growth/inverse certificates off by {worst:.3e}"


def check_roundtrips(fault=None):
    rng = np.random.default_rng(7)
    grid = Grid(256)
    u = _random_band_limited(grid, rng)
    rt = synthesize(analyze(u))
    err1 = float(np.max(np.abs(rt.values - u.values))) / max(linf_norm(u), 1e-300)
    w = _random_band_limited(grid, rng)
    w = PeriodicField(grid, w.values - np.mean(w.values))
    clm = SymbolSpec.clm()
    rt2 = apply_symbol(clm, solve_symbol(clm, w))
    err2 = float(np.max(np.abs(rt2.values - w.values))) / max(linf_norm(w), 1e-300)
    err = max(err1, err2)
    return err <= 1e-12, f"analysis/synthesis and solve/apply round trips {err:.3e}"


def check_parseval(fault=None):
    rng = np.random.default_rng(11)
    grid = Grid(256)
    worst = 0.0
    for _ in range(5):
        u = _random_band_limited(grid, rng)
        mode_sum = sobolev_norm(u, 0.0) ** 2
        quad = float(np.sum(u.values**2)) * (2.0 * np.pi / grid.n) / (2.0 * np.pi)
        worst = max(worst, abs(mode_sum - quad) / mode_sum)
    return worst <= 1e-10, f"Parseval mismatch {worst:.3e} (tol 1e-10)"


def check_mollifier(fault=None):
    grid = Grid(512)
    u = field_from_modes(grid, [(1, 1.0, 0.0), (3, 1.0, 0.0)])
    issues = []
    kern = bump_kernel(0.5, grid)
    if np.min(kern.samples.values) < 0:
        issues.append("negative kernel")
    weight = float(np.sum(kern.samples.values)) * 2.0 * np.pi / grid.n
    if abs(weight - 1.0) > 1e-10:
        issues.append(f"weight {weight}")
    mirrored = np.roll(kern.samples.values[::-1], 1)  # v[j] -> v[(n-j) % n]
    if np.max(np.abs(kern.samples.values - mirrored)) > 1e-12 * np.max(kern.samples.values):
        issues.append("kernel not even")
    prev = np.inf
    for k in range(0, 6):
        eps = 0.5**k
        kern = bump_kernel(eps, grid)
        gap = sobolev_norm(PeriodicField(grid, mollify(u, kern).values - u.values), 2.0)
        if gap >= prev:
            issues.append(f"approximation not decreasing at eps={eps}")
        prev = gap
    if prev / sobolev_norm(u, 2.0) > 1e-3:
        issues.append(f"final relative H^2 gap {prev / sobolev_norm(u, 2.0):.3e}")
    uu = field_from_modes(grid, [(1, 0.0, 1.0)])
    mm = field_from_modes(grid, [(3, 1.0, 0.0)])
    ratios = []
    for k in range(0, 6):
        kern = bump_kernel(0.5**k, grid)
        knorm = l2_norm(mollifier_commutator(uu, mm, kern))
        ratios.append(knorm / (linf_norm(derivative(uu)) * l2_norm(mm)))
    if max(ratios) > 2.0 * ratios[0]:
        issues.append(f"commutator ratio grows: {max(ratios):.3f} vs {ratios[0]:.3f} at eps=1")
    ok = not issues
    detail = "kernel laws, approximation decay, commutator uniformity" if ok else "; ".join(issues)
    return ok, detail


def check_ep_consistency(fault=None):
    rng = np.random.default_rng(3)
    grid = Grid(256)
    sym = SymbolSpec.bessel(2.0)
    worst = 0.0
    for _ in range(5):
        u = _random_band_limited(grid, rng)
        lhs = apply_symbol(sym, euler_rhs(u, sym))
        rhs = ep_rhs(apply_symbol(sym, u), u)
        worst = max(worst, l2_norm(PeriodicField(grid, lhs.values - rhs.values))
                    / max(l2_norm(rhs), 1e-300))
    return worst <= 1e-10, f"A(euler_rhs) vs ep_rhs relative gap {worst:.3e} (tol 1e-10)"


def check_frame_equivalence(fault=None):
    rng = np.random.default_rng(5)
    grid = Grid(128)
    sym = SymbolSpec.bessel(2.0)
    worst = 0.0
    for _ in range(3):
        u = _random_band_limited(grid, rng)
        lhs = euler_rhs(u, sym)
        transport = dealias(PeriodicField(grid, u.values * derivative(u).values))
        rhs = s_operator(u, sym).values - transport.values
        worst = max(worst, float(np.max(np.abs(lhs.values - rhs)))
                    / max(linf_norm(lhs), 1e-300))
    if worst > 1e-10:
        return False, f"euler_rhs vs s_operator - u u_x gap {worst:.3e}"
    u0 = field_from_modes(grid, [(1, 1.0, 0.0)])
    cfg = SolverConfig(symbol=sym, dt=1e-3, t_end=0.1, record_every=100)
    eul = integrate_euler(u0, cfg)
    lag = integrate_geodesic(DiffeoMap.identity(grid), u0, cfg)
    u_lag = compose(lag.states[-1].v, invert_diffeo(lag.states[-1].phi))
    gap = l2_norm(PeriodicField(grid, u_lag.values - eul.states[-1].u.values))
    ok = gap <= 1e-8
    return ok, (f"algebraic gap {worst:.3e}; two-frame short-run gap {gap:.3e}")


def check_apriori_residual(fault=None):
    grid = Grid(256)
    u0 = field_from_modes(grid, [(1, 0.0, -1.0)])
    cfg = SolverConfig(symbol=SymbolSpec.bessel(1.0), dt=1e-3, t_end=1.0,
                       record_every=10)
    traj = integrate_euler(u0, cfg)
    worst = max(row.apriori_residual for row in traj.rows[1:])
    return worst <= 1e-3, f"max residual {worst:.3e} over {len(traj.rows)} rows (tol 1e-3)"


def check_kato_ponce(fault=None):
    grid = Grid(256)
    worst = 0.0
    for s in (1.6, 2.0, 2.5):
        for j in range(1, 9):
            for k in range(1, 9):
                u = field_from_modes(grid, [(j, 0.0, 1.0)])
                v = field_from_modes(grid, [(k, 1.0, 0.0)])
                r = kato_ponce_ratio(u, v, s)
                if not np.isfinite(r):
                    return False, f"non-finite ratio at j={j}, k={k}, s={s}"
                worst = max(worst, r)
    const = field_from_modes(grid, [(0, 2.5, 0.0)])
    v = field_from_modes(grid, [(4, 1.0, 0.0)])
    if kato_ponce_ratio(const, v, 2.0) != 0.0:
        return False, "constant-u ratio is not exactly zero"
    return True, f"all ratios finite, max {worst:.3f}; constant case exactly 0"


_CHECKS = (
    ("spectral_exactness", check_spectral_exactness),
    ("symbol_certificates", check_symbol_certificates),
    ("round_trips", check_roundtrips),
    ("parseval", check_parseval),
    ("mollifier_lemmas", check_mollifier),
    ("ep_consistency", check_ep_consistency),
    ("frame_equivalence", check_frame_equivalence),
    ("apriori_residual", check_apriori_residual),
    ("kato_ponce", check_kato_ponce),
)


def run_verification(fault=None):
    results = []
    for name, fn in _CHECKS:
        try:
            ok, detail = fn(fault=fault)
        except Exception as exc:
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append((name, ok, detail))
    return results
