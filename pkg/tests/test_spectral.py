import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circleflow.spectral import (
    Grid,
    PeriodicField,
    Spectrum,
    SymbolSpec,
    analyze,
    apply_symbol,
    energy_norm,
    field_from_modes,
    l2_norm,
    sobolev_norm,
    solve_symbol,
    synthesize,
)
from oracles import trapezoid_integral


def random_band_limited(grid, rng, max_mode=None, decay=2.0):
    max_mode = max_mode or grid.dealias_cutoff
    return field_from_modes(
        grid,
        [(k, rng.standard_normal() / (1 + k) ** decay,
          rng.standard_normal() / (1 + k) ** decay)
         for k in range(1, max_mode + 1)],
    )


class TestGrid:
    def test_nodes(self, grid):
        assert grid.nodes[0] == 0.0
        assert np.allclose(np.diff(grid.nodes), 2 * np.pi / grid.n)

    @pytest.mark.parametrize("bad", [0, 7, 9, 6, -4])
    def test_rejects_bad_sizes(self, bad):
        with pytest.raises(ValueError):
            Grid(bad)

    def test_rejects_nonfinite_field(self, grid):
        vals = np.zeros(grid.n)
        vals[3] = np.inf
        with pytest.raises(ValueError, match="finite"):
            PeriodicField(grid, vals)


class TestAnalyze:
    def test_constant_field(self, grid):
        c = analyze(PeriodicField(grid, np.ones(grid.n))).coeffs
        half = grid.n // 2
        assert abs(c[half] - 1.0) < 1e-14
        rest = np.abs(np.delete(c, half))
        assert rest.max() < 1e-14

    def test_single_cosine(self, grid):
        c = analyze(field_from_modes(grid, [(1, 1.0, 0.0)])).coeffs
        half = grid.n // 2
        assert abs(c[half + 1] - 0.5) < 1e-14
        assert abs(c[half - 1] - 0.5) < 1e-14

    def test_round_trip_band_limited(self, grid, rng):
        u = random_band_limited(grid, rng)
        back = synthesize(analyze(u))
        scale = np.max(np.abs(u.values))
        assert np.max(np.abs(back.values - u.values)) <= 1e-12 * scale


class TestSynthesize:
    def test_constant_spectrum(self, grid):
        c = np.zeros(grid.n, dtype=complex)
        c[grid.n // 2] = 3.0
        u = synthesize(Spectrum(grid, c))
        assert np.allclose(u.values, 3.0)

    def test_two_mode_cosine(self, grid):
        c = np.zeros(grid.n, dtype=complex)
        c[grid.n // 2 + 2] = 0.5
        c[grid.n // 2 - 2] = 0.5
        u = synthesize(Spectrum(grid, c))
        assert np.max(np.abs(u.values - np.cos(2 * grid.nodes))) < 1e-13

    def test_rejects_non_hermitian(self, grid):
        c = np.zeros(grid.n, dtype=complex)
        c[grid.n // 2 + 1] = 1.0  # no conjugate partner
        with pytest.raises(ValueError, match="complex output"):
            synthesize(Spectrum(grid, c))

    def test_analyze_of_synthesize(self, grid, rng):
        half = grid.n // 2
        c = np.zeros(grid.n, dtype=complex)
        for k in range(1, 20):
            z = rng.standard_normal() + 1j * rng.standard_normal()
            c[half + k] = z
            c[half - k] = np.conj(z)
        back = analyze(synthesize(Spectrum(grid, c))).coeffs
        assert np.max(np.abs(back - c)) <= 1e-12 * np.max(np.abs(c))


class TestApplySymbol:
    def test_bessel_on_cosine(self, grid):
        u = field_from_modes(grid, [(1, 1.0, 0.0)])
        out = apply_symbol(SymbolSpec.bessel(1.0), u)
        assert np.max(np.abs(out.values - 2.0 * u.values)) < 1e-12

    def test_derivative_on_sine(self, grid):
        u = field_from_modes(grid, [(3, 0.0, 1.0)])
        out = apply_symbol(SymbolSpec.derivative(), u)
        assert np.max(np.abs(out.values - 3.0 * np.cos(3 * grid.nodes))) < 1e-11

    def test_clm_mode_wise(self, grid):
        u = field_from_modes(grid, [(1, 1.0, 0.0), (2, 1.0, 0.0)])
        out = apply_symbol(SymbolSpec.clm(), u)
        expected = np.cos(grid.nodes) + 2.0 * np.cos(2 * grid.nodes)
        assert np.max(np.abs(out.values - expected)) < 1e-12

    def test_eigenfunction_law_builtins(self, grid):
        symbols = [SymbolSpec.bessel(s) for s in (0.5, 1.0, 1.75, 2.0)]
        symbols += [SymbolSpec.clm(), SymbolSpec.identity(),
                    SymbolSpec.helmholtz_power(2)]
        half = grid.n // 2
        for sym in symbols:
            lam = sym.values_on(grid.modes).real
            # resolved = every |k| <= n/2 - 1, incl. above the dealias band
            for k in (0, 1, 7, 30, 85, 120, 127):
                e_k = field_from_modes(grid, [(k, 1.0, 0.0)])
                out = apply_symbol(sym, e_k)
                expected = lam[half + k] * e_k.values
                scale = max(np.max(np.abs(expected)), 1e-300)
                assert np.max(np.abs(out.values - expected)) <= 1e-12 * scale


class TestSolveSymbol:
    def test_bessel_inverse(self, grid):
        w = field_from_modes(grid, [(1, 2.0, 0.0)])
        out = solve_symbol(SymbolSpec.bessel(1.0), w)
        assert np.max(np.abs(out.values - np.cos(grid.nodes))) < 1e-12

    def test_identity_solve(self, grid, rng):
        w = random_band_limited(grid, rng)
        out = solve_symbol(SymbolSpec.identity(), w)
        assert np.max(np.abs(out.values - w.values)) < 1e-13

    def test_clm_round_trip_mean_zero(self, grid, rng):
        w = random_band_limited(grid, rng)
        clm = SymbolSpec.clm()
        rt = apply_symbol(clm, solve_symbol(clm, w))
        scale = np.max(np.abs(w.values))
        assert np.max(np.abs(rt.values - w.values)) <= 1e-12 * scale
        assert abs(np.mean(solve_symbol(clm, w).values)) < 1e-13

    def test_clm_rejects_nonzero_mean(self, grid):
        w = field_from_modes(grid, [(0, 1.0, 0.0), (1, 1.0, 0.0)])
        with pytest.raises(ValueError, match="zero mode not invertible"):
            solve_symbol(SymbolSpec.clm(), w)

    def test_rejects_zero_symbol_on_populated_mode(self, grid):
        table = np.ones(grid.n, dtype=complex)
        table[grid.n // 2 + 3] = 0.0
        table[grid.n // 2 - 3] = 0.0
        sym = SymbolSpec.custom(table, order=0.0)
        w = field_from_modes(grid, [(3, 1.0, 0.0)])
        with pytest.raises(ValueError, match="vanishes"):
            solve_symbol(sym, w)

    def test_two_sided_inverse(self, grid, rng):
        sym = SymbolSpec.bessel(1.75)
        u = random_band_limited(grid, rng)
        fwd_back = solve_symbol(sym, apply_symbol(sym, u))
        back_fwd = apply_symbol(sym, solve_symbol(sym, u))
        scale = np.max(np.abs(u.values))
        assert np.max(np.abs(fwd_back.values - u.values)) <= 1e-11 * scale
        # apply-after-solve re-amplifies per-coefficient transform rounding
        # by a(k_max) ~ 5e6, so the bound is coarser in this direction
        assert np.max(np.abs(back_fwd.values - u.values)) <= 1e-9 * scale


class TestSobolevNorm:
    def test_zero_field(self, grid):
        assert sobolev_norm(PeriodicField.zero(grid), 2.0) == 0.0

    def test_cosine_q0(self, grid):
        u = field_from_modes(grid, [(1, 1.0, 0.0)])
        # oracle: (1/2pi) integral cos^2 = 1/2
        quad = trapezoid_integral(u.values**2) / (2 * np.pi)
        assert abs(sobolev_norm(u, 0.0) - np.sqrt(quad)) < 1e-12
        assert abs(sobolev_norm(u, 0.0) - 1 / np.sqrt(2)) < 1e-12

    def test_cosine_q2(self, grid):
        u = field_from_modes(grid, [(1, 1.0, 0.0)])
        # mode sum: (1+1)^2 * (1/4 + 1/4) = 2
        assert abs(sobolev_norm(u, 2.0) - np.sqrt(2.0)) < 1e-12

    def test_rejects_negative_exponent(self, grid):
        with pytest.raises(ValueError):
            sobolev_norm(PeriodicField.zero(grid), -0.5)

    @given(q1=st.floats(0.0, 4.0), q2=st.floats(0.0, 4.0))
    @settings(max_examples=25, deadline=None)
    def test_monotone_in_exponent(self, q1, q2):
        grid = Grid(64)
        rng = np.random.default_rng(5)
        u = random_band_limited(grid, rng, max_mode=10)
        lo, hi = sorted((q1, q2))
        assert sobolev_norm(u, lo) <= sobolev_norm(u, hi) * (1 + 1e-12)

    def test_parseval(self, grid, rng):
        u = random_band_limited(grid, rng)
        mode_sum = sobolev_norm(u, 0.0) ** 2
        quad = trapezoid_integral(u.values**2) / (2 * np.pi)
        assert abs(mode_sum - quad) <= 1e-10 * mode_sum


class TestEnergyNorm:
    def test_zero_field(self, grid):
        assert energy_norm(PeriodicField.zero(grid), SymbolSpec.bessel(1.0)) == 0.0

    def test_cosine_bessel(self, grid):
        u = field_from_modes(grid, [(1, 1.0, 0.0)])
        # oracle: integral (Au) u = integral 2 cos^2 = 2pi
        au = apply_symbol(SymbolSpec.bessel(1.0), u)
        quad = trapezoid_integral(au.values * u.values)
        assert abs(energy_norm(u, SymbolSpec.bessel(1.0)) - np.sqrt(quad)) < 1e-12
        assert abs(energy_norm(u, SymbolSpec.bessel(1.0)) - np.sqrt(2 * np.pi)) < 1e-12

    def test_cosine_identity(self, grid):
        u = field_from_modes(grid, [(1, 1.0, 0.0)])
        assert abs(energy_norm(u, SymbolSpec.identity()) - np.sqrt(np.pi)) < 1e-12

    def test_rejects_indefinite_symbol(self, grid):
        table = -np.ones(grid.n, dtype=complex)
        sym = SymbolSpec.custom(table, order=0.0)
        u = field_from_modes(grid, [(1, 1.0, 0.0)])
        with pytest.raises(ValueError, match="indefinite inertia operator"):
            energy_norm(u, sym)


class TestSymbolSpec:
    def test_order_certificates(self, grid):
        for s in (0.5, 1.0, 1.75, 2.0):
            sym = SymbolSpec.bessel(s)
            assert abs(sym.order_certificate(grid) - 1.0) <= 1e-12
            assert abs(sym.inverse_certificate(grid) - 1.0) <= 1e-12

    def test_clm_growth_bound(self, grid):
        sym = SymbolSpec.clm()
        assert sym.order_certificate(grid) <= 1.0 + 1e-12

    def test_bessel_rejects_small_exponent(self):
        with pytest.raises(ValueError):
            SymbolSpec.bessel(0.25)

    def test_helmholtz_requires_integer(self):
        with pytest.raises(ValueError):
            SymbolSpec.helmholtz_power(0)

    def test_symmetry_flags(self):
        assert SymbolSpec.bessel(1.0).is_symmetric
        assert not SymbolSpec.derivative().is_symmetric
        assert not SymbolSpec.hilbert().is_symmetric

    def test_l2_norm_convention(self, grid):
        u = field_from_modes(grid, [(1, 1.0, 0.0)])
        # true L2 norm carries the 2pi factor: integral cos^2 = pi
        assert abs(l2_norm(u) - np.sqrt(np.pi)) < 1e-12
