"""Grid, discrete Fourier analysis/synthesis, multiplier operators, norms.

Conventions, fixed once for the whole package:

* the circle has circumference 2*pi, nodes x_j = 2*pi*j/n;
* coefficients follow u_hat_k = (1/2pi) * integral u(x) exp(-i k x) dx, so
  sum |u_hat_k|^2 = (1/2pi) * integral |u|^2 dx and the H^q norm is the
  plain mode sum (sum (1+k^2)^q |u_hat_k|^2)^(1/2);
* spectra are stored in shifted order, index j holding mode j - n//2.

Quantities written as integrals over the circle (the energy ``(Au, u)``,
true L^2 norms) therefore carry an explicit 2*pi factor.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

_REL_TOL = 1e-12


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid with n nodes on [0, 2*pi)."""

    n: int

    def __post_init__(self):
        if self.n < 8 or self.n % 2 != 0:
            raise ValueError(f"grid size must be even and >= 8, got {self.n}")

    @cached_property
    def nodes(self) -> np.ndarray:
        x = 2.0 * np.pi * np.arange(self.n) / self.n
        x.setflags(write=False)
        return x

    @cached_property
    def modes(self) -> np.ndarray:
        """Mode numbers in shifted order, -n/2 .. n/2-1."""
        k = np.arange(-self.n // 2, self.n // 2)
        k.setflags(write=False)
        return k

    @property
    def dealias_cutoff(self) -> int:
        return self.n // 3


@dataclass(frozen=True)
class PeriodicField:
    """Real samples of a 2*pi-periodic function on a uniform grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field contains non-finite values")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def zero(cls, grid: Grid) -> "PeriodicField":
        return cls(grid, np.zeros(grid.n))


@dataclass(frozen=True)
class Spectrum:
    """Fourier coefficients in shifted order (modes -n/2 .. n/2-1)."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} coefficients, got shape {c.shape}")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)


@dataclass(frozen=True)
class SymbolSpec:
    """A Fourier-multiplier operator a(k) with declared order and domain.

    ``order`` is the declared growth exponent r so that
    |a(k)| <= C (1+k^2)^(r/2); ``invertible_on`` is "all_modes" or
    "mean_zero_only".  The ``derivative`` and ``hilbert`` kinds are utility
    symbols exempt from the realness (symmetry) requirement.
    """

    kind: str
    param: Optional[float] = None
    order: float = 0.0
    invertible_on: str = "all_modes"
    table: Optional[np.ndarray] = field(default=None, repr=False)

    _SYMMETRY_EXEMPT = ("derivative", "hilbert")

    @classmethod
    def bessel(cls, s: float) -> "SymbolSpec":
        """a(k) = (1+k^2)^s, the H^s inner-product inertia operator."""
        if s < 0.5:
            raise ValueError("bessel exponent must be >= 1/2")
        return cls(kind="bessel", param=float(s), order=2.0 * s)

    @classmethod
    def helmholtz_power(cls, k: int) -> "SymbolSpec":
        """a(m) = (1+m^2)^k for integer k >= 1."""
        if int(k) != k or k < 1:
            raise ValueError("helmholtz power must be an integer >= 1")
        return cls(kind="helmholtz_power", param=float(k), order=2.0 * k)

    @classmethod
    def clm(cls) -> "SymbolSpec":
        """a(k) = |k|; invertible only away from the zero mode."""
        return cls(kind="clm", order=1.0, invertible_on="mean_zero_only")

    @classmethod
    def derivative(cls) -> "SymbolSpec":
        return cls(kind="derivative", order=1.0, invertible_on="mean_zero_only")

    @classmethod
    def hilbert(cls) -> "SymbolSpec":
        return cls(kind="hilbert", order=0.0, invertible_on="mean_zero_only")

    @classmethod
    def identity(cls) -> "SymbolSpec":
        return cls(kind="identity", order=0.0)

    @classmethod
    def custom(cls, table, order: float,
               invertible_on: str = "all_modes") -> "SymbolSpec":
        """Explicit a(k) values in shifted mode order for some grid size."""
        t = np.asarray(table, dtype=np.complex128)
        return cls(kind="custom", order=float(order),
                   invertible_on=invertible_on, table=t)

    @property
    def is_symmetric(self) -> bool:
        if self.kind in self._SYMMETRY_EXEMPT:
            return False
        if self.kind == "custom":
            return bool(np.all(np.abs(self.table.imag) == 0.0))
        return True

    def values_on(self, modes: np.ndarray) -> np.ndarray:
        """a(k) evaluated on the given mode numbers."""
        k = np.asarray(modes)
        if self.kind in ("bessel", "helmholtz_power"):
            return (1.0 + k.astype(np.float64) ** 2) ** self.param + 0j
        if self.kind == "clm":
            return np.abs(k).astype(np.complex128)
        if self.kind == "derivative":
            return 1j * k.astype(np.float64)
        if self.kind == "hilbert":
            return -1j * np.sign(k).astype(np.float64)
        if self.kind == "identity":
            return np.ones(k.shape, dtype=np.complex128)
        if self.kind == "custom":
            if self.table.shape != k.shape:
                raise ValueError("custom symbol table does not match the grid")
            return self.table.astype(np.complex128)
        raise ValueError(f"unknown symbol kind {self.kind!r}")

    def order_certificate(self, grid: Grid) -> float:
        """Measured constant max_k |a(k)| / (1+k^2)^(r/2) over resolved modes."""
        k = grid.modes
        a = self.values_on(k)
        return float(np.max(np.abs(a) / (1.0 + k.astype(float) ** 2) ** (self.order / 2.0)))

    def inverse_certificate(self, grid: Grid) -> float:
        """Measured constant max_k |1/a(k)| * (1+k^2)^(r/2) on the invertible domain."""
        k = grid.modes.astype(float)
        a = self.values_on(grid.modes)
        keep = np.ones(k.shape, dtype=bool)
        if self.invertible_on == "mean_zero_only":
            keep = grid.modes != 0
        if np.any(a[keep] == 0.0):
            raise ValueError("symbol vanishes on its declared invertible domain")
        return float(np.max((1.0 + k[keep] ** 2) ** (self.order / 2.0) / np.abs(a[keep])))


def analyze(u: PeriodicField) -> Spectrum:
    """Forward transform under the 1/2pi coefficient convention."""
    c = np.fft.fftshift(np.fft.fft(u.values)) / u.grid.n
    return Spectrum(u.grid, c)


# Transform noise sits ~14 orders below the spectral peak; steep symbols
# (bessel(2) reaches ~3e8 at the Nyquist mode) would amplify it into the
# asserted tolerances, so the multiplier ops clip it before acting.
_NOISE_FLOOR = 3e-14


def _clip_noise(coeffs: np.ndarray) -> np.ndarray:
    peak = np.max(np.abs(coeffs))
    if peak == 0.0:
        return coeffs
    out = coeffs.copy()
    out[np.abs(out) <= _NOISE_FLOOR * peak] = 0.0
    return out


def _hermitian_project(coeffs: np.ndarray) -> np.ndarray:
    """Average conjugate mode pairs (removes transform rounding asymmetry).

    Every admitted symbol satisfies a(-k) = conj(a(k)), so its action on a
    real field is Hermitian up to rounding; projecting keeps steep symbols
    from amplifying that rounding into the realness check.
    """
    n = coeffs.shape[0]
    half = n // 2
    out = coeffs.copy()
    out[half] = out[half].real
    out[0] = out[0].real  # unpaired Nyquist mode rides as a cosine
    avg = 0.5 * (out[half + 1:] + np.conj(out[1:half][::-1]))
    out[half + 1:] = avg
    out[1:half] = np.conj(avg[::-1])
    return out


def synthesize(c: Spectrum) -> PeriodicField:
    """Inverse transform; rejects spectra whose signal is not real."""
    w = np.fft.ifft(np.fft.ifftshift(c.coeffs)) * c.grid.n
    scale = np.max(np.abs(w)) if c.grid.n else 0.0
    if np.max(np.abs(w.imag)) > _REL_TOL * max(scale, 1.0):
        raise ValueError("complex output: spectrum is not Hermitian-symmetric")
    return PeriodicField(c.grid, w.real)


def apply_symbol(a: SymbolSpec, u: PeriodicField) -> PeriodicField:
    """Mode-wise action of the multiplier a(k)."""
    spec = analyze(u)
    coeffs = _clip_noise(spec.coeffs)
    out = _hermitian_project(a.values_on(u.grid.modes) * coeffs)
    return synthesize(Spectrum(u.grid, out))


def solve_symbol(a: SymbolSpec, w: PeriodicField) -> PeriodicField:
    """Invert the multiplier on its declared domain."""
    spec = analyze(w)
    coeffs = _clip_noise(spec.coeffs)
    avals = a.values_on(w.grid.modes)
    half = w.grid.n // 2
    if a.invertible_on == "mean_zero_only":
        norm = np.sqrt(np.sum(np.abs(coeffs) ** 2))
        if np.abs(coeffs[half]) > 1e-12 * max(norm, 1e-300):
            raise ValueError("zero mode not invertible")
        out = np.zeros_like(coeffs)
        nz = w.grid.modes != 0
        if np.any((avals == 0.0) & nz & (coeffs != 0.0)):
            raise ValueError("symbol vanishes on a populated mode")
        safe = np.where(avals == 0.0, 1.0, avals)
        out[nz] = coeffs[nz] / safe[nz]
    else:
        if np.any((avals == 0.0) & (coeffs != 0.0)):
            raise ValueError("symbol vanishes on a populated mode")
        safe = np.where(avals == 0.0, 1.0, avals)
        out = coeffs / safe
    return synthesize(Spectrum(w.grid, _hermitian_project(out)))


def sobolev_norm(u: PeriodicField, q: float) -> float:
    """H^q norm as the mode sum (sum (1+k^2)^q |u_hat|^2)^(1/2)."""
    if q < 0:
        raise ValueError("Sobolev exponent must be >= 0")
    c = analyze(u).coeffs
    k = u.grid.modes.astype(np.float64)
    return float(np.sqrt(np.sum((1.0 + k**2) ** q * np.abs(c) ** 2)))


def energy_norm(u: PeriodicField, a: SymbolSpec) -> float:
    """Metric norm (integral (Au) u dx)^(1/2) = (2pi sum a(k)|u_hat|^2)^(1/2)."""
    if not a.is_symmetric:
        raise ValueError("indefinite inertia operator: symbol must be real")
    c = analyze(u).coeffs
    avals = a.values_on(u.grid.modes).real
    populated = np.abs(c) > 0.0
    if np.any(avals[populated] < 0.0):
        raise ValueError("indefinite inertia operator")
    return float(np.sqrt(2.0 * np.pi * np.sum(avals * np.abs(c) ** 2)))


def l2_norm(u: PeriodicField) -> float:
    """True L^2 norm (integral u^2 dx)^(1/2), 2pi factor included."""
    c = analyze(u).coeffs
    return float(np.sqrt(2.0 * np.pi * np.sum(np.abs(c) ** 2)))


def linf_norm(u: PeriodicField) -> float:
    return float(np.max(np.abs(u.values)))


def mean(u: PeriodicField) -> float:
    return float(np.mean(u.values))


def derivative(u: PeriodicField) -> PeriodicField:
    """Spectral derivative; the unpaired -n/2 mode is dropped (odd symbol)."""
    c = _clip_noise(analyze(u).coeffs)
    k = u.grid.modes.astype(np.float64)
    c = 1j * k * c
    c[0] = 0.0
    return synthesize(Spectrum(u.grid, _hermitian_project(c)))


def lambda_power(u: PeriodicField, sigma: float) -> PeriodicField:
    """The fractional smoothing/roughening multiplier (1+k^2)^(sigma/2)."""
    c = _clip_noise(analyze(u).coeffs)
    k = u.grid.modes.astype(np.float64)
    out = _hermitian_project((1.0 + k**2) ** (sigma / 2.0) * c)
    return synthesize(Spectrum(u.grid, out))


def field_from_modes(grid: Grid, modes) -> PeriodicField:
    """Build sum of a*cos(kx) + b*sin(kx) from (k, a, b) triples."""
    x = grid.nodes
    v = np.zeros(grid.n)
    for k, a, b in modes:
        v += a * np.cos(k * x) + b * np.sin(k * x)
    return PeriodicField(grid, v)
