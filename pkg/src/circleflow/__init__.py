"""Pseudospectral geodesic flow on circle diffeomorphisms.

Right-invariant metrics on the circle's diffeomorphism group are specified
by a Fourier-multiplier inertia operator; this package integrates the
associated Euler and geodesic equations in both frames and instruments the
conserved quantities, blow-up indicators, and mollifier/commutator probes.
"""

from .kernels import BACKEND as kernel_backend
from .spectral import (
    Grid,
    PeriodicField,
    Spectrum,
    SymbolSpec,
    analyze,
    apply_symbol,
    energy_norm,
    sobolev_norm,
    solve_symbol,
    synthesize,
)

__version__ = "0.1.0"

__all__ = [
    "Grid",
    "PeriodicField",
    "Spectrum",
    "SymbolSpec",
    "analyze",
    "synthesize",
    "apply_symbol",
    "solve_symbol",
    "sobolev_norm",
    "energy_norm",
    "kernel_backend",
    "__version__",
]
