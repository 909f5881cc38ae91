"""Pure-numpy fallback for the hot kernels.

Same contracts as the compiled extension ``_kernels_c``: truncated Fourier
series evaluation at arbitrary points and safeguarded-Newton inversion of a
monotone circle map.  Coefficients are always in shifted order, index ``j``
holding mode ``j - n//2``, Hermitian-symmetric (real field).
"""

import numpy as np

BACKEND = "python"


def eval_series(coeffs, y):
    """Evaluate sum_k c_k exp(i k y) (real part) at points y.

    coeffs: complex array, shifted mode order -n/2 .. n/2-1.
    y: float array of sample points in radians, any real values.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    y = np.asarray(y, dtype=np.float64)
    n = coeffs.shape[0]
    half = n // 2
    z = np.exp(1j * y)
    acc = np.full(y.shape, coeffs[half].real)
    p = np.ones_like(z)
    for k in range(1, half):
        p = p * z
        c = coeffs[half + k]
        if c != 0.0:
            acc += 2.0 * (c * p).real
    # mode -n/2 rides along as a cosine (real field convention)
    p = p * z
    acc += (coeffs[0] * np.conj(p)).real
    return acc


def eval_series_and_derivative(coeffs, y):
    """Series value and its y-derivative in one pass over the modes."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    y = np.asarray(y, dtype=np.float64)
    n = coeffs.shape[0]
    half = n // 2
    z = np.exp(1j * y)
    val = np.full(y.shape, coeffs[half].real)
    der = np.zeros(y.shape)
    p = np.ones_like(z)
    for k in range(1, half):
        p = p * z
        c = coeffs[half + k]
        if c != 0.0:
            t = c * p
            val += 2.0 * t.real
            der -= 2.0 * k * t.imag
    p = p * z
    t = coeffs[0] * np.conj(p)
    val += t.real
    der += half * t.imag
    return val, der


def invert_monotone(coeffs, targets, bound, tol, max_iter):
    """Solve y + f(y) = x for each x in targets, f the series of ``coeffs``.

    Requires 1 + f'(y) > 0 (strictly increasing map).  Newton iteration with
    a bisection fallback on the bracket [x - bound, x + bound]; ``bound``
    must dominate max|f|.  Returns y; raises RuntimeError on stagnation.
    """
    x = np.asarray(targets, dtype=np.float64)
    lo = x - bound
    hi = x + bound
    y = x.copy()
    for _ in range(max_iter):
        f, fp = eval_series_and_derivative(coeffs, y)
        resid = y + f - x
        done = np.abs(resid) <= tol
        if np.all(done):
            return y
        below = resid < 0.0
        lo = np.where(below, y, lo)
        hi = np.where(below, hi, y)
        slope = 1.0 + fp
        with np.errstate(divide="ignore", invalid="ignore"):
            step = resid / slope
        y_new = y - step
        bad = (slope <= 0.0) | ~np.isfinite(y_new) | (y_new <= lo) | (y_new >= hi)
        # converged points stay put; bracket violations fall back to bisection
        y = np.where(done, y, np.where(bad, 0.5 * (lo + hi), y_new))
    f, _ = eval_series_and_derivative(coeffs, y)
    if np.max(np.abs(y + f - x)) > tol:
        raise RuntimeError("inversion failed")
    return y
