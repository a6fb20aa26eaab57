"""Pure-Python (numpy) implementations of the polynomial hot kernels.

Mirrors the API of the compiled module ``mrootgeom._speedups``; the active
backend is chosen in :mod:`mrootgeom.kernels`.

A sparse homogeneous polynomial is passed as an exponent matrix ``exps`` of
shape (terms, n) (int64, row t holding the exponent of each variable in term
t) together with a coefficient vector ``coeffs`` of shape (terms,).
"""

from __future__ import annotations

from itertools import combinations_with_replacement, permutations

import numpy as np

BACKEND = "python"


def poly_eval(exps: np.ndarray, coeffs: np.ndarray, y: np.ndarray) -> float:
    """Evaluate the polynomial at a single point."""
    return float(np.prod(y[np.newaxis, :] ** exps, axis=1) @ coeffs)


def poly_eval_batch(exps: np.ndarray, coeffs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Evaluate the polynomial at a batch of points, shape (p, n) -> (p,)."""
    return np.prod(ys[:, np.newaxis, :] ** exps[np.newaxis, :, :], axis=2) @ coeffs


def _falling_factorial_table(max_exp: int, max_order: int) -> np.ndarray:
    """ff[e, k] = e (e-1) ... (e-k+1), zero when k > e."""
    ff = np.zeros((max_exp + 1, max_order + 1))
    ff[:, 0] = 1.0
    for k in range(1, max_order + 1):
        for e in range(k, max_exp + 1):
            ff[e, k] = ff[e, k - 1] * (e - k + 1)
    return ff


def poly_derivative_dense(
    exps: np.ndarray, coeffs: np.ndarray, y: np.ndarray, order: int
) -> np.ndarray:
    """Dense mixed-partial tensor of the polynomial at ``y``.

    Returns shape (n,) * order.  Each entry is computed from the coefficient
    representation by falling-factorial bookkeeping; no division by components
    of ``y`` is ever performed, so the result is total (defined on coordinate
    hyperplanes as well).
    """
    n = exps.shape[1]
    out = np.zeros((n,) * order)
    ff = _falling_factorial_table(int(exps.max(initial=0)), order)
    for combo in combinations_with_replacement(range(n), order):
        mult = np.bincount(np.asarray(combo, dtype=np.intp), minlength=n)
        factors = ff[exps, mult]  # (terms, n)
        rem = np.maximum(exps - mult, 0)
        value = float(np.sum(coeffs * np.prod(factors * y**rem, axis=1)))
        for perm in set(permutations(combo)):
            out[perm] = value
    return out
