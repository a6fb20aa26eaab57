"""Derivatives of A(y)^p and the tensors built from them.

The r-th derivative of a power of the defining polynomial is assembled by the
set-partition (higher-order chain) rule

    d^r A^p = sum over partitions pi of the r indices of
              ff(p, |pi|) * A^(p - |pi|) * prod_{B in pi} (derivative of A of order |B|)

where ff(p, s) = p (p-1) ... (p-s+1).  With p = 2/m this yields the
fundamental tensor (order 2, halved), the Cartan torsion (order 3, quartered)
and the torsion gradient (order 4, quartered).  Falling factorials are kept
as exact rationals and converted to float once.

Powers of A follow the real-odd-root convention: for odd root order,
A^(k/q) = sign(A)^k |A|^(k/q), which keeps every chain-rule identity valid on
the negative branch; even root orders require A > 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

import numpy as np

from .errors import DegenerateDomain, SingularMetric, UnsupportedOrder, ZeroBase
from .metric import (
    DerivativeBundle,
    DomainStatus,
    PolynomialMetric,
    derivative_bundle,
    domain_status,
    multi_indices,
)

MAX_POWER_ORDER = 4

#: Condition-number bound above which the fundamental tensor is treated as singular.
DEFAULT_COND_THRESHOLD = 1e12


def as_rational_exponent(p) -> Fraction:
    """Coerce an exponent to an exact small rational.

    Floats are snapped to the nearest small-denominator rational (refuse when
    none is close): Fraction(2/3) taken literally would have an astronomically
    large even denominator, silently changing the sign convention on the
    negative branch.
    """
    if isinstance(p, float):
        snapped = Fraction(p).limit_denominator(64)
        if abs(float(snapped) - p) > 1e-12 * (1.0 + abs(p)):
            raise ValueError(f"exponent {p!r} is not a small rational; pass a Fraction")
        return snapped
    return Fraction(p)


def real_power(x, p) -> float | np.ndarray:
    """x**p for rational p, real-valued on the negative branch for odd roots.

    For p = k/q with odd q: sign(x)^k |x|^(k/q).  For even q the base must be
    positive.  Works elementwise on arrays.
    """
    p = as_rational_exponent(p)
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    if p < 0 and np.any(arr == 0.0):
        raise ZeroBase("negative power of zero")
    if p.denominator % 2 == 0:
        if np.any(arr < 0.0):
            raise DegenerateDomain(f"negative base for even-denominator exponent {p}")
        out = arr ** float(p)
    elif p.numerator % 2:
        out = np.sign(arr) * np.abs(arr) ** float(p)
    else:
        out = np.abs(arr) ** float(p)
    return float(out) if scalar else out


def falling_factorial(p, s: int) -> Fraction:
    """ff(p, s) = p (p-1) ... (p-s+1) in exact rational arithmetic."""
    p = Fraction(p)
    out = Fraction(1)
    for t in range(s):
        out *= p - t
    return out


@lru_cache(maxsize=None)
def set_partitions(r: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All set partitions of {0, .., r-1}, each as a tuple of sorted blocks."""
    if r == 0:
        return ((),)
    out: list[tuple[tuple[int, ...], ...]] = []
    for smaller in set_partitions(r - 1):
        last = r - 1
        for b, block in enumerate(smaller):
            out.append(smaller[:b] + (block + (last,),) + smaller[b + 1 :])
        out.append(smaller + ((last,),))
    return tuple(out)


def _partition_term(bundle: DerivativeBundle, partition) -> np.ndarray | float:
    """Outer product, over blocks, of the matching derivative tensors."""
    if not partition:
        return 1.0
    operands = []
    subscripts = []
    for block in partition:
        operands.append(bundle.tensor(len(block)))
        subscripts.append("".join(chr(ord("a") + i) for i in block))
    order = sum(len(b) for b in partition)
    out = "".join(chr(ord("a") + i) for i in range(order))
    return np.einsum(",".join(subscripts) + "->" + out, *operands)


def _mirror_symmetric(tensor: np.ndarray) -> np.ndarray:
    """Copy each sorted-index entry to all its permutations (exact symmetry)."""
    if tensor.ndim < 2:
        return tensor
    out = np.empty_like(tensor)
    for combo in multi_indices(tensor.shape[0], tensor.ndim):
        value = tensor[combo]
        for perm in set(permutations(combo)):
            out[perm] = value
    return out


def power_derivative(bundle: DerivativeBundle, p, order: int) -> np.ndarray | float:
    """Fully symmetric order-``order`` derivative tensor of A^p at bundle.y."""
    if order < 0 or order > MAX_POWER_ORDER:
        raise UnsupportedOrder(f"power derivative order {order} not in 0..{MAX_POWER_ORDER}")
    if bundle.a0 == 0.0:
        raise ZeroBase("A(y) = 0: powers of the polynomial value are undefined here")
    p = as_rational_exponent(p)
    if order == 0:
        return real_power(bundle.a0, p)
    n = bundle.n
    total = np.zeros((n,) * order)
    for partition in set_partitions(order):
        blocks = len(partition)
        coeff = float(falling_factorial(p, blocks)) * real_power(bundle.a0, p - blocks)
        if coeff != 0.0:
            total += coeff * _partition_term(bundle, partition)
    # the partition sum is symmetric mathematically; mirroring the sorted
    # representative makes it symmetric to the last bit as well
    return _mirror_symmetric(total)


def _require_regular(metric: PolynomialMetric, y) -> DomainStatus:
    status = domain_status(metric, y)
    if not status.is_regular:
        raise DegenerateDomain(status.detail)
    return status


def fundamental_tensor(metric: PolynomialMetric, y) -> np.ndarray:
    """g_ij(y) = 1/2 * d^2(L^2)/dy^i dy^j with L^2 = A^(2/m)."""
    _require_regular(metric, y)
    return 0.5 * power_derivative(derivative_bundle(metric, y), Fraction(2, metric.m), 2)


def cartan_torsion(metric: PolynomialMetric, y) -> np.ndarray:
    """Cartan torsion C_jkm = 1/4 * d^3(L^2); fully symmetric, C_jkm y^m = 0."""
    _require_regular(metric, y)
    return 0.25 * power_derivative(derivative_bundle(metric, y), Fraction(2, metric.m), 3)


def torsion_gradient(metric: PolynomialMetric, y) -> np.ndarray:
    """dC_jkm/dy^l = 1/4 * d^4(L^2); fully symmetric order-4 tensor."""
    _require_regular(metric, y)
    return 0.25 * power_derivative(derivative_bundle(metric, y), Fraction(2, metric.m), 4)


def mixed_torsion(g_inv: np.ndarray, c_cov: np.ndarray) -> np.ndarray:
    """Raise the last slot: C^i_jk = g^{im} C_jkm."""
    return np.einsum("im,jkm->ijk", g_inv, c_cov)


def _rank_one_inverse(bundle: DerivativeBundle, m: int) -> np.ndarray | None:
    """Invert g = alpha*B + beta*a a^T via the rank-one-update formula.

    B = A_ij, a = A_i, alpha = A^(2/m-1)/m, beta = (1/m)(2/m-1) A^(2/m-2).
    Returns None when B is singular or the update denominator degenerates
    (the caller then falls back to direct inversion).
    """
    p = Fraction(2, m)
    alpha = float(p) / 2.0 * real_power(bundle.a0, p - 1)
    beta = float(p) / 2.0 * (float(p) - 1.0) * real_power(bundle.a0, p - 2)
    try:
        b_inv = np.linalg.solve(bundle.a2, np.eye(bundle.n))
    except np.linalg.LinAlgError:
        return None
    u = b_inv @ bundle.a1
    s = float(bundle.a1 @ u)
    denom = alpha + beta * s
    if abs(denom) <= 1e-14 * abs(alpha):
        return None
    return b_inv / alpha - (beta / (alpha * denom)) * np.outer(u, u)


def inverse_fundamental_tensor(
    metric: PolynomialMetric,
    y,
    method: str = "auto",
    cond_threshold: float = DEFAULT_COND_THRESHOLD,
) -> np.ndarray:
    """Inverse g^jk of the fundamental tensor.

    ``method`` is one of "auto" (rank-one update with fallback to a direct
    dense inversion), "rank_one", or "direct".  Raises
    :class:`SingularMetric` when g is numerically singular.
    """
    if method not in ("auto", "rank_one", "direct"):
        raise ValueError(f"unknown inversion method {method!r}")
    _require_regular(metric, y)
    bundle = derivative_bundle(metric, y)
    g = 0.5 * power_derivative(bundle, Fraction(2, metric.m), 2)
    cond = float(np.linalg.cond(g))
    if not np.isfinite(cond) or cond > cond_threshold:
        raise SingularMetric(f"fundamental tensor condition estimate {cond:.3e}")
    if method != "direct":
        g_inv = _rank_one_inverse(bundle, metric.m)
        if g_inv is not None:
            return g_inv
        if method == "rank_one":
            raise SingularMetric("rank-one inversion path degenerated")
    return np.linalg.inv(g)


@dataclass(frozen=True)
class GeometryPoint:
    """All pointwise metric data: g, its inverse, torsion and torsion gradient."""

    y: np.ndarray
    status: DomainStatus
    l_value: float
    g: np.ndarray
    g_inv: np.ndarray
    c_cov: np.ndarray
    c_mixed: np.ndarray
    c_grad: np.ndarray
    cond: float

    @property
    def n(self) -> int:
        return self.y.shape[0]


def geometry_point(
    metric: PolynomialMetric,
    y,
    inverse_method: str = "auto",
    cond_threshold: float = DEFAULT_COND_THRESHOLD,
) -> GeometryPoint:
    """Evaluate the full pointwise geometry of the metric at a regular point."""
    status = _require_regular(metric, y)
    bundle = derivative_bundle(metric, y)
    p = Fraction(2, metric.m)
    g = 0.5 * power_derivative(bundle, p, 2)
    cond = float(np.linalg.cond(g))
    if not np.isfinite(cond) or cond > cond_threshold:
        raise SingularMetric(f"fundamental tensor condition estimate {cond:.3e}")
    g_inv = None
    if inverse_method != "direct":
        g_inv = _rank_one_inverse(bundle, metric.m)
        if g_inv is None and inverse_method == "rank_one":
            raise SingularMetric("rank-one inversion path degenerated")
    if g_inv is None:
        g_inv = np.linalg.inv(g)
    c_cov = 0.25 * power_derivative(bundle, p, 3)
    return GeometryPoint(
        y=bundle.y,
        status=status,
        l_value=real_power(bundle.a0, Fraction(1, metric.m)),
        g=g,
        g_inv=g_inv,
        c_cov=c_cov,
        c_mixed=mixed_torsion(g_inv, c_cov),
        c_grad=0.25 * power_derivative(bundle, p, 4),
        cond=cond,
    )
