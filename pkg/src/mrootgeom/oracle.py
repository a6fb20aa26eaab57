"""Independent differentiation oracles and fixture formulas.

Everything here exists to certify the analytic pipeline without sharing its
code paths:

* :func:`fd_tensor` — central finite differences per axis combination, with a
  Richardson table and Ridders-style best-entry selection;
* :func:`dual_tensor` — derivatives of A^p by propagating nested first-order
  perturbation numbers through polynomial evaluation and the real power
  function (no set-partition coefficients anywhere in this path);
* :func:`golden_fixtures` — closed-form expressions for the built-in metrics,
  entered by hand, including known-erroneous variants kept so the check suite
  can demonstrate that they fail (see :data:`ERRONEOUS_FIXTURES`);
* :func:`compare` — tolerance comparison producing a :class:`ComparisonReport`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

import numpy as np

from .errors import (
    HyperplaneSingularity,
    ShapeMismatch,
    StepUnderflow,
    UnsupportedOrder,
    ZeroBase,
)
from .metric import (
    PolynomialMetric,
    as_direction,
    derivative_bundle,
    evaluate,
    evaluate_batch,
    multi_indices,
)
from .power import as_rational_exponent, real_power

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class OracleConfig:
    """Step sizes and tolerances for the derivative oracles.

    ``base_step`` is relative: the order-r step is
    base_step * step_growth**(r-1) * (1 + ||y||).  Growth with the order keeps
    the higher-order stencils out of the cancellation floor.
    """

    base_step: float = 1e-3
    step_growth: float = 2.5
    richardson_levels: int = 2
    fd_rel_tol: tuple[float, float, float, float] = (1e-8, 1e-7, 1e-5, 1e-4)
    dual_rel_tol: float = 1e-10
    zero_floor: float = 1e-10

    def __post_init__(self):
        if self.base_step <= 0.0:
            raise ValueError("base_step must be positive")
        if self.richardson_levels < 1:
            raise ValueError("richardson_levels must be >= 1")
        tols = self.fd_rel_tol
        if len(tols) != 4 or any(t <= 0 for t in tols) or list(tols) != sorted(tols):
            raise ValueError("fd_rel_tol must be four positive, nondecreasing tolerances")

    def step_for(self, order: int, y: np.ndarray) -> float:
        return self.base_step * self.step_growth ** (order - 1) * (1.0 + float(np.linalg.norm(y)))

    def fd_tolerance(self, order: int) -> float:
        return self.fd_rel_tol[order - 1]


DEFAULT_CONFIG = OracleConfig()


@dataclass(frozen=True)
class ComparisonReport:
    """Outcome of comparing an analytic tensor against an oracle tensor.

    ``max_rel_error`` is relative to the larger of the two tensor sup-norms;
    tensors that are both below the near-zero floor compare by absolute error.
    """

    max_abs_error: float
    max_rel_error: float
    worst_index: tuple[int, ...]
    passed: bool
    method: str
    rel_tol: float


def compare(
    analytic,
    oracle,
    config: OracleConfig | None = None,
    *,
    rel_tol: float | None = None,
    order: int | None = None,
    method: str = "Analytic",
) -> ComparisonReport:
    """Compare two same-shape tensors under a relative/absolute hybrid criterion."""
    config = config or DEFAULT_CONFIG
    a = np.asarray(analytic, dtype=float)
    o = np.asarray(oracle, dtype=float)
    if a.shape != o.shape:
        raise ShapeMismatch(f"tensor shapes differ: {a.shape} vs {o.shape}")
    if rel_tol is None:
        if method == "DualNumber":
            rel_tol = config.dual_rel_tol
        elif method == "FiniteDifference":
            if order is None:
                raise ValueError("FD comparisons need the derivative order for the tolerance")
            rel_tol = config.fd_tolerance(order)
        else:
            raise ValueError("explicit rel_tol required for analytic comparisons")
    diff = np.abs(a - o)
    max_abs = float(diff.max()) if diff.size else 0.0
    ref = max(float(np.max(np.abs(a), initial=0.0)), float(np.max(np.abs(o), initial=0.0)))
    max_rel = max_abs / ref if ref > 0.0 else (0.0 if max_abs == 0.0 else np.inf)
    floor = config.zero_floor * (1.0 + ref)
    worst = tuple(int(i) for i in np.unravel_index(int(np.argmax(diff)), a.shape)) if a.ndim else ()
    return ComparisonReport(
        max_abs_error=max_abs,
        max_rel_error=max_rel,
        worst_index=worst,
        passed=bool(max_rel <= rel_tol or max_abs <= floor),
        method=method,
        rel_tol=float(rel_tol),
    )


# ---------------------------------------------------------------------------
# Finite differences


@dataclass(frozen=True)
class PolyPower:
    """Scalar function handle y -> A(y)^p with vectorized batch evaluation."""

    metric: PolynomialMetric
    p: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", as_rational_exponent(self.p))

    def __call__(self, y) -> float:
        return real_power(evaluate(self.metric, y), self.p)

    def batch(self, ys: np.ndarray) -> np.ndarray:
        return real_power(evaluate_batch(self.metric, ys), self.p)


def _eval_many(f, pts: np.ndarray) -> np.ndarray:
    batch = getattr(f, "batch", None)
    if batch is not None:
        return np.asarray(batch(pts), dtype=float)
    return np.array([f(p) for p in pts], dtype=float)


# central stencils per 1-d derivative order: (offset, weight) with weight / h^order
_STENCILS = {
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
    4: ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)),
}


def _entry_stencil(combo: tuple[int, ...], n: int):
    """Tensor-product stencil (offset vectors, weights) for one mixed partial."""
    mult: dict[int, int] = {}
    for axis in combo:
        mult[axis] = mult.get(axis, 0) + 1
    axes = sorted(mult)
    offsets, weights = [], []
    for choice in product(*(_STENCILS[mult[a]] for a in axes)):
        off = np.zeros(n)
        w = 1.0
        for axis, (o, wa) in zip(axes, choice):
            off[axis] = o
            w *= wa
        offsets.append(off)
        weights.append(w)
    return np.array(offsets), np.array(weights)


@dataclass(frozen=True)
class FdEstimate:
    tensor: np.ndarray
    error_indicator: float


def fd_tensor_raw(f, y, order: int, step: float) -> np.ndarray:
    """Single central-difference pass at a fixed step, no extrapolation."""
    y = as_direction(y)
    n = y.shape[0]
    out = np.zeros((n,) * order)
    for combo in multi_indices(n, order):
        offsets, weights = _entry_stencil(combo, n)
        vals = _eval_many(f, y[np.newaxis, :] + step * offsets)
        value = float(weights @ vals) / step**order
        for perm in set(permutations(combo)):
            out[perm] = value
    return out


def fd_tensor(f, y, order: int, config: OracleConfig | None = None) -> FdEstimate:
    """Richardson-extrapolated central-difference derivative tensor of f at y.

    Builds the full extrapolation table over richardson_levels step halvings
    and keeps, per entry, the table cell with the smallest internal error
    estimate (difference between neighboring extrapolation levels); the
    returned indicator is the largest such estimate over all entries.
    """
    if order < 1 or order > 4:
        raise UnsupportedOrder(f"finite differences support orders 1..4, got {order}")
    config = config or DEFAULT_CONFIG
    y = as_direction(y)
    n = y.shape[0]
    scale = 1.0 + float(np.linalg.norm(y))
    h0 = config.step_for(order, y)
    levels = config.richardson_levels
    if h0 / 2**levels <= 128.0 * _EPS * scale:
        raise StepUnderflow(f"smallest step {h0 / 2**levels:.3e} is below precision usefulness")

    entries = list(multi_indices(n, order))
    stencils = [_entry_stencil(combo, n) for combo in entries]
    pts, slices = [], []
    start = 0
    for lev in range(levels + 1):
        h = h0 / 2**lev
        for offsets, _ in stencils:
            pts.append(y[np.newaxis, :] + h * offsets)
            slices.append(slice(start, start + offsets.shape[0]))
            start += offsets.shape[0]
    vals = _eval_many(f, np.concatenate(pts, axis=0))

    raw = np.empty((levels + 1, len(entries)))
    k = 0
    for lev in range(levels + 1):
        h = h0 / 2**lev
        for e, (_, weights) in enumerate(stencils):
            raw[lev, e] = float(weights @ vals[slices[k]]) / h**order
            k += 1

    # triangular table: tbl[i][j] kills the h^(2j) truncation term
    tbl: list[list[np.ndarray]] = [[raw[0]]]
    candidates_val, candidates_err = [], []
    for i in range(1, levels + 1):
        row = [raw[i]]
        for j in range(1, i + 1):
            fac = 4.0**j
            extrap = (fac * row[j - 1] - tbl[i - 1][j - 1]) / (fac - 1.0)
            err = np.maximum(np.abs(extrap - row[j - 1]), np.abs(extrap - tbl[i - 1][j - 1]))
            candidates_val.append(extrap)
            candidates_err.append(err)
            row.append(extrap)
        tbl.append(row)
    candidates_val.append(raw[levels])
    candidates_err.append(np.abs(raw[levels] - raw[levels - 1]))
    vals_m = np.stack(candidates_val)
    errs_m = np.stack(candidates_err)
    best = np.argmin(errs_m, axis=0)
    picked = vals_m[best, np.arange(len(entries))]
    picked_err = errs_m[best, np.arange(len(entries))]

    out = np.zeros((n,) * order)
    for e, combo in enumerate(entries):
        for perm in set(permutations(combo)):
            out[perm] = picked[e]
    return FdEstimate(tensor=out, error_indicator=float(picked_err.max()))


# ---------------------------------------------------------------------------
# Nested first-order perturbation numbers (forward mode)


class _Jet:
    """One perturbation level over a base that is an array or another jet."""

    __slots__ = ("re", "ep")

    def __init__(self, re, ep):
        self.re = re
        self.ep = ep


def _jadd(u, v):
    if isinstance(u, _Jet):
        return _Jet(_jadd(u.re, v.re), _jadd(u.ep, v.ep))
    return u + v


def _jscale(u, c: float):
    if isinstance(u, _Jet):
        return _Jet(_jscale(u.re, c), _jscale(u.ep, c))
    return u * c


def _jmul(u, v):
    if isinstance(u, _Jet):
        return _Jet(_jmul(u.re, v.re), _jadd(_jmul(u.re, v.ep), _jmul(u.ep, v.re)))
    return u * v


def _jpow(u, p: Fraction):
    if isinstance(u, _Jet):
        return _Jet(_jpow(u.re, p), _jmul(_jscale(_jpow(u.re, p - 1), float(p)), u.ep))
    return real_power(u, p)


def _jtree(mask_coeffs: list[np.ndarray], depth: int):
    if depth == 0:
        return mask_coeffs[0]
    half = len(mask_coeffs) // 2
    return _Jet(_jtree(mask_coeffs[:half], depth - 1), _jtree(mask_coeffs[half:], depth - 1))


def _jtop(u, depth: int):
    for _ in range(depth):
        u = u.ep
    return u


def _jbase(u):
    while isinstance(u, _Jet):
        u = u.re
    return u


def dual_tensor(metric: PolynomialMetric, p, y, order: int) -> np.ndarray | float:
    """Order-``order`` derivative tensor of A^p by nested dual numbers.

    Exact to rounding.  All distinct index combinations are propagated as one
    batch; the polynomial is evaluated term by term from the coefficient map,
    independently of both the analytic chain-rule path and the FD stencils.
    """
    if order < 0 or order > 4:
        raise UnsupportedOrder(f"dual oracle supports orders 0..4, got {order}")
    p = as_rational_exponent(p)
    y = as_direction(y, metric.n)
    a0 = evaluate(metric, y)
    if a0 == 0.0:
        raise ZeroBase("A(y) = 0: A^p is singular here")
    if order == 0:
        return real_power(a0, p)

    n = metric.n
    entries = list(multi_indices(n, order))
    n_e = len(entries)
    seeds = np.zeros((order, n, n_e))
    for e, combo in enumerate(entries):
        for level, axis in enumerate(combo):
            seeds[level, axis, e] += 1.0
    var_jets = []
    for v in range(n):
        masks = [np.zeros(n_e) for _ in range(2**order)]
        masks[0] = np.full(n_e, y[v])
        for level in range(order):
            masks[1 << level] = seeds[level, v]
        var_jets.append(_jtree(masks, order))

    acc = _jtree([np.zeros(n_e) for _ in range(2**order)], order)
    for idx, coeff in sorted(metric.terms.items()):
        mono = var_jets[idx[0]]
        for i in idx[1:]:
            mono = _jmul(mono, var_jets[i])
        acc = _jadd(acc, _jscale(mono, coeff))
    values = _jtop(_jpow(acc, p), order)

    out = np.zeros((n,) * order)
    for e, combo in enumerate(entries):
        for perm in set(permutations(combo)):
            out[perm] = values[e]
    return out


# ---------------------------------------------------------------------------
# Hand-entered closed-form fixtures for the built-in metrics

#: Fixture names whose closed forms are known to be wrong; they are produced
#: for adjudication evidence and must never be used as trusted references.
ERRONEOUS_FIXTURES = {
    "bg3": {
        "compact_inverse": "diagonal of the one-line cofactor formula disagrees with the "
        "printed adjugate and with direct cofactors"
    },
    "bg4": {},
}


def _require_off_hyperplanes(y: np.ndarray, what: str):
    if np.any(y == 0.0):
        raise HyperplaneSingularity(f"{what} divides by a zero coordinate component")


def golden_fixtures(tag: str, y) -> dict[str, np.ndarray]:
    """Evaluate the hand-entered closed forms for a built-in metric at y.

    Keys (both metrics): "a1", "a2", "a3", "det_a2", "adjugate", "inverse_a2";
    bg4 adds the structure scalars "p","q","r","s","a","b","c"; bg3 adds the
    known-erroneous "compact_inverse" (see :data:`ERRONEOUS_FIXTURES`).
    The derivative entries are what hand expansion of the product form gives,
    so they double as an independent check on the coefficient pipeline.
    """
    if tag == "bg3":
        return _golden_bg3(as_direction(y, 3))
    if tag == "bg4":
        return _golden_bg4(as_direction(y, 4))
    raise ValueError(f"unknown builtin metric tag {tag!r}")


def _golden_bg3(y: np.ndarray) -> dict[str, np.ndarray]:
    y1, y2, y3 = y
    s1, s2, s3 = (float(np.sum(y**a)) for a in (1, 2, 3))
    p3 = float(np.prod(y))
    _require_off_hyperplanes(y, "the first-derivative closed form")
    a1 = np.array([6 * yi**2 - s2 - 2 * yi * s1 + 2 * p3 / yi for yi in y])
    a2 = np.array(
        [
            [6 * y1 - 2 * y2 - 2 * y3, -2 * y1 - 2 * y2 + 2 * y3, -2 * y1 + 2 * y2 - 2 * y3],
            [-2 * y1 - 2 * y2 + 2 * y3, -2 * y1 + 6 * y2 - 2 * y3, 2 * y1 - 2 * y2 - 2 * y3],
            [-2 * y1 + 2 * y2 - 2 * y3, 2 * y1 - 2 * y2 - 2 * y3, -2 * y1 - 2 * y2 + 6 * y3],
        ]
    )
    third = {
        0: [[6, -2, -2], [-2, -2, 2], [-2, 2, -2]],
        1: [[-2, -2, 2], [-2, 6, -2], [2, -2, -2]],
        2: [[-2, 2, -2], [2, -2, -2], [-2, -2, 6]],
    }
    a3 = np.stack([np.array(third[m], dtype=float) for m in range(3)], axis=-1)
    d = -8 * s3 + 4 * s1 * s2 - 8 * p3
    if d == 0.0:
        raise ZeroBase("the Hessian determinant factor vanishes; no inverse fixture here")
    adj = np.array(
        [
            [
                2 * y2**2 - 4 * y2 * y3 + 2 * y3**2,
                s2 - 2 * y1 * y3 - 2 * y2 * y3,
                s2 - 2 * y1 * y2 - 2 * y2 * y3,
            ],
            [
                s2 - 2 * y1 * y3 - 2 * y2 * y3,
                2 * y1**2 - 4 * y1 * y3 + 2 * y3**2,
                s2 - 2 * y1 * y2 - 2 * y1 * y3,
            ],
            [
                s2 - 2 * y1 * y2 - 2 * y2 * y3,
                s2 - 2 * y1 * y2 - 2 * y1 * y3,
                2 * y1**2 - 4 * y1 * y2 + 2 * y2**2,
            ],
        ]
    )
    compact = np.array(
        [
            [
                (s2 - 2 * (y[j] + y[k]) * p3 / (y[j] * y[k]) - (y[j] ** 2 if j == k else 0.0)) / d
                for k in range(3)
            ]
            for j in range(3)
        ]
    )
    return {
        "a1": a1,
        "a2": a2,
        "a3": a3,
        "det_a2": np.float64(-8 * d),
        "adjugate": adj,
        "inverse_a2": adj / d,
        "compact_inverse": compact,
    }


def _golden_bg4(y: np.ndarray) -> dict[str, np.ndarray]:
    y1, y2, y3, y4 = y
    s2 = float(np.sum(y**2))
    p4 = float(np.prod(y))
    _require_off_hyperplanes(y, "the first-derivative closed form")
    a1 = np.array([4 * yi**3 - 4 * yi * (s2 - yi**2) - 8 * p4 / yi for yi in y])
    p = 12 * y1**2 - 4 * y2**2 - 4 * y3**2 - 4 * y4**2
    q = -4 * y1**2 + 12 * y2**2 - 4 * y3**2 - 4 * y4**2
    r = -4 * y1**2 - 4 * y2**2 + 12 * y3**2 - 4 * y4**2
    s = -4 * y1**2 - 4 * y2**2 - 4 * y3**2 + 12 * y4**2
    a = -8 * y1 * y2 - 8 * y3 * y4
    b = -8 * y1 * y3 - 8 * y2 * y4
    c = -8 * y1 * y4 - 8 * y2 * y3
    a2 = np.array([[p, a, b, c], [a, q, c, b], [b, c, r, a], [c, b, a, s]])
    det = (
        a**4
        - 2 * a**2 * c**2
        - 2 * b**2 * c**2
        - 2 * a**2 * b**2
        + b**4
        + c**4
        - a**2 * p * q
        - b**2 * p * r
        - a**2 * r * s
        - b**2 * q * s
        - c**2 * p * s
        - c**2 * q * r
        + 2 * a * b * c * p
        + 2 * a * b * c * q
        + 2 * a * b * c * r
        + 2 * a * b * c * s
        + p * q * r * s
    )
    e11 = -q * a**2 + 2 * a * b * c - r * b**2 - s * c**2 + q * r * s
    e22 = -p * a**2 + 2 * a * b * c - s * b**2 - r * c**2 + p * r * s
    e33 = -s * a**2 + 2 * a * b * c - p * b**2 - q * c**2 + p * q * s
    e44 = -r * a**2 + 2 * a * b * c - q * b**2 - p * c**2 + p * q * r
    e12 = a**3 - a * c**2 - a * b**2 + b * c * r + b * c * s - a * r * s
    e34 = a**3 - a * c**2 - a * b**2 + b * c * p + b * c * q - a * p * q
    e13 = b**3 - b * c**2 - a**2 * b + a * c * q + a * c * s - b * q * s
    e24 = b**3 - b * c**2 - a**2 * b + a * c * p + a * c * r - b * p * r
    e14 = c**3 - b**2 * c - a**2 * c + a * b * q + a * b * r - c * q * r
    e23 = c**3 - b**2 * c - a**2 * c + a * b * p + a * b * s - c * p * s
    adj = np.array(
        [[e11, e12, e13, e14], [e12, e22, e23, e24], [e13, e23, e33, e34], [e14, e24, e34, e44]]
    )
    if det == 0.0:
        raise ZeroBase("the Hessian determinant vanishes; no inverse fixture here")
    third = {
        0: [
            [24 * y1, -8 * y2, -8 * y3, -8 * y4],
            [-8 * y2, -8 * y1, -8 * y4, -8 * y3],
            [-8 * y3, -8 * y4, -8 * y1, -8 * y2],
            [-8 * y4, -8 * y3, -8 * y2, -8 * y1],
        ],
        1: [
            [-8 * y2, -8 * y1, -8 * y4, -8 * y3],
            [-8 * y1, 24 * y2, -8 * y3, -8 * y4],
            [-8 * y4, -8 * y3, -8 * y2, -8 * y1],
            [-8 * y3, -8 * y4, -8 * y1, -8 * y2],
        ],
        2: [
            [-8 * y3, -8 * y4, -8 * y1, -8 * y2],
            [-8 * y4, -8 * y3, -8 * y2, -8 * y1],
            [-8 * y1, -8 * y2, 24 * y3, -8 * y4],
            [-8 * y2, -8 * y1, -8 * y4, -8 * y3],
        ],
        3: [
            [-8 * y4, -8 * y3, -8 * y2, -8 * y1],
            [-8 * y3, -8 * y4, -8 * y1, -8 * y2],
            [-8 * y2, -8 * y1, -8 * y4, -8 * y3],
            [-8 * y1, -8 * y2, -8 * y3, 24 * y4],
        ],
    }
    a3 = np.stack([np.array(third[m], dtype=float) for m in range(4)], axis=-1)
    return {
        "a1": a1,
        "a2": a2,
        "a3": a3,
        "det_a2": np.float64(det),
        "adjugate": adj,
        "inverse_a2": adj / det,
        "p": np.float64(p),
        "q": np.float64(q),
        "r": np.float64(r),
        "s": np.float64(s),
        "a": np.float64(a),
        "b": np.float64(b),
        "c": np.float64(c),
    }


# ---------------------------------------------------------------------------
# Known-erroneous printed variants, kept for adjudication


def printed_torsion_variant_bg3(metric: PolynomialMetric, y) -> np.ndarray:
    """Cartan torsion with the third partition-class coefficient -1/18.

    This is the coefficient that appears in print for the cubic metric; the
    chain rule gives +2/27, and both oracles reject this variant.  Only the
    final coefficient differs from :func:`mrootgeom.power.cartan_torsion`.
    """
    bundle = derivative_bundle(metric, y)
    a0, a1, a2, a3 = bundle.a0, bundle.a1, bundle.a2, bundle.a3
    sym = (
        np.einsum("jk,m->jkm", a2, a1)
        + np.einsum("km,j->jkm", a2, a1)
        + np.einsum("mj,k->jkm", a2, a1)
    )
    aaa = np.einsum("j,k,m->jkm", a1, a1, a1)
    return (
        real_power(a0, Fraction(-1, 3)) / 6.0 * a3
        - real_power(a0, Fraction(-4, 3)) / 18.0 * sym
        - real_power(a0, Fraction(-7, 3)) / 18.0 * aaa
    )


def printed_inverse_variant_bg4(metric: PolynomialMetric, y) -> np.ndarray:
    """Inverse fundamental tensor with the printed rank-one factor.

    The printed closed form for the quartic metric reads
    A^{-1/2} / (2 - A^{-1} A^{uv} A_u A_v) on the A^j A^k term; the
    rank-one-update derivation gives four times that.  This variant must fail
    the g . g^{-1} = identity test.
    """
    bundle = derivative_bundle(metric, y)
    b_inv = np.linalg.solve(bundle.a2, np.eye(bundle.n))
    u = b_inv @ bundle.a1
    s = float(bundle.a1 @ u)
    coeff = real_power(bundle.a0, Fraction(-1, 2)) / (2.0 - s / bundle.a0)
    return 4.0 * real_power(bundle.a0, Fraction(1, 2)) * b_inv + coeff * np.outer(u, u)
