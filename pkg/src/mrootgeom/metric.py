"""m-th root Minkowski metrics: L(y) = A(y)^(1/m) with A a homogeneous polynomial.

Two interchangeable representations are provided:

* :class:`LinearFormsMetric` — a product of n linear forms (rows of a matrix),
  the classical way these metrics are written down;
* :class:`PolynomialMetric` — the expanded homogeneous polynomial, stored as
  sparse multi-index coefficients.  This is the single source of truth for all
  differentiation: derivative tensors come from falling-factorial bookkeeping
  on the coefficients, never from closed forms with removable singularities.

The built-in Bogoslovsky-Goenner metrics (fully anisotropic flat space-time
models) are available through :func:`make_bg3` and :func:`make_bg4`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement

import numpy as np

from . import kernels
from .errors import DegenerateForms, DimensionMismatch, UnsupportedOrder

MAX_DERIVATIVE_ORDER = 4

#: NearDegenerate band: epsilon < |A| <= NEAR_DEGENERATE_BAND * epsilon.
NEAR_DEGENERATE_BAND = 1e3


def as_direction(y, n: int | None = None) -> np.ndarray:
    """Validate a fiber direction: finite float vector, optionally of length n.

    Always copies, so downstream bundles never alias caller-owned storage.
    """
    arr = np.array(y, dtype=float)
    if arr.ndim != 1:
        raise DimensionMismatch(f"direction must be a vector, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise DimensionMismatch(f"direction has length {arr.shape[0]}, expected {n}")
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatch("direction components must be finite")
    return arr


class Classification(enum.Enum):
    REGULAR = "Regular"
    NEAR_DEGENERATE = "NearDegenerate"
    DEGENERATE = "Degenerate"
    OUT_OF_DOMAIN = "OutOfDomain"


@dataclass(frozen=True)
class DomainStatus:
    """Where a point sits relative to the metric's domain of definition."""

    a_value: float
    classification: Classification
    detail: str

    @property
    def is_regular(self) -> bool:
        return self.classification in (Classification.REGULAR, Classification.NEAR_DEGENERATE)


@dataclass(frozen=True)
class PolynomialMetric:
    """Homogeneous degree-m polynomial in n variables, sparse multi-index form.

    ``terms`` maps a sorted tuple of m variable indices (0-based) to the
    coefficient of the corresponding monomial; e.g. for n = m = 3 the key
    (0, 1, 1) holds the coefficient of y1 * y2**2.
    """

    n: int
    m: int
    terms: dict[tuple[int, ...], float] = field(compare=False)
    _canonical: tuple[tuple[tuple[int, ...], float], ...] = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 2:
            raise DimensionMismatch("need at least two variables")
        if self.m < 1:
            raise ValueError("polynomial degree must be positive")
        clean: dict[tuple[int, ...], float] = {}
        for idx, coeff in self.terms.items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != self.m:
                raise ValueError(f"multi-index {idx} does not have {self.m} entries")
            if idx != tuple(sorted(idx)):
                raise ValueError(f"multi-index {idx} is not sorted")
            if not all(0 <= i < self.n for i in idx):
                raise ValueError(f"multi-index {idx} out of range for n={self.n}")
            c = float(coeff)
            if not math.isfinite(c):
                raise ValueError("coefficients must be finite")
            if c != 0.0:
                clean[idx] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_canonical", tuple(sorted(clean.items())))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolynomialMetric)
            and self.n == other.n
            and self.m == other.m
            and self._canonical == other._canonical
        )

    def __hash__(self):
        return hash((self.n, self.m, self._canonical))

    @cached_property
    def _exps(self) -> np.ndarray:
        exps = np.zeros((len(self._canonical), self.n), dtype=np.int64)
        for t, (idx, _) in enumerate(self._canonical):
            for i in idx:
                exps[t, i] += 1
        return exps

    @cached_property
    def _coeffs(self) -> np.ndarray:
        return np.array([c for _, c in self._canonical])

    def __call__(self, y) -> float:
        return evaluate(self, y)

    @staticmethod
    def power_sum(y, alpha: int) -> float:
        """Convenience scalar sum_i (y^i)^alpha (used in tests and reports)."""
        y = np.asarray(y, dtype=float)
        return float(np.sum(y**alpha))

    @staticmethod
    def coordinate_product(y) -> float:
        """Convenience scalar y^1 y^2 ... y^n (used in tests and reports)."""
        return float(np.prod(np.asarray(y, dtype=float)))


@dataclass(frozen=True, eq=False)
class LinearFormsMetric:
    """Product metric L = (l_1(y) ... l_n(y))^(1/n); row a of ``forms`` holds
    the coefficients of the linear form l_a."""

    n: int
    forms: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "forms", np.array(self.forms, dtype=float))
        self.forms.setflags(write=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinearFormsMetric)
            and self.n == other.n
            and np.array_equal(self.forms, other.forms)
        )

    def __hash__(self):
        return hash((self.n, self.forms.tobytes()))

    def factors(self, y) -> np.ndarray:
        """Values of the n linear forms at y."""
        return self.forms @ as_direction(y, self.n)

    def evaluate(self, y) -> float:
        return float(np.prod(self.factors(y)))


def make_product_metric(forms, det_threshold: float = 1e-9) -> LinearFormsMetric:
    """Build a product metric from an n x n matrix of 1-form coefficients.

    Raises :class:`DegenerateForms` when the rows are not linearly independent
    (|det| below ``det_threshold``).
    """
    mat = np.array(forms, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DegenerateForms(f"forms matrix must be square, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise DegenerateForms("forms matrix entries must be finite")
    det = float(np.linalg.det(mat))
    if abs(det) < det_threshold:
        raise DegenerateForms(f"1-forms are not linearly independent: |det| = {abs(det):.3e}")
    return LinearFormsMetric(n=mat.shape[0], forms=mat)


def expand(metric: LinearFormsMetric) -> PolynomialMetric:
    """Expand a product of linear forms into canonical polynomial form."""
    poly: dict[tuple[int, ...], float] = {(): 1.0}
    for row in metric.forms:
        nxt: dict[tuple[int, ...], float] = {}
        for idx, coeff in poly.items():
            for i in range(metric.n):
                a = row[i]
                if a == 0.0:
                    continue
                key = tuple(sorted(idx + (i,)))
                nxt[key] = nxt.get(key, 0.0) + coeff * a
        poly = nxt
    return PolynomialMetric(n=metric.n, m=metric.n, terms=poly)


BG3_FORMS = np.array([[1.0, -1.0, -1.0], [1.0, -1.0, 1.0], [1.0, 1.0, -1.0]])
BG4_FORMS = np.array(
    [
        [1.0, -1.0, -1.0, -1.0],
        [1.0, -1.0, 1.0, 1.0],
        [1.0, 1.0, -1.0, 1.0],
        [1.0, 1.0, 1.0, -1.0],
    ]
)


def make_bg3() -> PolynomialMetric:
    """Three-dimensional Bogoslovsky-Goenner metric, expanded cubic form."""
    return expand(LinearFormsMetric(3, BG3_FORMS))


def make_bg4() -> PolynomialMetric:
    """Four-dimensional Bogoslovsky-Goenner metric, expanded quartic form."""
    return expand(LinearFormsMetric(4, BG4_FORMS))


def evaluate(metric: PolynomialMetric, y) -> float:
    """Exact polynomial evaluation A(y); division-free, total on all of R^n."""
    return kernels.poly_eval(metric._exps, metric._coeffs, as_direction(y, metric.n))


def evaluate_batch(metric: PolynomialMetric, ys) -> np.ndarray:
    """Vectorized :func:`evaluate` over rows of ``ys``."""
    ys = np.asarray(ys, dtype=float)
    if ys.ndim != 2 or ys.shape[1] != metric.n:
        raise DimensionMismatch(f"expected point batch of shape (p, {metric.n})")
    return kernels.poly_eval_batch(metric._exps, metric._coeffs, ys)


def derivative_tensor(metric: PolynomialMetric, y, order: int) -> np.ndarray | float:
    """Fully symmetric tensor of order-``order`` partial derivatives of A at y.

    Computed by formal differentiation of the coefficient representation
    (multi-index combinatorics); agrees with closed forms wherever those are
    defined, but is also valid on coordinate hyperplanes.
    """
    if order < 0 or order > MAX_DERIVATIVE_ORDER:
        raise UnsupportedOrder(f"derivative order {order} not in 0..{MAX_DERIVATIVE_ORDER}")
    y = as_direction(y, metric.n)
    if order == 0:
        return kernels.poly_eval(metric._exps, metric._coeffs, y)
    return kernels.poly_derivative_dense(metric._exps, metric._coeffs, y, order)


@dataclass(frozen=True)
class DerivativeBundle:
    """A(y) together with its derivative tensors up to order four."""

    y: np.ndarray
    a0: float
    a1: np.ndarray
    a2: np.ndarray
    a3: np.ndarray
    a4: np.ndarray

    @property
    def n(self) -> int:
        return self.y.shape[0]

    def tensor(self, order: int):
        return (self.a0, self.a1, self.a2, self.a3, self.a4)[order]


def derivative_bundle(metric: PolynomialMetric, y) -> DerivativeBundle:
    """Evaluate A and all derivative tensors up to order four at one point."""
    y = as_direction(y, metric.n)
    return DerivativeBundle(
        y=y,
        a0=derivative_tensor(metric, y, 0),
        a1=derivative_tensor(metric, y, 1),
        a2=derivative_tensor(metric, y, 2),
        a3=derivative_tensor(metric, y, 3),
        a4=derivative_tensor(metric, y, 4),
    )


def degeneracy_epsilon(metric: PolynomialMetric, y) -> float:
    """Scale-aware degeneracy threshold: 1e-12 * (1 + max|y^i|)^m.

    A is homogeneous of degree m, so an absolute epsilon would misclassify
    large-|y| points.
    """
    y = as_direction(y, metric.n)
    return 1e-12 * (1.0 + float(np.max(np.abs(y)))) ** metric.m


def domain_status(metric: PolynomialMetric, y, epsilon: float | None = None) -> DomainStatus:
    """Classify a point: Regular / NearDegenerate / Degenerate / OutOfDomain.

    Odd m only requires A != 0; even m requires A > 0 (an even root of a
    negative value is not real).  NearDegenerate flags the conditioning band
    epsilon < |A| <= 1e3 * epsilon.
    """
    y = as_direction(y, metric.n)
    eps = degeneracy_epsilon(metric, y) if epsilon is None else float(epsilon)
    a = evaluate(metric, y)
    if abs(a) <= eps:
        return DomainStatus(a, Classification.DEGENERATE, f"|A(y)| = {abs(a):.3e} <= {eps:.3e}")
    if metric.m % 2 == 0 and a < 0.0:
        return DomainStatus(
            a, Classification.OUT_OF_DOMAIN, f"A(y) = {a:.6g} < 0 with even root order {metric.m}"
        )
    if abs(a) <= NEAR_DEGENERATE_BAND * eps:
        return DomainStatus(
            a, Classification.NEAR_DEGENERATE, f"|A(y)| = {abs(a):.3e} within conditioning band"
        )
    return DomainStatus(a, Classification.REGULAR, f"A(y) = {a:.6g}")


def multi_indices(n: int, order: int):
    """Sorted multi-indices (combinations with repetition) of the given order."""
    return combinations_with_replacement(range(n), order)
