"""Vertical (fiberwise) curvature of an m-th root metric.

For a metric with no base-point dependence the canonical nonlinear connection
vanishes, so the whole geometry lives in the fibers: the curvature is built
from the Cartan torsion C and the inverse fundamental tensor alone.

Two equivalent computations are provided and cross-checked:

* the product form  S_imjk = g^{uv} (C_ujm C_vik - C_ukm C_vij), needing only
  C and g^{-1};
* the definitional form  S^l_ijk = dC^l_ij/dy^k - dC^l_ik/dy^j
  + C^u_ij C^l_uk - C^u_ik C^l_uj, needing the torsion gradient as well.

Lowering the second with g must reproduce the first; their agreement certifies
the torsion gradient and the derivative-of-inverse identity simultaneously.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotApplicableDimension, ZeroKappa
from .metric import PolynomialMetric, as_direction
from .power import GeometryPoint


def vertical_curvature_cov(point: GeometryPoint) -> np.ndarray:
    """S_imjk via the torsion product form; antisymmetric in (j, k)."""
    gi, c = point.g_inv, point.c_cov
    term = np.einsum("uv,ujm,vik->imjk", gi, c, c)
    return term - term.transpose(0, 1, 3, 2)


def vertical_curvature_mixed(point: GeometryPoint) -> np.ndarray:
    """S^l_ijk assembled from its definition, index order (l, i, j, k).

    Uses dC^l_ij/dy^k = (dg^{lm}/dy^k) C_ijm + g^{lm} dC_ijm/dy^k with
    dg^{lm}/dy^k = -2 g^{lu} g^{mv} C_uvk (since dg_uv/dy^k = 2 C_uvk).
    """
    gi, c, cm = point.g_inv, point.c_cov, point.c_mixed
    d_mixed = -2.0 * np.einsum("lu,mv,uvk,ijm->lijk", gi, gi, c, c) + np.einsum(
        "lm,ijmk->lijk", gi, point.c_grad
    )
    quad = np.einsum("uij,luk->lijk", cm, cm)
    curl = d_mixed + quad
    return curl - curl.transpose(0, 1, 3, 2)


def lower_curvature(point: GeometryPoint, s_mixed: np.ndarray) -> np.ndarray:
    """g_ml S^l_ijk, for comparison against :func:`vertical_curvature_cov`."""
    return np.einsum("ml,lijk->imjk", point.g, s_mixed)


def ricci_tensor(s_mixed: np.ndarray) -> np.ndarray:
    """Vertical Ricci tensor S_ij = S^m_ijm (upper index against last lower)."""
    return np.einsum("mijm->ij", s_mixed)


def scalar_curvature(ricci: np.ndarray, g_inv: np.ndarray) -> float:
    """Scalar curvature S = g^{uv} S_uv."""
    return float(np.einsum("uv,uv->", g_inv, ricci))


def einstein_tensor(ricci: np.ndarray, scalar: float, g: np.ndarray) -> np.ndarray:
    """E_ij = S_ij - (S/2) g_ij."""
    return ricci - 0.5 * scalar * g


@dataclass(frozen=True)
class EinsteinResidual:
    """Einstein tensor with the induced stress-energy T_ij = E_ij / kappa."""

    einstein: np.ndarray
    kappa: float
    stress_energy: np.ndarray
    trace_residual: float  # g^{ij} E_ij - S (1 - n/2); identically zero in exact arithmetic


def einstein_residual(
    ricci: np.ndarray, scalar: float, g: np.ndarray, kappa: float, g_inv: np.ndarray | None = None
) -> EinsteinResidual:
    """Fiberwise Einstein-like equations, defined for dimension n > 2 only."""
    n = g.shape[0]
    if n <= 2:
        raise NotApplicableDimension("Einstein-like equations require dimension n > 2")
    if kappa == 0.0:
        raise ZeroKappa("the Einstein constant must be nonzero")
    e = einstein_tensor(ricci, scalar, g)
    if g_inv is None:
        g_inv = np.linalg.inv(g)
    trace = float(np.einsum("ij,ij->", g_inv, e))
    return EinsteinResidual(
        einstein=e,
        kappa=float(kappa),
        stress_energy=e / kappa,
        trace_residual=trace - scalar * (1.0 - n / 2.0),
    )


@dataclass(frozen=True)
class ConnectionBundle:
    """Spray and nonlinear connection; identically zero for y-only metrics."""

    spray: np.ndarray
    connection: np.ndarray


def nonlinear_connection(metric: PolynomialMetric, y) -> ConnectionBundle:
    """Canonical nonlinear connection N^i_j of the metric.

    The general formula differentiates L^2 with respect to base-point (and
    external-time) variables; every such term vanishes for a metric depending
    on the fiber coordinates alone, so the spray and the connection are the
    constant zero tensors.
    """
    as_direction(y, metric.n)
    return ConnectionBundle(spray=np.zeros(metric.n), connection=np.zeros((metric.n, metric.n)))


@dataclass(frozen=True)
class CurvatureBundle:
    """All vertical curvature data at one point."""

    y: np.ndarray
    s_mixed: np.ndarray  # S^l_ijk, definitional assembly
    s_cov: np.ndarray  # S_imjk, product form
    ricci: np.ndarray
    scalar: float
    einstein: np.ndarray


def curvature_bundle(point: GeometryPoint) -> CurvatureBundle:
    """Assemble curvature, Ricci, scalar and Einstein tensors at a point.

    Both curvature routes are evaluated; ``s_mixed`` is the definitional
    assembly so that lowering it against ``s_cov`` stays a nontrivial internal
    consistency check.
    """
    s_mixed = vertical_curvature_mixed(point)
    s_cov = vertical_curvature_cov(point)
    ric = ricci_tensor(s_mixed)
    scal = scalar_curvature(ric, point.g_inv)
    return CurvatureBundle(
        y=point.y,
        s_mixed=s_mixed,
        s_cov=s_cov,
        ricci=ric,
        scalar=scal,
        einstein=einstein_tensor(ric, scal, point.g),
    )
