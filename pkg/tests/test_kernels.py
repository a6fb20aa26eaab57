import importlib

import numpy as np
import pytest

from mrootgeom import kernels
from mrootgeom import _kernels_py as fallback
from mrootgeom.metric import make_bg3, make_bg4

compiled = None
try:
    compiled = importlib.import_module("mrootgeom._speedups")
except ImportError:
    pass

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def _random_polynomial(rng, n, m, terms):
    exps = np.zeros((terms, n), dtype=np.int64)
    for t in range(terms):
        for _ in range(m):
            exps[t, rng.integers(n)] += 1
    return exps, rng.standard_normal(terms)


def test_backend_is_reported():
    assert kernels.BACKEND in ("compiled", "python")


def test_fallback_eval_matches_metric_terms():
    bg3 = make_bg3()
    y = np.array([3.0, 1.0, 1.0])
    assert fallback.poly_eval(bg3._exps, bg3._coeffs, y) == 9.0
    batch = fallback.poly_eval_batch(bg3._exps, bg3._coeffs, np.array([y, [1.0, 2.0, 3.0]]))
    assert np.array_equal(batch, [9.0, 0.0])


def test_fallback_derivative_zero_point():
    bg4 = make_bg4()
    t = fallback.poly_derivative_dense(bg4._exps, bg4._coeffs, np.zeros(4), 3)
    assert not t.any()  # degree-4 third derivatives are linear in y


@needs_compiled
def test_compiled_matches_fallback_on_builtins():
    rng = np.random.default_rng(5)
    for metric in (make_bg3(), make_bg4()):
        ys = rng.uniform(-4.0, 4.0, size=(64, metric.n))
        a = compiled.poly_eval_batch(metric._exps, metric._coeffs, ys)
        b = fallback.poly_eval_batch(metric._exps, metric._coeffs, ys)
        assert np.abs(a - b).max() <= 1e-12 * (1.0 + np.abs(b).max())
        for order in range(5):
            ta = compiled.poly_derivative_dense(metric._exps, metric._coeffs, ys[0], order)
            tb = fallback.poly_derivative_dense(metric._exps, metric._coeffs, ys[0], order)
            assert np.abs(np.asarray(ta) - np.asarray(tb)).max() <= 1e-12 * (
                1.0 + np.abs(tb).max()
            )


@needs_compiled
def test_compiled_matches_fallback_on_random_polynomials():
    rng = np.random.default_rng(17)
    for _ in range(20):
        n = int(rng.integers(2, 6))
        m = int(rng.integers(1, 5))
        exps, coeffs = _random_polynomial(rng, n, m, terms=int(rng.integers(1, 9)))
        y = rng.uniform(-2.0, 2.0, size=n)
        if rng.random() < 0.3:
            y[rng.integers(n)] = 0.0  # exercise zero components (0^0 paths)
        a = compiled.poly_eval(exps, coeffs, y)
        b = fallback.poly_eval(exps, coeffs, y)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-12)
        order = int(rng.integers(1, 5))
        ta = compiled.poly_derivative_dense(exps, coeffs, y, order)
        tb = fallback.poly_derivative_dense(exps, coeffs, y, order)
        assert np.abs(ta - tb).max() <= 1e-12 * (1.0 + np.abs(tb).max())


@needs_compiled
def test_compiled_handles_non_contiguous_inputs():
    bg3 = make_bg3()
    ys = np.asfortranarray(np.tile([3.0, 1.0, 1.0], (4, 1)))
    out = compiled.poly_eval_batch(bg3._exps, bg3._coeffs, ys)
    assert np.array_equal(out, np.full(4, 9.0))
