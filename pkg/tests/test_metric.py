import numpy as np
import pytest

from mrootgeom import (
    Classification,
    DegenerateForms,
    DimensionMismatch,
    LinearFormsMetric,
    PolynomialMetric,
    UnsupportedOrder,
    derivative_bundle,
    derivative_tensor,
    domain_status,
    evaluate,
    evaluate_batch,
    expand,
    make_bg3,
    make_bg4,
    make_product_metric,
)
from mrootgeom.metric import BG3_FORMS, BG4_FORMS
from mrootgeom.verify import REFERENCE_COEFFS


def test_bg3_coefficients_match_reference(bg3):
    assert bg3.terms == REFERENCE_COEFFS["bg3"]
    assert bg3.terms[(0, 0, 0)] == 1.0
    assert bg3.terms[(0, 1, 1)] == -1.0
    assert bg3.terms[(0, 1, 2)] == 2.0
    assert len(bg3.terms) == 10


def test_bg4_coefficients_match_reference(bg4):
    assert bg4.terms == REFERENCE_COEFFS["bg4"]
    assert bg4.terms[(0, 0, 0, 0)] == 1.0
    assert bg4.terms[(0, 0, 1, 1)] == -2.0
    assert bg4.terms[(0, 1, 2, 3)] == -8.0
    assert len(bg4.terms) == 11


@pytest.mark.parametrize(
    "y,expected",
    [((3, 1, 1), 9.0), ((1, 2, 3), 0.0), ((0, 0, 0), 0.0), ((1, 1, 1), -1.0)],
)
def test_bg3_point_values(bg3, y, expected):
    assert evaluate(bg3, y) == expected


@pytest.mark.parametrize("y,expected", [((4, 1, 1, 1), 125.0), ((1, 1, 1, 1), -16.0)])
def test_bg4_point_values(bg4, y, expected):
    assert evaluate(bg4, y) == expected


def test_product_metric_identity_is_coordinate_product():
    metric = make_product_metric(np.eye(3))
    assert expand(metric).terms == {(0, 1, 2): 1.0}
    assert metric.evaluate([2.0, 3.0, 5.0]) == 30.0


def test_product_metric_bg_rows_expand_to_builtins(bg3, bg4):
    assert expand(make_product_metric(BG3_FORMS)) == bg3
    assert expand(make_product_metric(BG4_FORMS)) == bg4


def test_product_metric_rejects_dependent_rows():
    with pytest.raises(DegenerateForms):
        make_product_metric([[1, 0, 0], [2, 0, 0], [0, 0, 1]])
    with pytest.raises(DegenerateForms):
        make_product_metric([[1, 0], [0, 1], [0, 0]])


def test_expansion_equals_factored_product(bg3, bg4):
    rng = np.random.default_rng(7)
    for metric, forms in ((bg3, BG3_FORMS), (bg4, BG4_FORMS)):
        pts = rng.uniform(-5.0, 5.0, size=(1000, metric.n))
        product = np.prod(pts @ forms.T, axis=1)
        expanded = evaluate_batch(metric, pts)
        scale = np.abs(product).max()
        assert np.abs(expanded - product).max() <= 1e-12 * scale


def test_homogeneity(bg3, bg4):
    rng = np.random.default_rng(11)
    for metric in (bg3, bg4):
        pts = rng.uniform(-5.0, 5.0, size=(50, metric.n))
        base = evaluate_batch(metric, pts)
        for lam in (0.5, 2.0, 10.0):
            scaled = evaluate_batch(metric, lam * pts)
            assert np.allclose(scaled, lam**metric.m * base, rtol=1e-12, atol=1e-300)


def test_euler_identities(bg3, bg3_points, bg4, bg4_points):
    for metric, points in ((bg3, bg3_points), (bg4, bg4_points)):
        m = metric.m
        for y in points[:25]:
            b = derivative_bundle(metric, y)
            assert b.a1 @ y == pytest.approx(m * b.a0, rel=1e-10)
            assert np.allclose(b.a2 @ y, (m - 1) * b.a1, rtol=1e-10, atol=1e-12)
            assert np.allclose(
                np.einsum("jkm,m->jk", b.a3, y), (m - 2) * b.a2, rtol=1e-10, atol=1e-12
            )
            assert np.allclose(
                np.einsum("ijkl,l->ijk", b.a4, y), (m - 3) * b.a3, rtol=1e-10, atol=1e-12
            )


def test_bg3_first_derivative_at_311(bg3):
    assert np.array_equal(derivative_tensor(bg3, [3, 1, 1], 1), [15.0, -9.0, -9.0])


def test_bg3_third_derivative_is_constant(bg3):
    expected = np.empty((3, 3, 3))
    for j in range(3):
        for k in range(3):
            for m in range(3):
                if j == k == m:
                    expected[j, k, m] = 6.0
                elif j != k and k != m and m != j:
                    expected[j, k, m] = 2.0
                else:
                    expected[j, k, m] = -2.0
    for y in ([3.0, 1.0, 1.0], [-2.0, 0.4, 7.0]):
        assert np.array_equal(derivative_tensor(bg3, y, 3), expected)


def test_bg3_fourth_derivative_vanishes(bg3):
    assert not derivative_tensor(bg3, [3.0, 1.0, 1.0], 4).any()


def test_bg4_third_derivative_entries(bg4):
    y = np.array([4.0, 1.5, -0.5, 2.0])
    a3 = derivative_tensor(bg4, y, 3)
    assert a3[0, 0, 0] == pytest.approx(24 * y[0])
    assert a3[0, 1, 0] == pytest.approx(-8 * y[1])
    assert a3[1, 2, 0] == pytest.approx(-8 * y[3])
    assert a3[2, 2, 0] == pytest.approx(-8 * y[0])


def test_bg4_fourth_derivative_constant_in_y(bg4):
    a = derivative_tensor(bg4, [4.0, 1.0, 1.0, 1.0], 4)
    b = derivative_tensor(bg4, [-1.0, 2.5, 0.0, 3.0], 4)
    assert np.array_equal(a, b)
    assert a[0, 0, 0, 0] == 24.0
    assert a[0, 0, 1, 1] == -8.0
    assert a[0, 1, 2, 3] == -8.0
    assert a[0, 0, 0, 1] == 0.0


def test_derivative_order_cap(bg3):
    with pytest.raises(UnsupportedOrder):
        derivative_tensor(bg3, [3.0, 1.0, 1.0], 5)


def test_dimension_checks(bg3):
    with pytest.raises(DimensionMismatch):
        evaluate(bg3, [1.0, 2.0])
    with pytest.raises(DimensionMismatch):
        evaluate(bg3, [1.0, 2.0, np.nan])
    with pytest.raises(DimensionMismatch):
        evaluate_batch(bg3, np.ones((4, 2)))


def test_polynomial_validation():
    with pytest.raises(ValueError):
        PolynomialMetric(3, 3, {(1, 0, 2): 1.0})  # unsorted
    with pytest.raises(ValueError):
        PolynomialMetric(3, 3, {(0, 1): 1.0})  # wrong length
    with pytest.raises(ValueError):
        PolynomialMetric(3, 3, {(0, 1, 5): 1.0})  # out of range
    # zero coefficients are dropped from the canonical form
    assert PolynomialMetric(3, 3, {(0, 0, 0): 1.0, (0, 1, 2): 0.0}).terms == {(0, 0, 0): 1.0}


def test_domain_status_classifications(bg3, bg4):
    assert domain_status(bg3, [1, 2, 3]).classification is Classification.DEGENERATE
    assert domain_status(bg4, [1, 1, 1, 1]).classification is Classification.OUT_OF_DOMAIN
    assert domain_status(bg4, [4, 1, 1, 1]).classification is Classification.REGULAR
    assert domain_status(bg3, [3, 1, 1]).classification is Classification.REGULAR
    # negative branch is fine for an odd root order
    assert domain_status(bg3, [1, 1, 1]).classification is Classification.REGULAR


def test_domain_status_near_degenerate_band(bg3):
    # A(1, 2, 3 + t) ~ 8t: pick t inside (eps, 1e3 eps]
    y = [1.0, 2.0, 3.0 + 1e-9]
    status = domain_status(bg3, y)
    assert status.classification is Classification.NEAR_DEGENERATE
    assert status.is_regular  # usable, but flagged


def test_helper_scalars():
    assert PolynomialMetric.power_sum([1.0, 2.0, 3.0], 2) == 14.0
    assert PolynomialMetric.coordinate_product([1.0, 2.0, 3.0]) == 6.0


def test_linear_forms_factors():
    metric = LinearFormsMetric(3, BG3_FORMS)
    assert np.array_equal(metric.factors([3.0, 1.0, 1.0]), [1.0, 3.0, 3.0])


def test_linear_forms_equality_and_immutability():
    a = LinearFormsMetric(3, BG3_FORMS)
    b = LinearFormsMetric(3, BG3_FORMS)
    assert a == b and hash(a) == hash(b)
    assert a != LinearFormsMetric(3, np.eye(3))
    with pytest.raises(ValueError):
        a.forms[0, 0] = 7.0
