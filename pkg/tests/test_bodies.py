import json

import numpy as np
import pytest

from funkbalance import (
    BodySpecError,
    InteriorViolationError,
    RadialBody2D,
    SuperellipsoidBody,
    ball,
    body_from_dict,
    ellipsoid,
    load_body,
    minkowski,
    minkowski_gradient,
    minkowski_hessian,
    randers,
    translate,
    validate,
)
from funkbalance.reference import OracleConfig, finite_difference

from conftest import interior_points


def sample_bodies():
    return [
        ball(2),
        ball(3, radius=1.5, center=[0.2, -0.1, 0.0]),
        ellipsoid(axes=[2.0, 1.0]),
        ellipsoid(axes=[2.0, 1.0, 0.5]),
        randers(np.eye(2), [0.0, 0.3]),
        RadialBody2D(1.0, [0.0, 0.1]),
        SuperellipsoidBody([1.0, 1.5], 4),
    ]


def test_ball_gauge_is_euclidean_norm():
    assert minkowski(ball(2), [3.0, 4.0]) == pytest.approx(5.0, abs=1e-15)


def test_ellipsoid_boundary_point():
    assert minkowski(ellipsoid(axes=[2.0, 1.0]), [2.0, 0.0]) == pytest.approx(1.0, abs=1e-15)


def test_gauge_positive_homogeneity():
    v = np.array([0.3, -0.7])
    for body in sample_bodies():
        vv = np.zeros(body.dimension)
        vv[:2] = v
        base = float(minkowski(body, vv))
        for t in (0.5, 2.0, 7.0):
            assert abs(float(minkowski(body, t * vv)) - t * base) <= 1e-12 * t * base


def test_euler_relation_and_radial_hessian_kernel():
    rng = np.random.default_rng(7)
    for body in sample_bodies():
        for _ in range(5):
            v = rng.standard_normal(body.dimension)
            gauge = float(minkowski(body, v))
            grad = minkowski_gradient(body, v)
            hess = minkowski_hessian(body, v)
            assert abs(float(v @ grad) - gauge) <= 1e-10 * gauge
            scale = np.max(np.abs(hess)) * np.linalg.norm(v) + 1e-30
            assert np.max(np.abs(hess @ v)) <= 1e-8 * scale


def test_unit_ball_gradient_and_hessian():
    body = ball(2)
    np.testing.assert_allclose(minkowski_gradient(body, [0.0, 1.0]), [0.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(
        minkowski_hessian(body, [0.0, 1.0]), np.diag([1.0, 0.0]), atol=1e-15
    )


def test_ellipsoid_gradient_closed_form_and_fd():
    matrix = np.array([[0.5, 0.1], [0.1, 1.2]])
    body = ellipsoid(matrix=matrix)
    v = np.array([0.8, -0.5])
    expected = matrix @ v / np.sqrt(v @ matrix @ v)
    np.testing.assert_allclose(minkowski_gradient(body, v), expected, rtol=1e-13)
    cfg = OracleConfig(fd_step=1e-6)
    fd_grad, _ = finite_difference(lambda x: float(minkowski(body, x)), v, order=1, cfg=cfg)
    np.testing.assert_allclose(minkowski_gradient(body, v), fd_grad, rtol=1e-7)


@pytest.mark.parametrize("index", range(7))
def test_gradient_and_hessian_match_finite_differences(index):
    body = sample_bodies()[index]
    rng = np.random.default_rng(20 + index)
    v = rng.standard_normal(body.dimension)
    v /= np.linalg.norm(v)
    cfg = OracleConfig(fd_step=1e-5)
    fd_grad, _ = finite_difference(lambda x: float(minkowski(body, x)), v, order=1, cfg=cfg)
    np.testing.assert_allclose(minkowski_gradient(body, v), fd_grad, rtol=1e-6, atol=1e-9)
    cfg2 = OracleConfig(fd_step=1e-3)
    fd_hess, _ = finite_difference(lambda x: float(minkowski(body, x)), v, order=2, cfg=cfg2)
    np.testing.assert_allclose(minkowski_hessian(body, v), fd_hess, rtol=1e-5, atol=1e-7)


@pytest.mark.parametrize("index", [0, 2, 4, 5, 6])
def test_third_derivative_matches_fd_of_hessian(index):
    body = sample_bodies()[index]
    rng = np.random.default_rng(40 + index)
    v = rng.standard_normal(body.dimension)
    v /= np.linalg.norm(v)
    n = body.dimension
    h = 1e-5
    fd = np.zeros((n, n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        fd[:, :, k] = (minkowski_hessian(body, v + e) - minkowski_hessian(body, v - e)) / (2 * h)
    np.testing.assert_allclose(body.third_derivative(v), fd, rtol=1e-5, atol=1e-6)


def test_translated_ball_axis_values():
    body = ball(2)
    s = 0.3
    shifted = translate(body, [s, 0.0])
    assert float(minkowski(shifted, [1.0, 0.0])) == pytest.approx(1.0 / (1.0 - s), rel=1e-13)
    assert float(minkowski(shifted, [-1.0, 0.0])) == pytest.approx(1.0 / (1.0 + s), rel=1e-13)


def test_translated_ball_matches_randers_closed_form():
    # Shifting the origin of the unit disk produces the known Randers norm
    # with quadratic part (|v|^2 (1-|p|^2) + <v,p>^2) / (1-|p|^2)^2.
    body = ball(2)
    p = np.array([0.4, 0.0])
    shifted = translate(body, p)
    rng = np.random.default_rng(3)
    for _ in range(10):
        v = rng.standard_normal(2)
        denom = 1.0 - p @ p
        expected = (np.sqrt((v @ v) * denom + (v @ p) ** 2) + v @ p) / denom
        assert float(minkowski(shifted, v)) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("maker", [
    lambda: ellipsoid(axes=[2.0, 1.0]),
    lambda: RadialBody2D(1.0, [0.0, 0.1]),
    lambda: SuperellipsoidBody([1.0, 1.2], 4),
])
def test_translate_composition(maker):
    body = maker()
    c1 = np.array([0.15, -0.1])
    c2 = np.array([-0.05, 0.12])
    nested = translate(translate(body, c1), c2)
    joined = translate(body, c1 + c2)
    rng = np.random.default_rng(11)
    for _ in range(8):
        v = rng.standard_normal(2)
        a = float(minkowski(nested, v))
        b = float(minkowski(joined, v))
        assert abs(a - b) <= 1e-10 * abs(b)


def test_translate_rejects_non_interior_points():
    body = ball(2)
    with pytest.raises(InteriorViolationError):
        translate(body, [1.0, 0.0])
    with pytest.raises(InteriorViolationError):
        translate(body, [1.0 - 1e-8, 0.0])


def test_zero_vector_is_rejected():
    body = ball(2)
    with pytest.raises(ValueError):
        minkowski(body, [0.0, 0.0])
    with pytest.raises(ValueError):
        minkowski_gradient(body, [0.0, 0.0])
    with pytest.raises(ValueError):
        minkowski(body, np.array([[1.0, 0.0], [0.0, 0.0]]))


def test_construction_errors():
    with pytest.raises(ValueError):
        ellipsoid(matrix=[[1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(ValueError):
        ellipsoid(matrix=[[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(ValueError):
        randers(np.eye(2), [1.0, 0.0])
    with pytest.raises(ValueError):
        SuperellipsoidBody([1.0, 1.0], 3)
    with pytest.raises(ValueError):
        SuperellipsoidBody([1.0, 1.0], 10)
    with pytest.raises(ValueError):
        RadialBody2D(1.0, [0.0, 0.0, 1.5])  # radius crosses zero
    with pytest.raises(ValueError):
        ball(2, radius=-1.0)
    with pytest.raises(ValueError):
        ellipsoid(axes=[2.0, 1.0], matrix=np.eye(2))


def test_validate_reports(rule2, randers_body):
    report = validate(ball(2), rule2)
    assert report.is_strongly_convex
    assert report.min_metric_eigenvalue == pytest.approx(1.0, abs=1e-12)

    # positive radius but non-convex: the metric goes indefinite
    star = RadialBody2D(1.0, [0.0, 0.0, 0.5])
    report = validate(star, rule2)
    assert not report.is_strongly_convex
    assert report.min_metric_eigenvalue < 0.0

    report = validate(randers_body, rule2)
    assert report.is_strongly_convex
    assert report.margin > 0.0


def test_validate_dimension_mismatch(rule3):
    with pytest.raises(ValueError):
        validate(ball(2), rule3)


def test_translations_preserve_interior_points():
    body = randers(np.eye(2), [0.0, 0.3])
    for p in interior_points(body, 4, seed=5, max_gauge=0.6):
        shifted = translate(body, p)
        # the new origin is interior: boundary in every direction is positive
        for v in np.eye(2):
            assert float(minkowski(shifted, v)) > 0.0


def test_body_from_dict_round_trip(tmp_path):
    spec = {"dimension": 2, "kind": "randers", "matrix": [[1.0, 0.0], [0.0, 1.0]],
            "beta": [0.0, 0.3]}
    body = body_from_dict(spec)
    assert body.kind == "randers"
    path = tmp_path / "body.json"
    path.write_text(json.dumps(spec))
    loaded = load_body(path)
    v = np.array([0.3, -0.8])
    assert float(minkowski(loaded, v)) == pytest.approx(float(minkowski(body, v)), rel=1e-15)


def test_body_from_dict_rejects_unknown_keys():
    with pytest.raises(BodySpecError):
        body_from_dict({"dimension": 2, "kind": "ball", "radius": 2.0})
    with pytest.raises(BodySpecError):
        body_from_dict({"dimension": 2, "kind": "sphere"})
    with pytest.raises(BodySpecError):
        body_from_dict({"kind": "ball"})
    with pytest.raises(BodySpecError):
        body_from_dict({"dimension": 5, "kind": "ball"})
    with pytest.raises(BodySpecError):
        body_from_dict({"dimension": 2, "kind": "ellipsoid", "axes": [2, 1],
                        "matrix": [[1, 0], [0, 1]]})
    with pytest.raises(BodySpecError):
        body_from_dict({"dimension": 2, "kind": "radial2d",
                        "fourier": {"a0": 1.0, "c": [1.0]}})
    with pytest.raises(BodySpecError):
        body_from_dict({"dimension": 3, "kind": "radial2d", "fourier": {"a0": 1.0}})


def test_load_body_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(BodySpecError):
        load_body(path)
