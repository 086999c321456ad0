"""The area function of a body's Funk metric and its exact derivatives.

Moving the origin of a convex body ``K`` to an interior point ``p`` yields
the translated gauge ``L_p`` (the Funk metric of ``K``).  The area function

    r(p) = induced measure of the boundary of K - p

is strictly convex, blows up at the boundary of ``K``, and has derivatives
of every order given by moments of the translated gauge's gradient: the
pure derivative of multi-index ``alpha`` equals

    c_|alpha| * integral over boundary(K - p) of prod_k (dF/dy_k)**alpha_k

with the combinatorial factor ``cm_coefficient``.  The same function can be
evaluated without translating at all: the boundary of ``K - p`` is
conformal to the boundary of ``K``, giving the projected form

    r(p) = integral over boundary(K) of (1 - p . grad L)**(-(n-1)/2).

Both routes are exposed and must agree; the projected one is cheap in ``p``
and is what the Taylor expansion of ``r`` truncates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bodies import DEFAULT_MARGIN
from .errors import InteriorViolationError
from .metric import half_logdet_checked, metric_batch
from .quadrature import fsum_reduce

MAX_DERIVATIVE_ORDER = 8
TAYLOR_GUARD_DELTA = 1e-3


class FunkContext:
    """A body together with an interior base point.

    Construction translates the body once (``translated`` has the base
    point as its origin) and enforces the interior margin; everything else
    in this module works off the pair.
    """

    def __init__(self, body, point, margin=DEFAULT_MARGIN):
        point = np.asarray(point, dtype=float).reshape(body.dimension)
        self.body = body
        self.point = point
        self.margin = margin
        self.translated = body.translate(point, margin=margin)

    @property
    def dimension(self):
        return self.body.dimension


def funk_norm(ctx, v):
    """Translated gauge L_p(v) of the context's body at its base point."""
    return ctx.translated.minkowski(v)


def funk_gradient(ctx, v):
    """Fiber gradient of the translated gauge."""
    return ctx.translated.gradient(v)


def conformal_factor(ctx, v):
    """Ratio between the body metric at the projected boundary point and
    the translated metric at v; equals 1 - p . grad L at the projection.

    Always lies in (1 - L(p), 1 + L(-p)), hence is positive for interior
    base points.
    """
    v = np.asarray(v, dtype=float)
    gauge = ctx.translated.minkowski(v)
    boundary = ctx.point + v / np.asarray(gauge)[..., None]
    return 1.0 - ctx.body.gradient(boundary) @ ctx.point


@dataclass(frozen=True)
class _BoundarySamples:
    """Per-node data of one body on a sphere rule: measure density times
    rule weight, plus gauge, gradient and fundamental tensor."""

    density: np.ndarray
    gauge: np.ndarray
    grad: np.ndarray
    g: np.ndarray


def _boundary_samples(body, rule):
    if rule.dimension != body.dimension:
        raise ValueError("rule dimension does not match body dimension")
    gauge, grad, g = metric_batch(body, rule.nodes)
    half_logdet = half_logdet_checked(rule.nodes, g, body.dimension)
    weight = np.exp(half_logdet - body.dimension * np.log(gauge))
    return _BoundarySamples(density=rule.weights * weight, gauge=gauge, grad=grad, g=g)


def projected_area_function(body, rule):
    """Closure p -> r(p) over fixed boundary samples of the body.

    All base points share the same nodes, so scans and line searches reuse
    one metric sweep.
    """
    samples = _boundary_samples(body, rule)
    exponent = -(body.dimension - 1) / 2.0
    density = samples.density
    grad = samples.grad

    def area_at(p):
        p = np.asarray(p, dtype=float).reshape(body.dimension)
        tilt = 1.0 - grad @ p
        return fsum_reduce(density * tilt**exponent)

    return area_at


def area(ctx, rule, method="projected"):
    """Area function r at the context's base point.

    ``projected`` integrates the tilt factor over the body's own boundary;
    ``direct`` integrates the unit field over the translated body's
    boundary.  The two agree up to quadrature accuracy.
    """
    if method == "projected":
        return projected_area_function(ctx.body, rule)(ctx.point)
    if method == "direct":
        samples = _boundary_samples(ctx.translated, rule)
        return fsum_reduce(samples.density)
    raise ValueError(f"method must be 'projected' or 'direct', got {method!r}")


def cm_coefficient(n, m):
    """Moment coefficient of the order-m derivative of the area function.

    c_0 = 1 and c_{m+1} = c_m * ((n - 1) + 2 m) / 2; these are the Taylor
    coefficients of (1 - x)**(-(n-1)/2) scaled by m factorial.
    """
    if m < 0:
        raise ValueError("derivative order must be nonnegative")
    c = 1.0
    for j in range(m):
        c *= ((n - 1) + 2 * j) / 2.0
    return c


def _moment(samples, alpha):
    values = samples.density
    for k, power in enumerate(alpha):
        if power:
            values = values * samples.grad[:, k] ** power
    return fsum_reduce(values)


def _check_alpha(alpha, n):
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != n or any(a < 0 for a in alpha):
        raise ValueError(f"multi-index must be {n} nonnegative integers, got {alpha}")
    return alpha


def area_derivative(ctx, rule, alpha):
    """Pure partial derivative of r at the base point, multi-index alpha.

    Orders beyond MAX_DERIVATIVE_ORDER are refused (cost cap); Taylor
    models enumerate coefficients internally without the cap.
    """
    alpha = _check_alpha(alpha, ctx.dimension)
    order = sum(alpha)
    if order > MAX_DERIVATIVE_ORDER:
        raise ValueError(
            f"derivative order {order} exceeds the cap {MAX_DERIVATIVE_ORDER}"
        )
    samples = _boundary_samples(ctx.translated, rule)
    return cm_coefficient(ctx.dimension, order) * _moment(samples, alpha)


def area_gradient(ctx, rule):
    """Gradient of r at the base point: ((n-1)/2) times the gradient moment."""
    samples = _boundary_samples(ctx.translated, rule)
    return _gradient_from_samples(samples, ctx.dimension)


def area_hessian(ctx, rule):
    """Hessian of r at the base point; positive definite (r is strictly convex)."""
    samples = _boundary_samples(ctx.translated, rule)
    return _hessian_from_samples(samples, ctx.dimension)


def _gradient_from_samples(samples, n):
    c1 = cm_coefficient(n, 1)
    return c1 * fsum_reduce(samples.density[:, None] * samples.grad)


def _hessian_from_samples(samples, n):
    c2 = cm_coefficient(n, 2)
    outer = np.einsum("ki,kj->kij", samples.grad, samples.grad)
    return c2 * fsum_reduce(samples.density[:, None, None] * outer)


def area_value_gradient_hessian(ctx, rule):
    """r, grad r, and Hess r from a single boundary sweep of the translated
    body (the direct-route value)."""
    samples = _boundary_samples(ctx.translated, rule)
    value = fsum_reduce(samples.density)
    return (
        value,
        _gradient_from_samples(samples, ctx.dimension),
        _hessian_from_samples(samples, ctx.dimension),
    )


def multi_indices(n, max_order):
    """All multi-indices of length n with total order <= max_order, graded
    lexicographic."""
    def compositions(total, slots):
        if slots == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in compositions(total - first, slots - 1):
                yield (first,) + rest

    out = []
    for order in range(max_order + 1):
        out.extend(sorted(compositions(order, n)))
    return out


@dataclass(frozen=True)
class TaylorModel:
    """Truncated power series of the area function around a center.

    ``coefficients`` maps each multi-index alpha (|alpha| <= order) to the
    series coefficient, i.e. the pure derivative divided by alpha
    factorial.  Evaluation is guarded: the shifted argument must stay well
    inside both the centered body and its reflection, otherwise the series
    is not known to converge and evaluation is refused.
    """

    center: np.ndarray
    order: int
    coefficients: dict
    gauge_body: object
    guard_delta: float


def taylor_build(body, center, order, rule, margin=DEFAULT_MARGIN,
                 guard_delta=TAYLOR_GUARD_DELTA):
    """Expand the area function around an interior center up to ``order``."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    ctx = FunkContext(body, center, margin=margin)
    samples = _boundary_samples(ctx.translated, rule)
    n = body.dimension
    powers = [
        np.vander(samples.grad[:, k], order + 1, increasing=True).T
        for k in range(n)
    ]
    coefficients = {}
    for alpha in multi_indices(n, order):
        m = sum(alpha)
        values = samples.density
        for k, power in enumerate(alpha):
            if power:
                values = values * powers[k][power]
        weight = cm_coefficient(n, m)
        for a in alpha:
            weight /= math.factorial(a)
        coefficients[alpha] = weight * fsum_reduce(values)
    return TaylorModel(
        center=ctx.point.copy(),
        order=order,
        coefficients=coefficients,
        gauge_body=ctx.translated,
        guard_delta=guard_delta,
    )


def taylor_eval(model, p):
    """Evaluate the truncated series at p, refusing points outside the
    guarded convergence region."""
    p = np.asarray(p, dtype=float).reshape(model.center.shape)
    q = p - model.center
    if np.any(q != 0.0):
        limit = 1.0 - model.guard_delta
        forward = float(model.gauge_body.minkowski(q))
        backward = float(model.gauge_body.minkowski(-q))
        if forward >= limit or backward >= limit:
            raise InteriorViolationError(
                f"shifted point has gauges ({forward:.6g}, {backward:.6g}); "
                f"the series is only evaluated where both are below {limit:g}"
            )
    terms = []
    for alpha, coeff in model.coefficients.items():
        monomial = 1.0
        for qk, a in zip(q, alpha):
            if a:
                monomial *= qk**a
        terms.append(coeff * monomial)
    return math.fsum(terms)


@dataclass(frozen=True)
class AveragedMetrics:
    """Boundary averages of the translated body's metric data.

    gamma1, gamma2, gamma3 integrate the fundamental tensor, the angular
    metric, and the gradient outer product; gamma1 - gamma2 == gamma3.
    ``beta`` is the averaged gradient covector and ``area`` the plain
    boundary measure.
    """

    gamma1: np.ndarray
    gamma2: np.ndarray
    gamma3: np.ndarray
    area: float
    beta: np.ndarray


def averaged_metrics(ctx, rule):
    """All boundary averages of the translated body in one sweep."""
    samples = _boundary_samples(ctx.translated, rule)
    d = samples.density
    grad_outer = np.einsum("ki,kj->kij", samples.grad, samples.grad)
    gamma1 = fsum_reduce(d[:, None, None] * samples.g)
    gamma3 = fsum_reduce(d[:, None, None] * grad_outer)
    gamma2 = fsum_reduce(d[:, None, None] * (samples.g - grad_outer))
    return AveragedMetrics(
        gamma1=gamma1,
        gamma2=gamma2,
        gamma3=gamma3,
        area=fsum_reduce(d),
        beta=fsum_reduce(d[:, None] * samples.grad),
    )


def associated_randers(ctx, rule, which="F3"):
    """Randers-type norm built from the averaged metrics.

    ``which`` picks gamma1 or gamma3 as the quadratic part; the linear part
    is the averaged gradient, both normalized by the boundary area.
    Returns a vectorized evaluator v -> sqrt(Gamma(v, v)) + beta(v) / area.
    """
    if which not in ("F1", "F3"):
        raise ValueError(f"which must be 'F1' or 'F3', got {which!r}")
    averages = averaged_metrics(ctx, rule)
    quadratic = (averages.gamma1 if which == "F1" else averages.gamma3) / averages.area
    linear = averages.beta / averages.area

    def functional(v):
        v = np.asarray(v, dtype=float)
        square = np.einsum("...i,ij,...j->...", v, quadratic, v)
        return np.sqrt(square) + v @ linear

    return functional
