"""Smooth convex bodies and their gauge (Minkowski) functionals.

A body is a compact convex set containing the origin in its interior.  Its
gauge ``L`` assigns to every nonzero vector ``v`` the unique ``t > 0`` with
``v / t`` on the boundary, so ``L`` is positively 1-homogeneous and the
boundary is the level set ``L == 1``.  Every body here is a closed-form
family with analytic first and second (usually third) fiber derivatives:

* ``QuadraticBody`` -- balls and ellipsoids, possibly off-center.  The gauge
  of an off-center ellipsoid is a Randers norm ``sqrt(v' A v) + b . v``, and
  conversely a Randers unit ball is an off-center ellipsoid, so the whole
  family is closed under translation.
* ``RadialBody2D`` -- planar bodies given by a trigonometric polynomial
  radius ``rho(theta)``.
* ``SuperellipsoidBody`` -- ``sum |v_i / a_i|^(2m) == 1`` with even exponent.

Translating a non-quadratic body moves the origin inside it; the shifted
gauge has no closed form and is evaluated by ``TranslatedBody`` through a
bracketed Newton solve on each ray (see ``translate``).

All evaluation methods broadcast: ``v`` may be a single n-vector or any
array of shape ``(..., n)``.  Bodies are immutable and safe to share across
threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BodySpecError, InteriorViolationError

DEFAULT_MARGIN = 1e-6

_GAUGE_ROOT_RTOL = 1e-13
_GAUGE_ROOT_MAXITER = 200


def _as_directions(v, dimension):
    """Coerce to float array of shape (..., dimension), rejecting zero rays."""
    v = np.asarray(v, dtype=float)
    if v.ndim == 0 or v.shape[-1] != dimension:
        raise ValueError(f"expected vectors of dimension {dimension}, got shape {v.shape}")
    if np.any(np.einsum("...i,...i->...", v, v) == 0.0):
        raise ValueError("gauge functions are undefined at the zero vector")
    return v


def _check_spd(matrix, name="matrix"):
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"{name} must be square, got shape {matrix.shape}")
    if not np.allclose(matrix, matrix.T, rtol=1e-12, atol=1e-12):
        raise ValueError(f"{name} must be symmetric")
    try:
        np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError:
        raise ValueError(f"{name} must be positive definite") from None
    return 0.5 * (matrix + matrix.T)


class ConvexBody:
    """Base class: a convex body with an analytically differentiable gauge."""

    dimension: int
    kind: str
    derivative_order: int

    def minkowski(self, v):
        """Gauge value L(v): the positive scalar with v / L(v) on the boundary."""
        raise NotImplementedError

    def gradient(self, v):
        """First fiber derivative of L; 0-homogeneous, shape (..., n)."""
        raise NotImplementedError

    def hessian(self, v):
        """Second fiber derivative of L; (-1)-homogeneous, shape (..., n, n)."""
        raise NotImplementedError

    def third_derivative(self, v):
        """Third fiber derivative of L, shape (..., n, n, n); optional."""
        raise NotImplementedError(f"{self.kind} body does not supply third derivatives")

    def translate(self, c, margin=DEFAULT_MARGIN):
        """Body shifted so that interior point c becomes the new origin (K - c)."""
        raise NotImplementedError

    def _require_interior(self, c, margin):
        c = np.asarray(c, dtype=float).reshape(self.dimension)
        if np.any(c != 0.0):
            gauge = float(self.minkowski(c))
            if gauge >= 1.0 - margin:
                raise InteriorViolationError(
                    f"point with gauge {gauge:.6g} is not interior (margin {margin:g})"
                )
        return c


class QuadraticBody(ConvexBody):
    """Ellipsoid ``(x - z)' M (x - z) <= 1`` containing the origin.

    The gauge is the Randers norm ``sqrt(v' A v) + b . v`` with

        A = ((M z)(M z)' + D M) / D**2,   b = -M z / D,   D = 1 - z' M z,

    which collapses to ``sqrt(v' M v)`` for a centered body.  Covers the
    kinds ``ball``, ``ellipsoid`` and ``randers`` (a Randers unit ball is
    exactly such an off-center ellipsoid).
    """

    derivative_order = 3

    def __init__(self, matrix, center=None, kind="ellipsoid"):
        matrix = _check_spd(matrix)
        n = matrix.shape[0]
        if n < 2:
            raise ValueError("dimension must be at least 2")
        if center is None:
            center = np.zeros(n)
        center = np.asarray(center, dtype=float).reshape(n)
        depth = 1.0 - float(center @ matrix @ center)
        if depth <= 0.0:
            raise ValueError("the origin must lie strictly inside the body")
        self.dimension = n
        self.kind = kind
        self.matrix = matrix
        self.center = center
        mz = matrix @ center
        self._norm_matrix = (np.outer(mz, mz) + depth * matrix) / depth**2
        self._norm_linear = -mz / depth

    def _alpha_parts(self, v):
        av = v @ self._norm_matrix
        q = np.einsum("...i,...i->...", v, av)
        return av, np.sqrt(q)

    def minkowski(self, v):
        v = _as_directions(v, self.dimension)
        _, alpha = self._alpha_parts(v)
        return alpha + v @ self._norm_linear

    def gradient(self, v):
        v = _as_directions(v, self.dimension)
        av, alpha = self._alpha_parts(v)
        return av / alpha[..., None] + self._norm_linear

    def hessian(self, v):
        v = _as_directions(v, self.dimension)
        av, alpha = self._alpha_parts(v)
        outer = np.einsum("...i,...j->...ij", av, av)
        return self._norm_matrix / alpha[..., None, None] - outer / alpha[..., None, None] ** 3

    def third_derivative(self, v):
        v = _as_directions(v, self.dimension)
        av, alpha = self._alpha_parts(v)
        a3 = alpha[..., None, None, None] ** 3
        a5 = alpha[..., None, None, None] ** 5
        m = self._norm_matrix
        t = np.einsum("ij,...k->...ijk", m, av)
        t = t + np.einsum("ik,...j->...ijk", m, av)
        t = t + np.einsum("jk,...i->...ijk", m, av)
        cubic = np.einsum("...i,...j,...k->...ijk", av, av, av)
        return 3.0 * cubic / a5 - t / a3

    def translate(self, c, margin=DEFAULT_MARGIN):
        c = self._require_interior(c, margin)
        return QuadraticBody(self.matrix, self.center - c, kind=self.kind)


class RadialBody2D(ConvexBody):
    """Planar body with polar-coordinate boundary radius rho(theta).

    rho is the trigonometric polynomial a0 + sum_k (a_k cos k theta
    + b_k sin k theta); the gauge is L(v) = |v| / rho(theta(v)).  The
    radius must stay positive; strong convexity is not checked here (run
    ``validate`` with a sphere rule to probe the metric tensor).
    """

    dimension = 2
    kind = "radial2d"
    derivative_order = 3

    def __init__(self, a0, cos_coeffs=(), sin_coeffs=()):
        self.a0 = float(a0)
        self.cos_coeffs = np.asarray(cos_coeffs, dtype=float)
        self.sin_coeffs = np.asarray(sin_coeffs, dtype=float)
        kmax = max(len(self.cos_coeffs), len(self.sin_coeffs))
        self._ka = np.arange(1, len(self.cos_coeffs) + 1)
        self._kb = np.arange(1, len(self.sin_coeffs) + 1)
        theta = np.linspace(0.0, 2.0 * np.pi, 512 * max(1, kmax), endpoint=False)
        if np.min(self._rho(theta, 0)) <= 0.0:
            raise ValueError("boundary radius rho(theta) must be positive")

    def _rho(self, theta, order):
        """order-th derivative of rho at theta (vectorized)."""
        theta = np.asarray(theta, dtype=float)
        ka = self._ka
        kb = self._kb
        arg_a = np.multiply.outer(theta, ka)
        arg_b = np.multiply.outer(theta, kb)
        phase = order % 4
        if phase == 0:
            ca, sb = np.cos(arg_a), np.sin(arg_b)
        elif phase == 1:
            ca, sb = -np.sin(arg_a), np.cos(arg_b)
        elif phase == 2:
            ca, sb = -np.cos(arg_a), -np.sin(arg_b)
        else:
            ca, sb = np.sin(arg_a), -np.cos(arg_b)
        out = np.zeros(theta.shape)
        if len(ka):
            out = out + ca @ (self.cos_coeffs * ka.astype(float) ** order)
        if len(kb):
            out = out + sb @ (self.sin_coeffs * kb.astype(float) ** order)
        if order == 0:
            out = out + self.a0
        return out

    def _frame(self, v):
        r = np.hypot(v[..., 0], v[..., 1])
        theta = np.arctan2(v[..., 1], v[..., 0])
        e_r = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        e_t = np.stack([-np.sin(theta), np.cos(theta)], axis=-1)
        return r, theta, e_r, e_t

    def _inverse_radius(self, theta, upto):
        """1/rho and its theta-derivatives up to the requested order."""
        rho = self._rho(theta, 0)
        u = [1.0 / rho]
        if upto >= 1:
            d1 = self._rho(theta, 1)
            u.append(-d1 / rho**2)
        if upto >= 2:
            d2 = self._rho(theta, 2)
            u.append(-d2 / rho**2 + 2.0 * d1**2 / rho**3)
        if upto >= 3:
            d3 = self._rho(theta, 3)
            u.append(-d3 / rho**2 + 6.0 * d1 * d2 / rho**3 - 6.0 * d1**3 / rho**4)
        return u

    def minkowski(self, v):
        v = _as_directions(v, 2)
        r, theta, _, _ = self._frame(v)
        return r * self._inverse_radius(theta, 0)[0]

    def gradient(self, v):
        v = _as_directions(v, 2)
        _, theta, e_r, e_t = self._frame(v)
        u, du = self._inverse_radius(theta, 1)
        return u[..., None] * e_r + du[..., None] * e_t

    def hessian(self, v):
        v = _as_directions(v, 2)
        r, theta, _, e_t = self._frame(v)
        u, _, d2u = self._inverse_radius(theta, 2)
        curv = (u + d2u) / r
        return curv[..., None, None] * np.einsum("...i,...j->...ij", e_t, e_t)

    def third_derivative(self, v):
        v = _as_directions(v, 2)
        r, theta, e_r, e_t = self._frame(v)
        u, du, d2u, d3u = self._inverse_radius(theta, 3)
        curv = u + d2u
        dcurv = du + d3u
        ttt = np.einsum("...i,...j,...k->...ijk", e_t, e_t, e_t)
        mixed = np.einsum("...i,...j,...k->...ijk", e_r, e_t, e_t)
        mixed = mixed + np.einsum("...i,...j,...k->...ijk", e_t, e_r, e_t)
        mixed = mixed + np.einsum("...i,...j,...k->...ijk", e_t, e_t, e_r)
        scale = r[..., None, None, None] ** 2
        return (dcurv[..., None, None, None] * ttt - curv[..., None, None, None] * mixed) / scale

    def translate(self, c, margin=DEFAULT_MARGIN):
        c = self._require_interior(c, margin)
        if not np.any(c != 0.0):
            return self
        return TranslatedBody(self, c, margin=margin)


class SuperellipsoidBody(ConvexBody):
    """Body ``sum (v_i / a_i)**(2m) <= 1`` with even exponent 2m in {2,4,6,8}.

    For exponents above 2 the metric tensor degenerates on the coordinate
    axes; ``validate`` reports this and area computations reject such
    directions with a regularity error.
    """

    kind = "superellipsoid"
    derivative_order = 3

    def __init__(self, axes, exponent):
        axes = np.asarray(axes, dtype=float)
        if axes.ndim != 1 or axes.size < 2:
            raise ValueError("axes must be a vector of length >= 2")
        if np.any(axes <= 0.0):
            raise ValueError("axes must be positive")
        exponent = int(exponent)
        if exponent not in (2, 4, 6, 8):
            raise ValueError("exponent must be an even integer 2m with m <= 4")
        self.dimension = axes.size
        self.axes = axes
        self.exponent = exponent
        self._inv_pow = axes ** (-float(exponent))

    def _normalized(self, v):
        scale = np.sqrt(np.einsum("...i,...i->...", v, v))
        return scale, v / scale[..., None]

    def minkowski(self, v):
        v = _as_directions(v, self.dimension)
        scale, u = self._normalized(v)
        p = self.exponent
        s = np.einsum("...i,i->...", u**p, self._inv_pow)
        return scale * s ** (1.0 / p)

    def gradient(self, v):
        v = _as_directions(v, self.dimension)
        _, u = self._normalized(v)
        p = self.exponent
        gauge = np.einsum("...i,i->...", u**p, self._inv_pow) ** (1.0 / p)
        gi = self._inv_pow * u ** (p - 1)
        return gauge[..., None] ** (1 - p) * gi

    def hessian(self, v):
        v = _as_directions(v, self.dimension)
        scale, u = self._normalized(v)
        p = self.exponent
        gauge = np.einsum("...i,i->...", u**p, self._inv_pow) ** (1.0 / p)
        gi = self._inv_pow * u ** (p - 1)
        diag_terms = (p - 1) * self._inv_pow * u ** (p - 2)
        h = (1 - p) * gauge[..., None, None] ** (1 - 2 * p) * np.einsum(
            "...i,...j->...ij", gi, gi
        )
        idx = np.arange(self.dimension)
        h = h.copy()
        h[..., idx, idx] += gauge[..., None] ** (1 - p) * diag_terms
        return h / scale[..., None, None]

    def third_derivative(self, v):
        v = _as_directions(v, self.dimension)
        scale, u = self._normalized(v)
        p = self.exponent
        gauge = np.einsum("...i,i->...", u**p, self._inv_pow) ** (1.0 / p)
        gi = self._inv_pow * u ** (p - 1)
        di = (p - 1) * self._inv_pow * u ** (p - 2)
        # p == 2 would hit u**(-1) at axis points; the coefficient is 0 there.
        ei = (p - 1) * (p - 2) * self._inv_pow * u ** (p - 3) if p > 2 else np.zeros(u.shape)
        g1 = gauge[..., None, None, None]
        t = (1 - p) * (1 - 2 * p) * g1 ** (1 - 3 * p) * np.einsum(
            "...i,...j,...k->...ijk", gi, gi, gi
        )
        mixed = np.einsum("...ik,...j->...ijk", _diag_embed(di), gi)
        mixed = mixed + np.einsum("...jk,...i->...ijk", _diag_embed(di), gi)
        mixed = mixed + np.einsum("...ij,...k->...ijk", _diag_embed(di), gi)
        t = t + (1 - p) * g1 ** (1 - 2 * p) * mixed
        cube = np.zeros(t.shape)
        idx = np.arange(self.dimension)
        cube[..., idx, idx, idx] = ei
        t = t + g1 ** (1 - p) * cube
        return t / scale[..., None, None, None] ** 2

    def translate(self, c, margin=DEFAULT_MARGIN):
        c = self._require_interior(c, margin)
        if not np.any(c != 0.0):
            return self
        return TranslatedBody(self, c, margin=margin)


def _diag_embed(d):
    """(..., n) -> (..., n, n) with d on the diagonal."""
    n = d.shape[-1]
    out = np.zeros(d.shape + (n,))
    idx = np.arange(n)
    out[..., idx, idx] = d
    return out


class TranslatedBody(ConvexBody):
    """Gauge of ``base - shift`` for bodies without a closed translated form.

    On each ray the gauge is recovered from the defining relation
    ``L_base(shift + v / L(v)) == 1`` by a bracketed Newton iteration: with
    ``s = 1 / L(v)``, the map ``s -> L_base(shift + s v) - 1`` is convex,
    negative at ``s = (1 - L(shift)) / L(v)`` and positive at
    ``s = (1 + L(-shift)) / L(v)``, so the root is unique and the bracket
    needs no search.  Gradients follow from implicit differentiation; the
    Hessian is a Richardson-extrapolated central difference of the analytic
    gradient, hence derivative_order == 2.
    """

    derivative_order = 2

    def __init__(self, base, shift, margin=DEFAULT_MARGIN):
        shift = np.asarray(shift, dtype=float).reshape(base.dimension)
        gauge = float(base.minkowski(shift)) if np.any(shift != 0.0) else 0.0
        if gauge >= 1.0 - margin:
            raise InteriorViolationError(
                f"shift with gauge {gauge:.6g} is not interior (margin {margin:g})"
            )
        self.base = base
        self.shift = shift
        self.dimension = base.dimension
        self.kind = base.kind
        self._shift_gauge = gauge
        self._neg_shift_gauge = float(base.minkowski(-shift)) if gauge else 0.0

    def _ray_scale(self, v):
        """Solve L_base(shift + s v) == 1 for s > 0, batched over rays."""
        base = self.base
        lv = base.minkowski(v)
        lo = (1.0 - self._shift_gauge) / lv
        hi = (1.0 + self._neg_shift_gauge) / lv
        s = 0.5 * (lo + hi)
        for _ in range(_GAUGE_ROOT_MAXITER):
            x = self.shift + s[..., None] * v
            f = base.minkowski(x) - 1.0
            hi = np.where(f > 0.0, s, hi)
            lo = np.where(f <= 0.0, s, lo)
            slope = np.einsum("...i,...i->...", base.gradient(x), v)
            with np.errstate(divide="ignore", invalid="ignore"):
                s_new = s - f / slope
            fallback = ~np.isfinite(s_new) | (s_new <= lo) | (s_new >= hi)
            s_new = np.where(fallback, 0.5 * (lo + hi), s_new)
            if np.all(np.abs(s_new - s) <= _GAUGE_ROOT_RTOL * s_new):
                return s_new
            s = s_new
        return s

    def minkowski(self, v):
        v = _as_directions(v, self.dimension)
        return 1.0 / self._ray_scale(v)

    def gradient(self, v):
        v = _as_directions(v, self.dimension)
        s = self._ray_scale(v)
        boundary = self.shift + s[..., None] * v
        g = self.base.gradient(boundary)
        denom = 1.0 - g @ self.shift
        return g / denom[..., None]

    def hessian(self, v):
        v = _as_directions(v, self.dimension)
        step = 1e-4 * np.sqrt(np.einsum("...i,...i->...", v, v))
        coarse = self._fd_jacobian(v, step)
        fine = self._fd_jacobian(v, 0.5 * step)
        h = (4.0 * fine - coarse) / 3.0
        return 0.5 * (h + np.swapaxes(h, -1, -2))

    def _fd_jacobian(self, v, step):
        n = self.dimension
        cols = []
        for j in range(n):
            offset = np.zeros(n)
            offset[j] = 1.0
            plus = self.gradient(v + step[..., None] * offset)
            minus = self.gradient(v - step[..., None] * offset)
            cols.append((plus - minus) / (2.0 * step[..., None]))
        return np.stack(cols, axis=-1)

    def translate(self, c, margin=DEFAULT_MARGIN):
        c = np.asarray(c, dtype=float).reshape(self.dimension)
        return TranslatedBody(self.base, self.shift + c, margin=margin)


@dataclass(frozen=True)
class RegularityReport:
    """Outcome of probing the metric tensor over a set of directions.

    ``margin`` is the smallest eigenvalue relative to the largest eigenvalue
    seen anywhere on the probe, a dimensionless safety factor.
    """

    min_metric_eigenvalue: float
    worst_node: np.ndarray
    is_strongly_convex: bool
    margin: float


def validate(body, rule):
    """Probe the metric tensor at every node of a sphere rule.

    Returns a RegularityReport; never raises on a degenerate body (the
    report carries the failure).
    """
    from .metric import metric_batch

    if rule.dimension != body.dimension:
        raise ValueError("rule dimension does not match body dimension")
    _, _, g = metric_batch(body, rule.nodes)
    eigs = np.linalg.eigvalsh(g)
    per_node_min = eigs[:, 0]
    worst = int(np.argmin(per_node_min))
    min_eig = float(per_node_min[worst])
    max_eig = float(np.max(eigs))
    return RegularityReport(
        min_metric_eigenvalue=min_eig,
        worst_node=rule.nodes[worst].copy(),
        is_strongly_convex=min_eig > 0.0,
        margin=min_eig / max_eig if max_eig > 0.0 else 0.0,
    )


def ball(dimension, radius=1.0, center=None):
    """Euclidean ball of the given radius, optionally off-center."""
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    matrix = np.eye(dimension) / radius**2
    return QuadraticBody(matrix, center=center, kind="ball")


def ellipsoid(axes=None, matrix=None, center=None):
    """Ellipsoid from semi-axes (diagonal) or an explicit SPD matrix."""
    if (axes is None) == (matrix is None):
        raise ValueError("provide exactly one of axes or matrix")
    if axes is not None:
        axes = np.asarray(axes, dtype=float)
        if np.any(axes <= 0.0):
            raise ValueError("axes must be positive")
        matrix = np.diag(1.0 / axes**2)
    return QuadraticBody(matrix, center=center, kind="ellipsoid")


def randers(matrix, beta):
    """Unit ball of the Randers norm sqrt(v' A v) + beta . v.

    Requires beta' A^-1 beta < 1; the resulting body is the off-center
    ellipsoid with quadratic form A - beta beta' (suitably normalized).
    """
    matrix = _check_spd(matrix, name="randers matrix")
    beta = np.asarray(beta, dtype=float).reshape(matrix.shape[0])
    dual_norm_sq = float(beta @ np.linalg.solve(matrix, beta))
    if dual_norm_sq >= 1.0:
        raise ValueError("randers data requires beta' A^-1 beta < 1")
    quad = matrix - np.outer(beta, beta)
    center = -np.linalg.solve(quad, beta)
    scale = 1.0 + float(beta @ np.linalg.solve(quad, beta))
    return QuadraticBody(quad / scale, center=center, kind="randers")


def minkowski(body, v):
    """Gauge value L(v) of the body at v (v != 0)."""
    return body.minkowski(v)


def minkowski_gradient(body, v):
    """Fiber gradient of the gauge at v."""
    return body.gradient(v)


def minkowski_hessian(body, v):
    """Fiber Hessian of the gauge at v."""
    return body.hessian(v)


def translate(body, c, margin=DEFAULT_MARGIN):
    """Shift the body so interior point c becomes the origin (K - c)."""
    return body.translate(c, margin=margin)


_COMMON_KEYS = {"dimension", "kind"}
_KIND_KEYS = {
    "ball": {"center", "axes"},
    "ellipsoid": {"center", "axes", "matrix"},
    "randers": {"matrix", "beta"},
    "radial2d": {"fourier"},
    "superellipsoid": {"axes", "exponent"},
}


def body_from_dict(data):
    """Build a body from a definition mapping (see the README for the schema).

    Unknown keys are rejected so that typos fail loudly instead of being
    silently ignored.
    """
    if not isinstance(data, dict):
        raise BodySpecError("body definition must be a JSON object")
    missing = _COMMON_KEYS - data.keys()
    if missing:
        raise BodySpecError(f"body definition is missing keys: {sorted(missing)}")
    kind = data["kind"]
    if kind not in _KIND_KEYS:
        raise BodySpecError(f"unknown body kind {kind!r}; expected one of {sorted(_KIND_KEYS)}")
    unknown = data.keys() - _COMMON_KEYS - _KIND_KEYS[kind]
    if unknown:
        raise BodySpecError(f"unknown keys for kind {kind!r}: {sorted(unknown)}")
    try:
        dimension = int(data["dimension"])
    except (TypeError, ValueError):
        raise BodySpecError("dimension must be an integer") from None
    if not 2 <= dimension <= 4:
        raise BodySpecError("dimension must be between 2 and 4")

    try:
        if kind == "ball":
            radius = float(data.get("axes", 1.0))
            return ball(dimension, radius=radius, center=data.get("center"))
    except (TypeError, ValueError) as exc:
        raise BodySpecError(f"invalid ball parameters: {exc}") from exc
    try:
        if kind == "ellipsoid":
            if ("axes" in data) == ("matrix" in data):
                raise BodySpecError("ellipsoid needs exactly one of axes or matrix")
            body = ellipsoid(
                axes=data.get("axes"), matrix=data.get("matrix"), center=data.get("center")
            )
        elif kind == "randers":
            matrix = data.get("matrix")
            if matrix is None:
                matrix = np.eye(dimension).tolist()
            if "beta" not in data:
                raise BodySpecError("randers body needs a beta covector")
            body = randers(matrix, data["beta"])
        elif kind == "radial2d":
            if dimension != 2:
                raise BodySpecError("radial2d bodies are two-dimensional")
            fourier = data.get("fourier")
            if not isinstance(fourier, dict) or "a0" not in fourier:
                raise BodySpecError("radial2d needs fourier: {a0, a, b}")
            extra = fourier.keys() - {"a0", "a", "b"}
            if extra:
                raise BodySpecError(f"unknown fourier keys: {sorted(extra)}")
            body = RadialBody2D(fourier["a0"], fourier.get("a", ()), fourier.get("b", ()))
        else:
            if "axes" not in data or "exponent" not in data:
                raise BodySpecError("superellipsoid needs axes and exponent")
            body = SuperellipsoidBody(data["axes"], data["exponent"])
    except BodySpecError:
        raise
    except ValueError as exc:
        raise BodySpecError(str(exc)) from exc
    if body.dimension != dimension:
        raise BodySpecError(
            f"declared dimension {dimension} does not match parameters ({body.dimension})"
        )
    return body


def load_body(path):
    """Read a body definition from a JSON file."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BodySpecError(f"invalid JSON in {path}: {exc}") from exc
    return body_from_dict(data)
