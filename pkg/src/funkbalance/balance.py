"""Balancing points of convex bodies and the sampled-field pipeline.

The area function of a body's Funk metric is strictly convex and diverges
at the boundary, so it has a unique interior minimizer: translating the
body there makes the averaged gradient covector vanish ("balanced").  The
minimizer is found by damped Newton with the exact gradient and Hessian
(boundary moments of the translated gauge's gradient).  ``balanced_field``
repeats the solve over a grid of bodies, warm-starting each point from its
predecessor, and reports a finite-difference Jacobian of the resulting
vector field as a smoothness diagnostic.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bodies import DEFAULT_MARGIN, body_from_dict
from .errors import BodySpecError, InteriorViolationError, RegularityError
from .funkarea import (
    FunkContext,
    _boundary_samples,
    area_value_gradient_hessian,
    projected_area_function,
)
from .quadrature import fsum_reduce

_MIN_STEP_FRACTION = 1e-12


@dataclass(frozen=True)
class BalanceResult:
    """Outcome of one balancing solve.

    ``trace`` lists (point, area, gradient norm) per accepted iterate;
    ``beta_norm`` is the averaged-gradient residual 2/(n-1) * |grad r|.
    """

    point: np.ndarray
    iterations: int
    grad_norm: float
    beta_norm: float
    hessian_min_eigenvalue: float
    converged: bool
    trace: tuple


def _is_interior(body, p, margin):
    if not np.any(p != 0.0):
        return True
    return float(body.minkowski(p)) <= 1.0 - margin


def balancing_point(body, rule, tol=1e-9, max_iter=100, margin=DEFAULT_MARGIN, start=None):
    """Minimize the area function by damped Newton with exact derivatives.

    Starts at the body frame's origin (always interior) unless ``start`` is
    given.  Steps are halved until the area decreases and the iterate stays
    interior; if the Hessian solve fails or yields a non-descent direction,
    the step falls back to steepest descent.  Convergence means the
    gradient norm dropped to ``tol``.
    """
    n = body.dimension
    if start is None:
        p = np.zeros(n)
    else:
        p = np.asarray(start, dtype=float).reshape(n).copy()
        if not _is_interior(body, p, margin):
            raise InteriorViolationError("start point is not interior")
    area_at = projected_area_function(body, rule)

    trace = []
    converged = False
    grad = np.zeros(n)
    hess = np.eye(n)
    for iteration in range(max_iter + 1):
        ctx = FunkContext(body, p, margin=margin)
        _, grad, hess = area_value_gradient_hessian(ctx, rule)
        value = area_at(p)
        grad_norm = float(np.linalg.norm(grad))
        trace.append((p.copy(), float(value), grad_norm))
        if grad_norm <= tol:
            converged = True
            break
        if iteration == max_iter:
            break
        try:
            step = np.linalg.solve(hess, -grad)
            if grad @ step >= 0.0:
                raise np.linalg.LinAlgError("not a descent direction")
        except np.linalg.LinAlgError:
            step = -grad
        scale = 1.0
        candidate = None
        while scale >= _MIN_STEP_FRACTION:
            trial = p + scale * step
            if _is_interior(body, trial, margin) and area_at(trial) < value:
                candidate = trial
                break
            scale *= 0.5
        if candidate is None:
            # Near the optimum the predicted decrease -grad.step drops below
            # float resolution of the area; take the full step anyway if it
            # strictly reduces the gradient norm.
            predicted = -float(grad @ step)
            trial = p + step
            if predicted <= 1e-10 * abs(value) and _is_interior(body, trial, margin):
                trial_ctx = FunkContext(body, trial, margin=margin)
                _, trial_grad, _ = area_value_gradient_hessian(trial_ctx, rule)
                if float(np.linalg.norm(trial_grad)) < grad_norm:
                    candidate = trial
        if candidate is None:
            break
        p = candidate

    return BalanceResult(
        point=p,
        iterations=len(trace) - 1,
        grad_norm=float(np.linalg.norm(grad)),
        beta_norm=2.0 / (n - 1) * float(np.linalg.norm(grad)),
        hessian_min_eigenvalue=float(np.linalg.eigvalsh(hess)[0]),
        converged=converged,
        trace=tuple(trace),
    )


def randers_center(matrix, beta):
    """Closed-form balancing point of a Randers unit ball.

    With the dual vector ``sharp = A^-1 beta`` and its squared norm
    ``beta . sharp`` (required < 1), the minimizer is
    ``-sharp / (1 - |sharp|^2)`` -- the center of the off-center ellipsoid
    the body actually is.  Serves as the analytic oracle for
    ``balancing_point``.
    """
    matrix = np.asarray(matrix, dtype=float)
    beta = np.asarray(beta, dtype=float).reshape(matrix.shape[0])
    sharp = np.linalg.solve(matrix, beta)
    norm_sq = float(beta @ sharp)
    if norm_sq >= 1.0:
        raise ValueError("randers data requires beta' A^-1 beta < 1")
    return -sharp / (1.0 - norm_sq)


def balance_residual(body, p, rule):
    """Norm of the averaged gradient covector of the body translated to p."""
    ctx = FunkContext(body, p)
    samples = _boundary_samples(ctx.translated, rule)
    beta = fsum_reduce(samples.density[:, None] * samples.grad)
    return float(np.linalg.norm(beta))


_NUMBER = r"\d+(?:\.\d*)?|\.\d+"
_TERM_RE = re.compile(rf"(?:({_NUMBER})\*?)?(?:q([1-9]\d*))?$")


def _parse_affine(expr, n):
    """Affine expression in grid coordinates q1..qn: e.g. '-q1', '0.5*q2+0.1'.

    Plain decimal numbers only (no exponent notation); terms are joined by
    + or -.
    """
    s = expr.replace(" ", "")
    tokens = re.findall(r"[+-]?[^+-]+", s)
    if not tokens or "".join(tokens) != s:
        raise BodySpecError(f"cannot parse affine expression {expr!r}")
    const = 0.0
    coeffs = np.zeros(n)
    for token in tokens:
        sign = 1.0
        body = token
        if token[0] in "+-":
            sign = -1.0 if token[0] == "-" else 1.0
            body = token[1:]
        match = _TERM_RE.fullmatch(body)
        if not match or (match.group(1) is None and match.group(2) is None):
            raise BodySpecError(f"bad term {token!r} in affine expression {expr!r}")
        coeff = float(match.group(1)) if match.group(1) else 1.0
        if match.group(2):
            index = int(match.group(2)) - 1
            if index >= n:
                raise BodySpecError(
                    f"coordinate q{index + 1} out of range in expression {expr!r}"
                )
            coeffs[index] += sign * coeff
        else:
            const += sign * coeff
    return const, coeffs


def _instantiate(node, q, n, key=None):
    if isinstance(node, dict):
        return {k: _instantiate(v, q, n, key=k) for k, v in node.items()}
    if isinstance(node, (list, tuple)):
        return [_instantiate(v, q, n, key=key) for v in node]
    if isinstance(node, str):
        if key == "kind":
            return node
        const, coeffs = _parse_affine(node, n)
        return const + float(coeffs @ q)
    return node


def load_field_spec(path):
    """Read a field definition (grid + per-point body template) from JSON."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise BodySpecError(f"invalid JSON in {path}: {exc}") from exc
    return validate_field_spec(data)


def validate_field_spec(data):
    if not isinstance(data, dict):
        raise BodySpecError("field definition must be a JSON object")
    unknown = data.keys() - {"grid", "body_template"}
    if unknown:
        raise BodySpecError(f"unknown field-spec keys: {sorted(unknown)}")
    grid = data.get("grid")
    template = data.get("body_template")
    if not isinstance(grid, list) or not grid:
        raise BodySpecError("field spec needs a nonempty grid list")
    for axis in grid:
        if not isinstance(axis, dict) or axis.keys() != {"min", "max", "count"}:
            raise BodySpecError("each grid axis needs exactly min, max, count")
        if int(axis["count"]) < 1:
            raise BodySpecError("grid axis count must be positive")
    if not isinstance(template, dict):
        raise BodySpecError("field spec needs a body_template object")
    return data


@dataclass(frozen=True)
class FinslerFieldSample:
    """Balancing vectors of a sampled family of bodies.

    ``vectors[i]`` is the balancing point of the body instantiated at
    ``points[i]`` (row-major over the grid); ``jacobian`` holds grid
    finite differences d(vector_i)/d(coordinate_j) as a smoothness
    diagnostic, or None when some axis has a single sample.
    """

    points: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    iterations: np.ndarray
    converged: np.ndarray
    jacobian: np.ndarray | None
    grid_shape: tuple
    descriptors: tuple


def balanced_field(field_spec, rule, tol=1e-9, margin=DEFAULT_MARGIN, warm_start=True):
    """Balance every body of a sampled family and package the vector field.

    Returns ``(sample, evaluator)``: the evaluator is the balanced gauge
    ``(index, v) -> L of body_index translated to its balancing vector``.
    Per-point failures are recorded (converged False, NaN vector) and the
    pipeline continues.
    """
    field_spec = validate_field_spec(field_spec)
    axes = [
        np.linspace(float(a["min"]), float(a["max"]), int(a["count"]))
        for a in field_spec["grid"]
    ]
    grid_shape = tuple(len(a) for a in axes)
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=-1)
    n_grid = len(axes)

    template = field_spec["body_template"]
    try:
        dimension = int(template["dimension"])
    except (KeyError, TypeError, ValueError):
        raise BodySpecError("body_template needs an integer dimension") from None
    total = points.shape[0]
    bodies = []
    descriptors = []
    vectors = np.full((total, dimension), np.nan)
    residuals = np.full(total, np.nan)
    iterations = np.zeros(total, dtype=int)
    converged = np.zeros(total, dtype=bool)

    previous = None
    for i in range(total):
        descriptor = _instantiate(template, points[i], n_grid)
        descriptors.append(descriptor)
        try:
            body = body_from_dict(descriptor)
            bodies.append(body)
            start = None
            if warm_start and previous is not None and _is_interior(body, previous, margin):
                start = previous
            result = balancing_point(
                body, rule, tol=tol, margin=margin, start=start
            )
        except (BodySpecError, InteriorViolationError, RegularityError,
                np.linalg.LinAlgError):
            if len(bodies) <= i:
                bodies.append(None)
            previous = None
            continue
        vectors[i] = result.point
        residuals[i] = result.beta_norm
        iterations[i] = result.iterations
        converged[i] = result.converged
        previous = result.point if result.converged else None

    jacobian = None
    if all(count >= 2 for count in grid_shape) and np.all(converged):
        n_out = vectors.shape[1]
        v_grid = vectors.reshape(grid_shape + (n_out,))
        jacobian = np.empty(grid_shape + (n_out, n_grid))
        for i in range(n_out):
            partials = np.gradient(v_grid[..., i], *axes)
            if n_grid == 1:
                partials = [partials]
            for j in range(n_grid):
                jacobian[..., i, j] = partials[j]

    sample = FinslerFieldSample(
        points=points,
        vectors=vectors,
        residuals=residuals,
        iterations=iterations,
        converged=converged,
        jacobian=jacobian,
        grid_shape=grid_shape,
        descriptors=tuple(descriptors),
    )

    translated_cache = {}

    def evaluator(index, v):
        if not sample.converged[index]:
            raise InteriorViolationError(f"no balanced gauge at grid index {index}")
        if index not in translated_cache:
            translated_cache[index] = bodies[index].translate(
                sample.vectors[index], margin=margin
            )
        return translated_cache[index].minkowski(v)

    return sample, evaluator
