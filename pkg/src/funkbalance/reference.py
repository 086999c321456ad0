"""Independent oracles used by the test suite and the acceptance gate.

Nothing here touches the sphere rules of ``quadrature``: closed forms come
from direct integration of the ball case, the planar ball area uses its own
1-D node set, volumes come from seeded rejection sampling, and derivative
checks use Richardson-extrapolated central differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .metric import metric_batch


@dataclass(frozen=True)
class OracleConfig:
    """Knobs for the stochastic and finite-difference oracles.

    Identical seeds give identical Monte-Carlo estimates: sampling uses
    numpy's seeded PCG64 generator with a fixed chunk schedule.
    """

    seed: int = 0
    sample_count: int = 1_000_000
    fd_step: float = 1e-4

    def __post_init__(self):
        if self.sample_count < 10_000:
            raise ValueError("sample_count must be at least 10^4")
        if not 0.0 < self.fd_step <= 1e-2:
            raise ValueError("fd_step must lie in (0, 1e-2]")


def ball_funk_area_closed(n, s):
    """Indicatrix area of the unit ball's Funk metric at gauge distance s.

    For n == 3 the area is (2 pi / s) * log((1 + s) / (1 - s)) with limit
    4 pi at s == 0.  For n == 2 it is the full-turn integral of
    (1 - s sin t)**(-1/2), evaluated on a private trapezoid grid doubled
    until two successive refinements agree to 1e-12 relative.
    """
    if not 0.0 <= s < 1.0:
        raise ValueError("s must lie in [0, 1)")
    if n == 3:
        if s == 0.0:
            return 4.0 * math.pi
        return (2.0 * math.pi / s) * (math.log1p(s) - math.log1p(-s))
    if n == 2:
        count = 64
        previous = None
        while count <= 2**22:
            t = 2.0 * np.pi * np.arange(count) / count
            values = (1.0 - s * np.sin(t)) ** (-0.5)
            estimate = 2.0 * np.pi * math.fsum(values.tolist()) / count
            if previous is not None and abs(estimate - previous) <= 1e-12 * abs(estimate):
                return estimate
            previous = estimate
            count *= 2
        raise RuntimeError("planar ball area oracle failed to converge")
    raise ValueError("closed forms available for n in {2, 3}")


def _bounding_box(body, seed=0):
    """Per-axis half-widths of a box certainly containing the body.

    Scans boundary points over a dense direction set and pads by 1%; the
    padding only lowers the rejection-sampling acceptance rate, it cannot
    bias the estimate.
    """
    n = body.dimension
    if n == 2:
        theta = 2.0 * np.pi * np.arange(1 << 14) / (1 << 14)
        dirs = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    elif n == 3:
        t = np.linspace(-1.0, 1.0, 256)
        phi = 2.0 * np.pi * np.arange(512) / 512
        st = np.sqrt(np.clip(1.0 - t**2, 0.0, 1.0))
        dirs = np.stack(
            [
                np.outer(st, np.cos(phi)).ravel(),
                np.outer(st, np.sin(phi)).ravel(),
                np.outer(t, np.ones(phi.size)).ravel(),
            ],
            axis=-1,
        )
        dirs = dirs[np.linalg.norm(dirs, axis=1) > 0.5]
    else:
        rng = np.random.default_rng(seed)
        dirs = rng.standard_normal((1 << 16, n))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    boundary = dirs / np.asarray(body.minkowski(dirs))[:, None]
    return 1.01 * np.max(np.abs(boundary), axis=0)


def montecarlo_body_integral(body, f, cfg=None):
    """Body integral of ``f`` against the metric volume by rejection sampling.

    Draws uniform points in a bounding box, keeps those with gauge <= 1,
    and averages ``f(x) * sqrt(det g(x))``.  Returns ``(estimate,
    standard_error)``; reproducible for a fixed config.
    """
    cfg = cfg or OracleConfig()
    n = body.dimension
    half = _bounding_box(body, seed=cfg.seed)
    box_volume = float(np.prod(2.0 * half))
    rng = np.random.default_rng(cfg.seed)

    total = 0.0
    total_sq = 0.0
    accepted = 0
    remaining = cfg.sample_count
    chunk_size = 1_000_000
    while remaining > 0:
        m = min(chunk_size, remaining)
        remaining -= m
        x = rng.uniform(-half, half, size=(m, n))
        norms = np.einsum("ij,ij->i", x, x)
        nonzero = norms > 0.0
        inside = np.zeros(m, dtype=bool)
        inside[nonzero] = np.asarray(body.minkowski(x[nonzero])) <= 1.0
        weights = np.zeros(m)
        if np.any(inside):
            _, _, g = metric_batch(body, x[inside])
            density = np.sqrt(np.linalg.det(g))
            if callable(f):
                density = density * np.asarray(f(x[inside]), dtype=float)
            else:
                density = density * float(f)
            weights[inside] = density
        total += math.fsum(weights.tolist())
        total_sq += math.fsum((weights**2).tolist())
        accepted += int(np.count_nonzero(inside))

    count = cfg.sample_count
    if accepted < 1e-3 * count:
        raise RuntimeError(
            f"rejection sampling acceptance rate {accepted / count:.2e} below 1e-3; "
            "bounding box is too large for this body"
        )
    mean = total / count
    variance = max(total_sq / count - mean**2, 0.0) * count / (count - 1)
    estimate = box_volume * mean
    standard_error = box_volume * math.sqrt(variance / count)
    return estimate, standard_error


def _stack_partials(field, x, h):
    parts = []
    for i in range(x.size):
        e = np.zeros(x.size)
        e[i] = h
        plus = np.asarray(field(x + e), dtype=float)
        minus = np.asarray(field(x - e), dtype=float)
        parts.append((plus - minus) / (2.0 * h))
    return np.stack(parts, axis=-1)


def _second_differences(field, x, h):
    n = x.size
    base = np.asarray(field(x), dtype=float)
    out = np.zeros(base.shape + (n, n))
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        out[..., i, i] = (
            np.asarray(field(x + ei), dtype=float)
            - 2.0 * base
            + np.asarray(field(x - ei), dtype=float)
        ) / h**2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h
            cross = (
                np.asarray(field(x + ei + ej), dtype=float)
                - np.asarray(field(x + ei - ej), dtype=float)
                - np.asarray(field(x - ei + ej), dtype=float)
                + np.asarray(field(x - ei - ej), dtype=float)
            ) / (4.0 * h**2)
            out[..., i, j] = cross
            out[..., j, i] = cross
    return out


def finite_difference(field, point, order=1, cfg=None):
    """Central-difference derivative of a smooth field with extrapolation.

    ``order`` 1 gives the gradient/Jacobian (last axis indexes the
    coordinate), 2 the matrix of second derivatives.  Two step sizes are
    combined by Richardson extrapolation; the returned error indicator is
    the largest disagreement between the extrapolated and the fine
    estimate.
    """
    cfg = cfg or OracleConfig()
    scalar_point = np.isscalar(point) or np.asarray(point).ndim == 0
    x = np.atleast_1d(np.asarray(point, dtype=float))
    h = cfg.fd_step * max(1.0, float(np.max(np.abs(x))))
    if h == 0.0 or x.size and not np.isfinite(h):
        raise ValueError("finite-difference step underflowed")
    if scalar_point:
        wrapped = lambda y: field(float(y[0]))  # noqa: E731
    else:
        wrapped = field
    if order == 1:
        coarse = _stack_partials(wrapped, x, h)
        fine = _stack_partials(wrapped, x, 0.5 * h)
    elif order == 2:
        coarse = _second_differences(wrapped, x, h)
        fine = _second_differences(wrapped, x, 0.5 * h)
    else:
        raise ValueError("order must be 1 or 2")
    estimate = (4.0 * fine - coarse) / 3.0
    error = float(np.max(np.abs(estimate - fine)))
    if scalar_point:
        estimate = np.squeeze(estimate)
        if estimate.ndim == 0:
            estimate = float(estimate)
    return estimate, error
