"""Quadrature on the Euclidean unit sphere and transfer to body boundaries.

Because the integrands of interest are 0-homogeneous, integrals over a
body's boundary ``L == 1`` (with the induced metric measure) pull back to
the Euclidean unit sphere with the scalar density ``volume_weight``:

    integral over boundary of f  ==  sum_i w_i * volume_weight(u_i) * f(u_i)

and integrals over the body itself are the boundary integral divided by
the dimension.  Rules are deterministic; reductions use exactly rounded
fixed-order compensated summation so results are independent of node
evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .metric import volume_weight

DEFAULT_RESOLUTION = {2: 256, 3: 64, 4: 32}


def sphere_area(n):
    """Euclidean area of the unit sphere S^(n-1): 2 pi for n=2, 4 pi for n=3."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


@dataclass(frozen=True)
class SphereRule:
    """Nodes (unit vectors) and positive weights on the Euclidean sphere.

    ``degree`` is the declared polynomial exactness: every polynomial of
    total degree up to ``degree`` is integrated exactly (up to roundoff).
    """

    dimension: int
    nodes: np.ndarray
    weights: np.ndarray
    descriptor: str
    degree: int

    def __len__(self):
        return self.weights.size


def build_rule(n, resolution, seed=0):
    """Build a sphere rule.

    n == 2: periodic trapezoid on `resolution` equispaced angles, spectrally
    accurate for smooth integrands.  n == 3: Gauss-Legendre in the polar
    cosine (`resolution` points) times trapezoid in azimuth (2*resolution
    points).  n == 4: seeded antithetic Monte Carlo (declared degree 1);
    the seed only matters there.
    """
    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    if n == 2:
        theta = 2.0 * np.pi * np.arange(resolution) / resolution
        nodes = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        weights = np.full(resolution, 2.0 * np.pi / resolution)
        return SphereRule(2, nodes, weights, f"circle-trapezoid-{resolution}", resolution - 1)
    if n == 3:
        t, tw = np.polynomial.legendre.leggauss(resolution)
        nphi = 2 * resolution
        phi = 2.0 * np.pi * np.arange(nphi) / nphi
        sin_theta = np.sqrt(1.0 - t**2)
        x = np.outer(sin_theta, np.cos(phi))
        y = np.outer(sin_theta, np.sin(phi))
        z = np.outer(t, np.ones(nphi))
        nodes = np.stack([x.ravel(), y.ravel(), z.ravel()], axis=-1)
        weights = np.outer(tw, np.full(nphi, 2.0 * np.pi / nphi)).ravel()
        descriptor = f"gauss-legendre-{resolution}x{nphi}"
        return SphereRule(3, nodes, weights, descriptor, 2 * resolution - 1)
    if n == 4:
        count = resolution**3
        count += count % 2
        rng = np.random.default_rng(seed)
        half = rng.standard_normal((count // 2, 4))
        half /= np.linalg.norm(half, axis=1, keepdims=True)
        nodes = np.concatenate([half, -half], axis=0)
        weights = np.full(count, sphere_area(4) / count)
        return SphereRule(4, nodes, weights, f"montecarlo-{count}-seed{seed}", 1)
    raise ValueError(f"no sphere rule for dimension {n}; supported: 2, 3, 4")


def fsum_reduce(terms):
    """Exactly rounded sum over the first axis, componentwise.

    Contributions are accumulated with math.fsum in a fixed order, so the
    reduction is deterministic and insensitive to how node evaluations were
    scheduled.
    """
    terms = np.asarray(terms, dtype=float)
    if terms.ndim == 1:
        return math.fsum(terms.tolist())
    flat = terms.reshape(terms.shape[0], -1)
    sums = [math.fsum(flat[:, j].tolist()) for j in range(flat.shape[1])]
    return np.array(sums).reshape(terms.shape[1:])


def _field_values(f, nodes):
    if callable(f):
        values = np.asarray(f(nodes), dtype=float)
        if values.shape[0] != nodes.shape[0]:
            raise ValueError(
                "integrand must map an (N, n) node array to an (N, ...) value array"
            )
        return values
    return np.full(nodes.shape[0], float(f))


def indicatrix_integral(body, f, rule):
    """Integral of a 0-homogeneous field over the body's boundary measure.

    ``f`` is either a constant or a vectorized callable taking the full
    ``(N, n)`` node array.  Regularity failures at any node abort with the
    offending direction reported.
    """
    if rule.dimension != body.dimension:
        raise ValueError("rule dimension does not match body dimension")
    density = rule.weights * volume_weight(body, rule.nodes)
    values = _field_values(f, rule.nodes)
    shaped = density.reshape((len(rule),) + (1,) * (values.ndim - 1))
    return fsum_reduce(values * shaped)


def body_integral(body, f, rule):
    """Integral of a 0-homogeneous field over the body's interior measure.

    Equal to the boundary integral divided by the dimension (divergence of
    ``f`` times the radial field is ``n f``).
    """
    return indicatrix_integral(body, f, rule) / body.dimension
