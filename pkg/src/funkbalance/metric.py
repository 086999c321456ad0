"""Metric quantities derived from a body's gauge function.

The fundamental tensor is the fiber Hessian of the energy ``E = L**2 / 2``,
expanded as ``g = L * Hess(L) + grad(L) x grad(L)``.  From it come the
angular metric ``m = g - grad(L) x grad(L)``, the Cartan trace (the fiber
derivative of ``g`` contracted with the inverse metric), and the scalar
weight that converts Euclidean sphere measure into the induced measure on
the body's boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RegularityError

_FD_CARTAN_STEP = 1e-4


def metric_batch(body, v):
    """Gauge, gradient, and fundamental tensor at each direction.

    Returns ``(L, grad, g)`` with shapes ``(...,)``, ``(..., n)`` and
    ``(..., n, n)``.  No positive-definiteness check is performed here.
    """
    v = np.asarray(v, dtype=float)
    gauge = body.minkowski(v)
    grad = body.gradient(v)
    hess = body.hessian(v)
    g = gauge[..., None, None] * hess + np.einsum("...i,...j->...ij", grad, grad)
    return gauge, grad, g


@dataclass(frozen=True)
class MetricSample:
    direction: np.ndarray
    g: np.ndarray
    grad_L: np.ndarray
    L: float


@dataclass(frozen=True)
class AngularSample:
    direction: np.ndarray
    m: np.ndarray


def metric_tensor(body, v, check=True):
    """Fundamental tensor at a single direction.

    With ``check`` enabled (the default) a non-positive-definite result
    raises RegularityError naming the direction.
    """
    v = np.asarray(v, dtype=float).reshape(body.dimension)
    gauge, grad, g = metric_batch(body, v)
    if check:
        min_eig = float(np.linalg.eigvalsh(g)[0])
        if min_eig <= 0.0:
            raise RegularityError(
                f"metric tensor is not positive definite at direction {v.tolist()} "
                f"(min eigenvalue {min_eig:.6g})",
                direction=v,
            )
    return MetricSample(direction=v, g=g, grad_L=grad, L=float(gauge))


def angular_metric(body, v, check=True):
    """Angular metric m = g - grad(L) x grad(L); annihilates the direction."""
    sample = metric_tensor(body, v, check=check)
    m = sample.g - np.outer(sample.grad_L, sample.grad_L)
    return AngularSample(direction=sample.direction, m=m)


def _cartan_lowered_analytic(body, v):
    """Lowered Cartan tensor C_ijk = d(g_ij)/dy^k / 2 from analytic thirds."""
    gauge = body.minkowski(v)
    grad = body.gradient(v)
    hess = body.hessian(v)
    third = body.third_derivative(v)
    c = np.einsum("...k,...ij->...ijk", grad, hess)
    c = c + np.einsum("...i,...jk->...ijk", grad, hess)
    c = c + np.einsum("...j,...ik->...ijk", grad, hess)
    c = c + gauge[..., None, None, None] * third
    return 0.5 * c


def _cartan_lowered_fd(body, v):
    """Lowered Cartan tensor from Richardson-extrapolated differences of g."""
    v = np.asarray(v, dtype=float)
    n = body.dimension
    step = _FD_CARTAN_STEP * np.sqrt(np.einsum("...i,...i->...", v, v))

    def fd(h):
        cols = []
        for k in range(n):
            offset = np.zeros(n)
            offset[k] = 1.0
            _, _, g_plus = metric_batch(body, v + h[..., None] * offset)
            _, _, g_minus = metric_batch(body, v - h[..., None] * offset)
            cols.append((g_plus - g_minus) / (2.0 * h[..., None, None]))
        return np.stack(cols, axis=-1)

    coarse = fd(step)
    fine = fd(0.5 * step)
    return 0.5 * (4.0 * fine - coarse) / 3.0


def cartan_trace(body, v, mode="analytic"):
    """Trace of the Cartan tensor, C_i = g^jk C_ijk, at each direction.

    ``mode='analytic'`` needs third fiber derivatives from the body;
    ``mode='fd'`` opts in to finite differences of the fundamental tensor
    (useful for bodies that only supply second derivatives, and as a
    cross-check).  The radial contraction ``v^k C_ijk == 0`` is verified
    internally at 1e-8 (analytic) or 1e-4 (fd) relative tolerance.
    """
    if mode not in ("analytic", "fd"):
        raise ValueError(f"mode must be 'analytic' or 'fd', got {mode!r}")
    v = np.asarray(v, dtype=float)
    if mode == "analytic":
        if body.derivative_order < 3:
            raise ValueError(
                f"{body.kind} body has derivative order {body.derivative_order}; "
                "pass mode='fd' to opt in to finite differences"
            )
        lowered = _cartan_lowered_analytic(body, v)
        tol = 1e-8
    else:
        lowered = _cartan_lowered_fd(body, v)
        tol = 1e-4
    _, _, g = metric_batch(body, v)
    scale = np.max(np.abs(lowered), axis=(-3, -2, -1)) + 1e-300
    radial = np.einsum("...ijk,...k->...ij", lowered, v)
    vnorm = np.sqrt(np.einsum("...i,...i->...", v, v))
    residual = np.max(np.abs(radial), axis=(-2, -1)) / (scale * vnorm)
    if np.any(residual > tol):
        raise RegularityError(
            f"cartan contraction v^k C_ijk deviates from 0 by rel {np.max(residual):.3g} "
            f"(tolerance {tol:g})"
        )
    g_inv = np.linalg.inv(g)
    return np.einsum("...jk,...ijk->...i", g_inv, lowered)


def volume_weight(body, u):
    """Density converting sphere measure into the boundary measure of the body.

    For a unit vector ``u`` this is ``phi(u)**n * sqrt(det g(u))`` with
    ``phi = |u| / L(u)``; it is 0-homogeneous, so any nonzero ``u`` works.
    Computed as ``exp(n log phi + log det chol(g))`` to stay finite for
    strongly anisotropic bodies.  Raises RegularityError if the fundamental
    tensor fails to be positive definite at any requested direction.
    """
    u = np.asarray(u, dtype=float)
    gauge, _, g = metric_batch(body, u)
    half_logdet = half_logdet_checked(u, g, body.dimension)
    unorm = np.sqrt(np.einsum("...i,...i->...", u, u))
    n = body.dimension
    return np.exp(n * (np.log(unorm) - np.log(gauge)) + half_logdet)


def half_logdet_checked(u, g, dimension):
    """log sqrt(det g) via Cholesky; raises RegularityError on non-PD input."""
    try:
        chol = np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        eigs = np.linalg.eigvalsh(g)
        flat_idx = int(np.argmin(eigs[..., 0]))
        bad = np.asarray(u).reshape(-1, dimension)[flat_idx]
        raise RegularityError(
            f"metric tensor is not positive definite at direction {bad.tolist()}",
            direction=bad,
        ) from None
    return np.sum(np.log(np.diagonal(chol, axis1=-2, axis2=-1)), axis=-1)
