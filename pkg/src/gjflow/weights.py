"""Generalized Jacobi weights with moving endpoints.

A weight is zero outside [x_1(t), x_m(t)] and equals
``C_j * prod_k |x - x_k(t)|^alpha_k`` on the piece (x_j(t), x_{j+1}(t)).
The node polynomial is ``W(x, t) = prod_k (x - x_k(t))``; the exponents
and piece constants do not depend on t, only the endpoints move.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (
    BadConstant,
    BadExponent,
    NodeCollision,
    NonDistinctEndpoints,
    NonFinite,
)


@dataclass(frozen=True)
class EndpointTrajectory:
    """Polynomial-in-t endpoint paths x_k(t).

    ``coeffs[k]`` holds the coefficients of x_k(t), constant term first.
    """

    coeffs: tuple

    def __post_init__(self):
        norm = tuple(tuple(float(c) for c in row) for row in self.coeffs)
        if any(len(row) == 0 for row in norm):
            raise ValueError("each endpoint needs at least a constant term")
        object.__setattr__(self, "coeffs", norm)

    @property
    def m(self) -> int:
        return len(self.coeffs)

    @staticmethod
    def fixed(points) -> "EndpointTrajectory":
        """Endpoints that do not move."""
        return EndpointTrajectory(tuple((float(p),) for p in points))

    @staticmethod
    def affine(points, velocities) -> "EndpointTrajectory":
        """x_k(t) = p_k + v_k * t."""
        return EndpointTrajectory(
            tuple((float(p), float(v)) for p, v in zip(points, velocities))
        )

    def positions(self, t: float) -> np.ndarray:
        return np.array([npoly.polyval(t, c) for c in self.coeffs])

    def velocities(self, t: float) -> np.ndarray:
        return np.array([npoly.polyval(t, npoly.polyder(c)) for c in self.coeffs])


@dataclass(frozen=True)
class NodeData:
    """Endpoint positions, velocities, and W'(x_j) values at one time."""

    t: float
    x: np.ndarray
    xdot: np.ndarray
    wprime: np.ndarray


@dataclass(frozen=True)
class GeneralizedJacobiWeight:
    """Validated generalized Jacobi weight; immutable after construction."""

    alpha: np.ndarray
    pieces: np.ndarray
    trajectory: EndpointTrajectory

    @property
    def m(self) -> int:
        return len(self.alpha)

    @property
    def sum_alpha(self) -> float:
        return float(np.sum(self.alpha))


def make_weight(alpha, pieces, trajectory, t_ref: float = 0.0) -> GeneralizedJacobiWeight:
    """Build and validate a generalized Jacobi weight.

    Raises BadExponent if some alpha_k <= -1, BadConstant if some C_j <= 0,
    NonDistinctEndpoints if the trajectory is not strictly ordered at t_ref.
    """
    alpha = np.asarray(alpha, dtype=float)
    pieces = np.asarray(pieces, dtype=float)
    m = len(alpha)
    if m < 2:
        raise BadExponent("need at least two endpoints (m >= 2)")
    if len(pieces) != m - 1:
        raise BadConstant(f"expected {m - 1} piece constants, got {len(pieces)}")
    if trajectory.m != m:
        raise NonDistinctEndpoints(
            f"trajectory has {trajectory.m} endpoints, expected {m}"
        )
    if np.any(alpha <= -1.0):
        raise BadExponent(f"exponents must be > -1, got {alpha.tolist()}")
    if np.any(pieces <= 0.0):
        raise BadConstant(f"piece constants must be > 0, got {pieces.tolist()}")
    x = trajectory.positions(t_ref)
    if np.any(np.diff(x) <= 0.0):
        raise NonDistinctEndpoints(
            f"endpoints not strictly increasing at t={t_ref}: {x.tolist()}"
        )
    return GeneralizedJacobiWeight(alpha=alpha, pieces=pieces, trajectory=trajectory)


def node_data(w: GeneralizedJacobiWeight, t: float) -> NodeData:
    """Positions, velocities, and W'(x_j) = prod_{k != j}(x_j - x_k) at time t."""
    x = w.trajectory.positions(t)
    if np.any(np.diff(x) <= 0.0):
        raise NonDistinctEndpoints(
            f"endpoints not strictly increasing at t={t}: {x.tolist()}"
        )
    xdot = w.trajectory.velocities(t)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    wprime = np.prod(diff, axis=1)
    return NodeData(t=float(t), x=x, xdot=xdot, wprime=wprime)


def eval_W(w: GeneralizedJacobiWeight, x, t: float):
    """Node polynomial W(x, t) = prod_k (x - x_k(t))."""
    pos = w.trajectory.positions(t)
    x = np.asarray(x, dtype=float)
    return np.prod(x[..., None] - pos, axis=-1)


def eval_weight(w: GeneralizedJacobiWeight, x: float, t: float) -> float:
    """Weight value at a point; 0 outside the support.

    At an endpoint with positive local exponent the value is 0; with zero
    exponent the one-sided piece value is returned (right piece, except at
    x_m); a negative exponent at its own endpoint raises NonFinite.
    """
    nd = node_data(w, t)
    x = float(x)
    if x < nd.x[0] or x > nd.x[-1]:
        return 0.0
    hits = np.nonzero(nd.x == x)[0]
    if hits.size:
        k = int(hits[0])
        if w.alpha[k] > 0.0:
            return 0.0
        if w.alpha[k] < 0.0:
            raise NonFinite(f"weight diverges at endpoint x_{k + 1} = {x}")
        # alpha_k == 0: one-sided piece value (right piece except at x_m)
        j = k if k < w.m - 1 else k - 1
    else:
        j = int(np.searchsorted(nd.x, x)) - 1
    val = w.pieces[j]
    for k in range(w.m):
        d = abs(x - nd.x[k])
        if d > 0.0 or w.alpha[k] != 0.0:
            val *= d ** w.alpha[k]
    return float(val)


def eval_V(w: GeneralizedJacobiWeight, x: float, t: float) -> float:
    """The degree <= m-1 polynomial with V(x_k) = alpha_k W'(x_k) / 2.

    Evaluated through the node-value representation:
    V(x) = W(x) * (1/2) * sum_k alpha_k / (x - x_k).
    """
    nd = node_data(w, t)
    diffs = np.asarray(x, dtype=float) - nd.x
    hits = np.nonzero(diffs == 0.0)[0]
    if hits.size:
        k = int(hits[0])
        return float(w.alpha[k] * nd.wprime[k] / 2.0)
    return float(np.prod(diffs) * 0.5 * np.sum(w.alpha / diffs))


def eval_V_and_logderivs(w: GeneralizedJacobiWeight, x: float, t: float):
    """Return (V(x), d/dx log w, d/dt log w) at a non-node point.

    d/dx log w = sum_k alpha_k / (x - x_k),
    d/dt log w = -sum_k alpha_k xdot_k / (x - x_k).
    Raises NodeCollision if x coincides with an endpoint (V alone is still
    available through eval_V).
    """
    nd = node_data(w, t)
    diffs = float(x) - nd.x
    if np.any(diffs == 0.0):
        raise NodeCollision(f"x = {x} coincides with an endpoint at t = {t}")
    inv = 1.0 / diffs
    V = float(np.prod(diffs) * 0.5 * np.sum(w.alpha * inv))
    dlogw_dx = float(np.sum(w.alpha * inv))
    dlogw_dt = float(-np.sum(w.alpha * nd.xdot * inv))
    return V, dlogw_dx, dlogw_dt


def barycentric_interpolate(nd: NodeData, values, x):
    """Degree <= m-1 interpolant through (x_j, values_j), first barycentric form.

    p(x) = W(x) * sum_j values_j / (W'(x_j) (x - x_j)); exact node values are
    returned when x hits a node.
    """
    values = np.asarray(values, dtype=float)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    xv = np.atleast_1d(x)
    out = np.empty_like(xv)
    for i, xi in enumerate(xv):
        diffs = xi - nd.x
        hit = np.nonzero(diffs == 0.0)[0]
        if hit.size:
            out[i] = values[int(hit[0])]
        else:
            out[i] = np.prod(diffs) * np.sum(values / (nd.wprime * diffs))
    return float(out[0]) if scalar else out
