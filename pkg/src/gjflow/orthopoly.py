"""Orthonormal polynomial recurrence coefficients, moments, Hankel determinants.

The three-term recurrence is
``a_{n+1} p_{n+1}(x) = (x - b_n) p_n(x) - a_n p_{n-1}(x)`` with
``p_n(x) = gamma_n x^n + ...`` orthonormal against the weight. The
quadrature-backed discretized Stieltjes procedure is the primary path;
moment determinants are retained as a small-n diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, LostOrthogonality
from .quadrature import DEFAULT_NPTS, discretized_measure
from .weights import GeneralizedJacobiWeight, node_data


@dataclass(frozen=True)
class RecurrenceTable:
    """Recurrence coefficients up to degree N.

    a[0] is an unused placeholder (0.0); a[1..N], b[0..N-1], gamma[0..N]
    are meaningful. gamma_{n-1} = a_n gamma_n by construction.
    """

    a: np.ndarray
    b: np.ndarray
    gamma: np.ndarray

    @property
    def N(self) -> int:
        return len(self.gamma) - 1


def stieltjes_procedure(w: GeneralizedJacobiWeight, t: float, N: int,
                        npts: int = DEFAULT_NPTS) -> RecurrenceTable:
    """Build a_1..a_N, b_0..b_{N-1}, gamma_0..gamma_N by discretized Stieltjes.

    b_n = int w x p_n^2; a_{n+1} is the norm of (x - b_n) p_n - a_n p_{n-1};
    gamma_0 = mu_0^{-1/2}, gamma_{n+1} = gamma_n / a_{n+1}.
    """
    if N < 0:
        raise IndexOutOfRange(f"N must be >= 0, got {N}")
    xs, ws = discretized_measure(w, t, npts)
    width = xs.max() - xs.min()
    floor = 1e-14 * width * width
    mu0 = float(np.sum(ws))
    if mu0 <= 0.0:
        raise LostOrthogonality(f"nonpositive total mass {mu0}")
    a = np.zeros(N + 1)
    b = np.zeros(N)
    gamma = np.zeros(N + 1)
    gamma[0] = mu0 ** -0.5
    p_prev = np.zeros_like(xs)
    p_cur = np.full_like(xs, gamma[0])
    for n in range(N):
        b[n] = float(np.dot(ws, xs * p_cur * p_cur))
        ptil = (xs - b[n]) * p_cur - a[n] * p_prev
        s2 = float(np.dot(ws, ptil * ptil))
        if s2 <= floor:
            raise LostOrthogonality(
                f"norm^2 = {s2} at degree {n + 1} below floor {floor}"
            )
        a[n + 1] = np.sqrt(s2)
        gamma[n + 1] = gamma[n] / a[n + 1]
        p_prev, p_cur = p_cur, ptil / a[n + 1]
    return RecurrenceTable(a=a, b=b, gamma=gamma)


def eval_polynomial(table: RecurrenceTable, n: int, x):
    """Evaluate (p_n(x), p_n'(x), p_{n-1}(x)) by the forward recurrence."""
    if n < 0 or n > table.N:
        raise IndexOutOfRange(f"degree {n} outside table range 0..{table.N}")
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    xv = np.atleast_1d(x_arr)
    p_prev = np.zeros_like(xv)
    d_prev = np.zeros_like(xv)
    p = np.full_like(xv, table.gamma[0])
    d = np.zeros_like(xv)
    for k in range(n):
        an1 = table.a[k + 1]
        xb = xv - table.b[k]
        p_new = (xb * p - table.a[k] * p_prev) / an1
        d_new = (p + xb * d - table.a[k] * d_prev) / an1
        p_prev, p = p, p_new
        d_prev, d = d, d_new
    if scalar:
        return float(p[0]), float(d[0]), float(p_prev[0])
    return p, d, p_prev


def moments(w: GeneralizedJacobiWeight, t: float, nmax: int,
            npts: int = DEFAULT_NPTS) -> np.ndarray:
    """Moments mu_n = int w(u) (u - x_1)^n du for n = 0..nmax."""
    if nmax < 0:
        raise IndexOutOfRange(f"nmax must be >= 0, got {nmax}")
    nd = node_data(w, t)
    xs, ws = discretized_measure(w, t, npts)
    shifted = xs - nd.x[0]
    mu = np.empty(nmax + 1)
    pw = np.ones_like(xs)
    for n in range(nmax + 1):
        mu[n] = np.dot(ws, pw)
        pw = pw * shifted
    return mu


def hankel_det(mu, n: int) -> float:
    """Determinant of the n x n moment matrix [mu_{i+j}], via pivoted LU."""
    mu = np.asarray(mu, dtype=float)
    if n < 0:
        raise IndexOutOfRange(f"n must be >= 0, got {n}")
    if n == 0:
        return 1.0
    if len(mu) < 2 * n - 1:
        raise IndexOutOfRange(
            f"need moments up to 2n-2 = {2 * n - 2}, have {len(mu) - 1}"
        )
    idx = np.arange(n)
    return float(np.linalg.det(mu[idx[:, None] + idx[None, :]]))
