"""Nonparametric estimators: empirical copulas, CFG Pickands curve, Kendall's tau-b."""
from __future__ import annotations

import numpy as np

from .errors import CapabilityError, DegenerateInputError, DomainError
from .ranks import PseudoSample, as_data_matrix

__all__ = [
    "empirical_copula",
    "survival_empirical_copula",
    "PickandsCurve",
    "cfg_pickands",
    "kendall_tau_b",
]

EULER_GAMMA = float(np.euler_gamma)


def _count_leq(points, at):
    """``counts[..., m] = #{i : points[..., i, :] <= at[..., m, :]}`` (componentwise)."""
    return np.sum(np.all(points[..., None, :, :] <= at[..., :, None, :], axis=-1), axis=-1)


def empirical_copula(ps: PseudoSample, u) -> np.ndarray:
    """C_n(u) = (1/n) #{i : U_i <= u}; ``u`` is one point or an (m, d) array."""
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != ps.d:
        raise DomainError(f"expected points of dimension {ps.d}")
    pts = np.atleast_2d(u)
    out = _count_leq(ps.values, pts) / ps.n
    return out.reshape(u.shape[:-1]) if u.ndim > 1 else float(out[0])


def survival_empirical_copula(ps: PseudoSample, u) -> np.ndarray:
    """Empirical CDF of the reflected pseudo-sample ``1 - U_i``."""
    return empirical_copula(ps.reflected(), u)


class PickandsCurve:
    """Endpoint-corrected rank-based CFG estimator of the Pickands function.

    With ``a_i = log(-log U_i1)`` and ``b_i = log(-log U_i2)`` the minimum in
    ``log xi_i(t)`` picks the first branch exactly when
    ``a_i - b_i <= log((1 - t) / t)``, so sorting ``a_i - b_i`` once gives
    the sum at any ``t`` by a binary search.  After endpoint correction the
    Euler constant cancels.
    """

    def __init__(self, ps: PseudoSample):
        if ps.d != 2:
            raise CapabilityError("the CFG estimator is bivariate")
        u = ps.values
        a = np.log(-np.log(u[:, 0]))
        b = np.log(-np.log(u[:, 1]))
        order = np.argsort(a - b)
        self.n = ps.n
        self._diff = (a - b)[order]
        self._cum_a = np.concatenate([[0.0], np.cumsum(a[order])])
        # prefix sums; the b-branch needs suffix sums, taken by difference
        self._cum_b = np.concatenate([[0.0], np.cumsum(b[order])])
        self._mean_a = a.mean()
        self._mean_b = b.mean()

    def log_uncorrected(self, t):
        """log of the raw CFG estimate (Euler constant included)."""
        return -EULER_GAMMA - self._sum_log_xi(t) / self.n

    def _sum_log_xi(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            l1t, lt = np.log1p(-t), np.log(t)
            c = l1t - lt
            m = np.searchsorted(self._diff, c, side="right")
            s = self._cum_a[m] - m * l1t + (self._cum_b[-1] - self._cum_b[m]) - (self.n - m) * lt
        s = np.where(t == 0, self._cum_a[-1], s)
        return np.where(t == 1, self._cum_b[-1], s)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any((t < 0) | (t > 1)):
            raise DomainError("Pickands curve is defined on [0,1]")
        log_a = -self._sum_log_xi(t) / self.n + (1 - t) * self._mean_a + t * self._mean_b
        a = np.exp(log_a)
        return np.clip(a, np.maximum(t, 1 - t), 1.0)


def cfg_pickands(ps: PseudoSample, t):
    out = PickandsCurve(ps)(t)
    return float(out) if np.ndim(out) == 0 else out


def _tau_b_parts(x, y, chunk=256):
    """Concordance balance and tie counts along the last axis (batched)."""
    n = x.shape[-1]
    s = np.zeros(x.shape[:-1])
    tx = np.zeros(x.shape[:-1])
    ty = np.zeros(x.shape[:-1])
    for start in range(0, n, chunk):
        sl = slice(start, min(start + chunk, n))
        dx = np.sign(x[..., sl, None] - x[..., None, :])
        dy = np.sign(y[..., sl, None] - y[..., None, :])
        s += np.sum(dx * dy, axis=(-2, -1))
        tx += np.sum(dx == 0, axis=(-2, -1))
        ty += np.sum(dy == 0, axis=(-2, -1))
    n0 = n * (n - 1) / 2
    # ordered pairs counted twice; the diagonal adds n self-ties
    return s / 2, n0, (tx - n) / 2, (ty - n) / 2


def tau_b_batch(x, y):
    s, n0, n1, n2 = _tau_b_parts(np.asarray(x, float), np.asarray(y, float))
    den = (n0 - n1) * (n0 - n2)
    if np.any(den <= 0):
        raise DegenerateInputError("Kendall's tau-b undefined: a column is constant")
    return s / np.sqrt(den)


def kendall_tau_b(data) -> float:
    x = as_data_matrix(data)
    if x.shape[1] != 2:
        raise CapabilityError("Kendall's tau-b is computed for bivariate data")
    return float(tau_b_batch(x[:, 0], x[:, 1]))
