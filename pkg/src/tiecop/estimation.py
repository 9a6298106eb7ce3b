"""One-parameter copula estimation: tau-b inversion and maximum pseudo-likelihood."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .copulas import CLAYTON, GUMBEL, Family, Survival, get_family
from .empirical import tau_b_batch
from .errors import CapabilityError, DomainError, FitError
from .ranks import PseudoSample, RankMode, as_data_matrix

__all__ = ["Estimator", "FitResult", "fit_itau", "fit_mpl"]

TAU_FLOOR = 1e-4
TAU_CEIL = 1 - 1e-6
MPL_RTOL = 1e-8
MPL_MAXITER = 200
_INVPHI = (math.sqrt(5) - 1) / 2


class Estimator(str, enum.Enum):
    ITAU = "itau"
    MPL = "mpl"


@dataclass
class FitResult:
    theta: float
    method: Estimator
    loglik: float | None = None
    iterations: int = 0
    converged: bool = True
    flags: dict = field(default_factory=dict)


def _family(family) -> Family:
    return get_family(family) if isinstance(family, str) else family


def _positive_only(fam: Family) -> bool:
    base = fam.inner if isinstance(fam, Survival) else fam
    return base is CLAYTON or base is GUMBEL


def _clamp_tau(fam, tau):
    """Clamp tau-b into the attainable range; returns (clamped tau, was_clamped)."""
    tau = np.asarray(tau, dtype=float)
    lo = TAU_FLOOR if _positive_only(fam) else -TAU_CEIL
    out = np.clip(tau, lo, TAU_CEIL)
    return out, out != tau


def theta_from_tau_batch(fam: Family, taus) -> np.ndarray:
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    return np.array([fam.theta_from_tau(float(t)) for t in taus])


def fit_itau(data, family) -> FitResult:
    """Invert Kendall's tau-b of the data within ``family``."""
    fam = _family(family)
    x = as_data_matrix(data)
    if x.shape[1] != 2:
        raise CapabilityError("tau inversion is implemented for bivariate data")
    tau = float(tau_b_batch(x[:, 0], x[:, 1]))
    t, clamped = _clamp_tau(fam, tau)
    theta = fam.theta_from_tau(float(t))
    return FitResult(float(theta), Estimator.ITAU, flags={"tau_b": tau, "tau_clamped": bool(clamped)})


def _loglik(fam, u, theta):
    with np.errstate(all="ignore"):
        ll = np.sum(fam.logpdf(u, np.asarray(theta)[..., None]), axis=-1)
    return np.where(np.isfinite(ll), ll, -np.inf)


def mpl_batch(fam: Family, u, theta0):
    """Maximise the pseudo-log-likelihood for a batch of samples at once.

    ``u`` has shape (B, n, 2), ``theta0`` shape (B,).  Golden-section search
    in the family's search coordinate over a bracket around ``theta0``.
    Returns (theta, loglik, iterations, converged, failed) arrays.
    """
    u = np.asarray(u, dtype=float)
    theta0 = np.asarray(theta0, dtype=float)
    brackets = np.array([fam.search_bracket(float(t)) for t in theta0])
    a, b = brackets[:, 0].copy(), brackets[:, 1].copy()

    def f(x):
        return _loglik(fam, u, fam.from_search(x))

    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    iters = np.zeros(len(theta0), dtype=int)
    done = np.zeros(len(theta0), dtype=bool)
    for it in range(1, MPL_MAXITER + 1):
        left = fc >= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        c_new = np.where(left, b - _INVPHI * (b - a), d)
        d_new = np.where(left, c, a + _INVPHI * (b - a))
        x_new = np.where(left, c_new, d_new)
        f_new = f(x_new)
        fc, fd = np.where(left, f_new, fd), np.where(left, fc, f_new)
        c, d = c_new, d_new
        width = b - a
        newly = ~done & (width < MPL_RTOL * np.maximum(1.0, np.abs(0.5 * (a + b))))
        iters[newly] = it
        done |= newly
        if done.all():
            break
    iters[~done] = MPL_MAXITER
    best_x = np.where(fc >= fd, c, d)
    best_f = np.maximum(fc, fd)
    theta = fam.from_search(best_x)
    ll0 = _loglik(fam, u, theta0)
    keep_init = ll0 > best_f
    theta = np.where(keep_init, theta0, theta)
    best_f = np.where(keep_init, ll0, best_f)
    failed = ~np.isfinite(best_f)
    return theta, best_f, iters, done, failed


def fit_mpl(ps_avg: PseudoSample, family) -> FitResult:
    """Maximum pseudo-likelihood estimate, initialised at the tau-b inversion."""
    fam = _family(family)
    if ps_avg.d != 2:
        raise CapabilityError("pseudo-likelihood fitting is implemented for bivariate samples")
    if not fam.has_pdf:
        raise CapabilityError(f"{fam.name} has no density")
    if ps_avg.mode is not RankMode.AVERAGE:
        raise DomainError("MPL uses average-rank pseudo-observations")
    init = fit_itau(ps_avg.ranks, fam)
    theta, ll, iters, conv, failed = mpl_batch(fam, ps_avg.values[None], np.array([init.theta]))
    diag = {"theta_init": init.theta, "iterations": int(iters[0]), "loglik": float(ll[0])}
    if failed[0]:
        raise FitError("pseudo-log-likelihood is not finite anywhere in the search bracket", diag)
    if not conv[0]:
        raise FitError("golden-section search did not converge", diag)
    return FitResult(
        float(theta[0]),
        Estimator.MPL,
        loglik=float(ll[0]),
        iterations=int(iters[0]),
        converged=True,
        flags={"theta_init": init.theta, **init.flags},
    )
