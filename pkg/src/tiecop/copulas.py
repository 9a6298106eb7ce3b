"""Parametric copula families.

A :class:`Family` holds the formulas, vectorised over both the evaluation
points and the parameter, which is what the batched bootstrap loops need.
A :class:`CopulaModel` binds a family to one parameter value and a
dimension.  :class:`Khoudraji` combines two models through Khoudraji's
device ``D(u) = C1(u**(1-s)) * C2(u**s)``.

Textual names (CLI and config files)::

    independence, clayton, gumbel, frank, plackett, normal, t4 (or t<df>),
    surv:<family>, khoudraji(<f1>,<f2>,s1,s2)
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate, special

from . import rng as _rng
from .bivariate import bvn_cdf, bvt_cdf
from .errors import CapabilityError, DomainError

__all__ = [
    "Family",
    "CopulaModel",
    "Khoudraji",
    "INDEPENDENCE",
    "CLAYTON",
    "GUMBEL",
    "FRANK",
    "PLACKETT",
    "NORMAL",
    "StudentT",
    "Survival",
    "get_family",
    "parse_copula",
    "cdf",
    "pdf",
    "sample",
    "tau_of",
    "theta_from_tau",
]

# |theta - theta_indep| below this is treated as the independence copula
INDEP_EPS = 1e-6


def _check_unit(u, open_interval=False):
    u = np.asarray(u, dtype=float)
    if open_interval:
        if np.any((u <= 0) | (u >= 1)):
            raise DomainError("density requires points strictly inside (0,1)^d")
    elif np.any((u < 0) | (u > 1)) or np.any(np.isnan(u)):
        raise DomainError("copula arguments must lie in [0,1]^d")
    return u


def _bisect(f, target, lo, hi, tol, maxiter=200):
    """Solve increasing ``f(x) = target`` on [lo, hi] until ``|f(x) - target| <= tol``."""
    flo, fhi = f(lo) - target, f(hi) - target
    if flo > 0 or fhi < 0:
        raise DomainError(f"target {target} outside attainable range [{flo + target}, {fhi + target}]")
    mid = 0.5 * (lo + hi)
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        fm = f(mid) - target
        if abs(fm) <= tol:
            break
        if fm < 0:
            lo = mid
        else:
            hi = mid
    return mid


class Family:
    """Formulas of a copula family; ``theta`` broadcasts against ``u.shape[:-1]``."""

    name: str = ""
    max_dim: int | None = None
    has_pdf = True

    def validate(self, theta, dim):
        if self.max_dim is not None and dim > self.max_dim:
            raise CapabilityError(f"{self.name} copula is implemented for d <= {self.max_dim}")

    def cdf(self, u, theta):
        raise NotImplementedError

    def logpdf(self, u, theta):
        raise CapabilityError(f"no density available for {self.name}")

    def sample(self, n, theta, dim, rng):
        raise NotImplementedError

    def tau(self, theta):
        raise CapabilityError(f"no Kendall's tau relation for {self.name}")

    def theta_from_tau(self, tau):
        raise CapabilityError(f"no Kendall's tau inversion for {self.name}")

    # parameter handling for the one-dimensional optimisers
    def to_search(self, theta):
        return np.log(theta)

    def from_search(self, x):
        return np.exp(x)

    def search_bracket(self, theta0):
        x0 = float(self.to_search(theta0))
        return x0 - math.log(8.0), x0 + math.log(8.0)

    def __repr__(self):
        return f"<family {self.name}>"


class _Independence(Family):
    name = "independence"
    has_pdf = True

    def validate(self, theta, dim):
        pass

    def cdf(self, u, theta=None):
        return np.prod(u, axis=-1)

    def logpdf(self, u, theta=None):
        return np.zeros(np.shape(u)[:-1])

    def sample(self, n, theta, dim, rng):
        return _rng.uniform01(rng, (n, dim))

    def tau(self, theta=None):
        return 0.0


class _Clayton(Family):
    name = "clayton"

    def validate(self, theta, dim):
        super().validate(theta, dim)
        if not np.all(np.asarray(theta) > 0):
            raise DomainError(f"Clayton parameter must be positive, got {theta}")

    def cdf(self, u, theta):
        theta = np.asarray(theta, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            lu = np.log(u)
            s = np.sum(np.expm1(-theta[..., None] * lu), axis=-1)
            out = np.exp(-np.log1p(s) / theta)
        return np.where(np.any(u == 0, axis=-1), 0.0, out)

    def logpdf(self, u, theta):
        theta = np.asarray(theta, dtype=float)
        lu, lv = np.log(u[..., 0]), np.log(u[..., 1])
        s = np.expm1(-theta * lu) + np.expm1(-theta * lv)
        return np.log1p(theta) - (theta + 1) * (lu + lv) - (2 + 1 / theta) * np.log1p(s)

    def sample(self, n, theta, dim, rng):
        v = _rng.gamma(rng, 1.0 / theta, (n, 1))
        e = rng.standard_exponential((n, dim))
        return np.exp(-np.log1p(e / v) / theta)

    def tau(self, theta):
        return theta / (theta + 2)

    def theta_from_tau(self, tau):
        if not 0 < tau < 1:
            raise DomainError(f"Clayton requires tau in (0,1), got {tau}")
        return 2 * tau / (1 - tau)


class _Gumbel(Family):
    name = "gumbel"

    def validate(self, theta, dim):
        super().validate(theta, dim)
        if not np.all(np.asarray(theta) >= 1):
            raise DomainError(f"Gumbel-Hougaard parameter must be >= 1, got {theta}")

    def cdf(self, u, theta):
        theta = np.asarray(theta, dtype=float)
        with np.errstate(divide="ignore"):
            x = -np.log(u)
        s = np.sum(x ** theta[..., None], axis=-1)
        return np.exp(-(s ** (1 / theta)))

    def logpdf(self, u, theta):
        theta = np.asarray(theta, dtype=float)
        x, y = -np.log(u[..., 0]), -np.log(u[..., 1])
        lx, ly = np.log(x), np.log(y)
        # s = x^theta + y^theta evaluated in log space
        ls = np.logaddexp(theta * lx, theta * ly)
        a = np.exp(ls / theta)
        return -a + x + y + (theta - 1) * (lx + ly) + (1 - 2 * theta) / theta * ls + np.log(a + theta - 1)

    def sample(self, n, theta, dim, rng):
        alpha = 1.0 / theta
        v = _rng.positive_stable(rng, alpha, (n, 1))
        e = rng.standard_exponential((n, dim))
        return np.exp(-((e / v) ** alpha))

    def tau(self, theta):
        return 1 - 1 / theta

    def theta_from_tau(self, tau):
        if not 0 <= tau < 1:
            raise DomainError(f"Gumbel-Hougaard requires tau in [0,1), got {tau}")
        return 1 / (1 - tau)

    def search_bracket(self, theta0):
        lo, hi = super().search_bracket(theta0)
        return max(lo, 0.0), hi

    @staticmethod
    def pickands(t, theta):
        t = np.asarray(t, dtype=float)
        return (t**theta + (1 - t) ** theta) ** (1 / theta)


def _debye1(x):
    """First Debye function D_1(x) for x > 0."""
    val, _ = integrate.quad(lambda s: s / np.expm1(s) if s > 0 else 1.0, 0.0, x, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val / x


class _Frank(Family):
    name = "frank"
    # beyond this the log-series frailty loses accuracy; d=2 falls back to
    # conditional inversion
    FRAILTY_MAX = 35.0

    def validate(self, theta, dim):
        super().validate(theta, dim)
        if dim > 2 and not np.all(np.asarray(theta) > -INDEP_EPS):
            raise DomainError("Frank copulas with d > 2 require theta > 0")

    def cdf(self, u, theta):
        theta = np.asarray(theta, dtype=float)
        small = np.abs(theta) < INDEP_EPS
        th = np.where(small, 1.0, theta)[..., None]
        d = u.shape[-1]
        if d == 2:
            num = np.expm1(-th[..., 0] * u[..., 0]) * np.expm1(-th[..., 0] * u[..., 1])
            out = -np.log1p(num / np.expm1(-th[..., 0])) / th[..., 0]
        else:
            num = np.prod(np.expm1(-th * u), axis=-1)
            out = -np.log1p(num / np.expm1(-th[..., 0]) ** (d - 1)) / th[..., 0]
        return np.where(small, np.prod(u, axis=-1), np.clip(out, 0.0, 1.0))

    def logpdf(self, u, theta):
        theta = np.asarray(theta, dtype=float)
        small = np.abs(theta) < INDEP_EPS
        th = np.where(small, 1.0, theta)
        uu, vv = u[..., 0], u[..., 1]
        # c_{-theta}(u, v) = c_theta(u, 1 - v): evaluate with a positive parameter
        vv = np.where(th < 0, 1 - vv, vv)
        th = np.abs(th)
        em = -np.expm1(-th)
        den = em - np.expm1(-th * uu) * np.expm1(-th * vv)
        out = np.log(th * em) - th * (uu + vv) - 2 * np.log(den)
        return np.where(small, 0.0, out)

    def sample(self, n, theta, dim, rng):
        if abs(theta) < INDEP_EPS:
            return _rng.uniform01(rng, (n, dim))
        if theta > 0 and theta <= self.FRAILTY_MAX:
            v = _rng.log_series(rng, -np.expm1(-theta), (n, 1))
            e = rng.standard_exponential((n, dim))
            return -np.log1p(np.expm1(-theta) * np.exp(-e / v)) / theta
        if dim != 2:
            raise CapabilityError("Frank sampling with theta outside (0, 35] is bivariate only")
        u = _rng.uniform01(rng, n)
        w = _rng.uniform01(rng, n)
        # inverse of the conditional cdf, in log space to survive large |theta|
        lw, l1w = np.log(w), np.log1p(-w)
        num = np.logaddexp(l1w - theta * u, lw - theta)
        den = np.logaddexp(lw, l1w - theta * u)
        v = np.clip(-(num - den) / theta, np.finfo(float).tiny, 1 - np.finfo(float).epsneg)
        return np.column_stack([u, v])

    def tau(self, theta):
        if abs(theta) < INDEP_EPS:
            return theta / 9.0
        a = abs(theta)
        t = 1 + 4 * (_debye1(a) - 1) / a
        return math.copysign(t, theta)

    def theta_from_tau(self, tau):
        if not -1 < tau < 1:
            raise DomainError(f"Frank requires tau in (-1,1), got {tau}")
        if tau == 0:
            return 0.0
        hi = 1.0
        while self.tau(hi) < abs(tau):
            hi *= 2
            if hi > 1e6:
                raise DomainError(f"tau={tau} too close to 1 for Frank inversion")
        th = _bisect(self.tau, abs(tau), 0.0, hi, 1e-10)
        return math.copysign(th, tau)

    def to_search(self, theta):
        return np.asarray(theta, dtype=float)

    def from_search(self, x):
        return np.asarray(x, dtype=float)

    def search_bracket(self, theta0):
        w = 7.0 * max(abs(theta0), 1.0)
        return theta0 - w, theta0 + w


_PL_X, _PL_W = leggauss(128)
_PL_X = 0.5 * (_PL_X + 1)
_PL_W = 0.5 * _PL_W


class _Plackett(Family):
    name = "plackett"
    max_dim = 2

    def validate(self, theta, dim):
        super().validate(theta, dim)
        if not np.all(np.asarray(theta) > 0):
            raise DomainError(f"Plackett parameter must be positive, got {theta}")

    @staticmethod
    def _root(u, v, theta):
        eta = theta - 1
        s = 1 + eta * (u + v)
        return s, np.sqrt(np.maximum(s * s - 4 * theta * eta * u * v, 0.0))

    def cdf(self, u, theta):
        theta = np.asarray(theta, dtype=float)
        uu, vv = u[..., 0], u[..., 1]
        s, root = self._root(uu, vv, theta)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = 2 * theta * uu * vv / (s + root)
        return np.where((uu == 0) | (vv == 0), 0.0, out)

    def logpdf(self, u, theta):
        theta = np.asarray(theta, dtype=float)
        uu, vv = u[..., 0], u[..., 1]
        eta = theta - 1
        s, root = self._root(uu, vv, theta)
        return np.log(theta) + np.log1p(eta * (uu + vv - 2 * uu * vv)) - 3 * np.log(root)

    def sample(self, n, theta, dim, rng):
        u = _rng.uniform01(rng, n)
        w = _rng.uniform01(rng, n)
        if abs(theta - 1) < INDEP_EPS:
            return np.column_stack([u, w])
        a = w * (1 - w)
        b = theta + a * (theta - 1) ** 2
        c = 2 * a * (u * theta**2 + 1 - u) + theta * (1 - 2 * a)
        d = np.sqrt(theta) * np.sqrt(theta + 4 * a * u * (1 - u) * (1 - theta) ** 2)
        v = (c - (1 - 2 * w) * d) / (2 * b)
        return np.column_stack([u, v])

    def tau(self, theta):
        # tau = 1 - 4 * int int dC/du dC/dv du dv on a tensor Gauss-Legendre grid
        return float(_plackett_tau(float(theta)))

    def theta_from_tau(self, tau):
        if not -1 < tau < 1:
            raise DomainError(f"Plackett requires tau in (-1,1), got {tau}")
        x = _bisect(lambda lt: self.tau(math.exp(lt)), tau, -40.0, 40.0, 1e-7)
        return math.exp(x)


@lru_cache(maxsize=4096)
def _plackett_tau(theta):
    if abs(theta - 1) < INDEP_EPS:
        return 0.0
    u = _PL_X[:, None]
    v = _PL_X[None, :]
    s, root = _Plackett._root(u, v, theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        cu = np.nan_to_num(0.5 * (1 - (s - 2 * theta * v) / root), nan=0.5)
        cv = np.nan_to_num(0.5 * (1 - (s - 2 * theta * u) / root), nan=0.5)
    return 1 - 4 * (_PL_W @ (cu * cv) @ _PL_W)


def _equicorr_normals(n, rho, dim, rng):
    if dim == 2 or rho < 0:
        cov = np.full((dim, dim), rho)
        np.fill_diagonal(cov, 1.0)
        try:
            chol = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as exc:
            raise DomainError(f"correlation {rho} is not admissible in dimension {dim}") from exc
        return rng.standard_normal((n, dim)) @ chol.T
    z0 = rng.standard_normal((n, 1))
    z = rng.standard_normal((n, dim))
    return math.sqrt(rho) * z0 + math.sqrt(1 - rho) * z


class _Elliptical(Family):
    max_dim_cdf = 2

    def validate(self, theta, dim):
        rho = np.asarray(theta)
        if not np.all((rho > -1) & (rho < 1)):
            raise DomainError(f"correlation must lie in (-1,1), got {theta}")
        if dim > 2 and np.any(rho <= -1.0 / (dim - 1)):
            raise DomainError(f"equicorrelation {theta} not admissible for d={dim}")

    def tau(self, theta):
        return 2 / np.pi * math.asin(theta)

    def theta_from_tau(self, tau):
        if not -1 < tau < 1:
            raise DomainError(f"tau must lie in (-1,1), got {tau}")
        return math.sin(np.pi * tau / 2)

    def to_search(self, theta):
        return np.arctanh(theta)

    def from_search(self, x):
        return np.tanh(x)

    def search_bracket(self, theta0):
        z0 = float(np.arctanh(theta0))
        return z0 - 2.0, z0 + 2.0

    def _edges(self, u, core):
        """Handle zeros/ones exactly, call ``core`` on the interior points."""
        if u.shape[-1] != 2:
            raise CapabilityError(f"{self.name} copula CDF is implemented for d=2 only")
        uu, vv = u[..., 0], u[..., 1]
        out = np.minimum(uu, vv) * 0.0
        zero = (uu == 0) | (vv == 0)
        one_u, one_v = (uu == 1) & ~zero, (vv == 1) & ~zero
        out = np.where(one_u, vv, out)
        out = np.where(one_v, uu, out)
        mid = ~(zero | one_u | one_v)
        if np.any(mid):
            uc = np.clip(uu, 1e-300, 1 - 1e-16)
            vc = np.clip(vv, 1e-300, 1 - 1e-16)
            out = np.where(mid, core(uc, vc), out)
        return out


class _Normal(_Elliptical):
    name = "normal"

    def cdf(self, u, theta):
        return self._edges(u, lambda a, b: bvn_cdf(special.ndtri(a), special.ndtri(b), theta))

    def logpdf(self, u, theta):
        rho = np.asarray(theta, dtype=float)
        x, y = special.ndtri(u[..., 0]), special.ndtri(u[..., 1])
        r2 = 1 - rho * rho
        return -0.5 * np.log(r2) - (rho * rho * (x * x + y * y) - 2 * rho * x * y) / (2 * r2)

    def sample(self, n, theta, dim, rng):
        z = _equicorr_normals(n, theta, dim, rng)
        return special.ndtr(z)


@dataclass(frozen=True, repr=False)
class StudentT(_Elliptical):
    df: int = 4

    @property
    def name(self):
        return f"t{self.df}"

    def cdf(self, u, theta):
        nu = self.df
        return self._edges(
            u, lambda a, b: bvt_cdf(special.stdtrit(nu, a), special.stdtrit(nu, b), theta, nu)
        )

    def logpdf(self, u, theta):
        nu = self.df
        rho = np.asarray(theta, dtype=float)
        x, y = special.stdtrit(nu, u[..., 0]), special.stdtrit(nu, u[..., 1])
        r2 = 1 - rho * rho
        const = special.gammaln((nu + 2) / 2) + special.gammaln(nu / 2) - 2 * special.gammaln((nu + 1) / 2)
        q = (x * x - 2 * rho * x * y + y * y) / (nu * r2)
        return (
            const
            - 0.5 * np.log(r2)
            - (nu + 2) / 2 * np.log1p(q)
            + (nu + 1) / 2 * (np.log1p(x * x / nu) + np.log1p(y * y / nu))
        )

    def sample(self, n, theta, dim, rng):
        z = _equicorr_normals(n, theta, dim, rng)
        w = _rng.chi_squared(rng, self.df, (n, 1))
        return special.stdtr(self.df, z / np.sqrt(w / self.df))


@dataclass(frozen=True, repr=False)
class Survival(Family):
    """Law of ``1 - U`` for ``U`` from the inner family."""

    inner: Family = None

    @property
    def name(self):
        return f"surv:{self.inner.name}"

    @property
    def has_pdf(self):
        return self.inner.has_pdf

    def validate(self, theta, dim):
        self.inner.validate(theta, dim)

    def cdf(self, u, theta):
        d = u.shape[-1]
        a = 1 - u
        total = np.zeros(u.shape[:-1])
        theta = np.asarray(theta, dtype=float) if theta is not None else None
        for size in range(d + 1):
            for subset in itertools.combinations(range(d), size):
                pt = np.ones_like(u)
                idx = list(subset)
                pt[..., idx] = a[..., idx]
                total = total + (-1) ** size * self.inner.cdf(pt, theta)
        # inclusion-exclusion leaves rounding residue on the lower boundary
        return np.where(np.any(u == 0, axis=-1), 0.0, np.clip(total, 0.0, 1.0))

    def logpdf(self, u, theta):
        return self.inner.logpdf(1 - u, theta)

    def sample(self, n, theta, dim, rng):
        return 1 - self.inner.sample(n, theta, dim, rng)

    def tau(self, theta):
        return self.inner.tau(theta)

    def theta_from_tau(self, tau):
        return self.inner.theta_from_tau(tau)

    def to_search(self, theta):
        return self.inner.to_search(theta)

    def from_search(self, x):
        return self.inner.from_search(x)

    def search_bracket(self, theta0):
        return self.inner.search_bracket(theta0)


INDEPENDENCE = _Independence()
CLAYTON = _Clayton()
GUMBEL = _Gumbel()
FRANK = _Frank()
PLACKETT = _Plackett()
NORMAL = _Normal()

_BASE = {
    "independence": INDEPENDENCE,
    "indep": INDEPENDENCE,
    "clayton": CLAYTON,
    "gumbel": GUMBEL,
    "gh": GUMBEL,
    "frank": FRANK,
    "plackett": PLACKETT,
    "normal": NORMAL,
}


def get_family(name: str) -> Family:
    key = name.strip().lower()
    if key.startswith("surv:"):
        return Survival(get_family(key[5:]))
    if key in _BASE:
        return _BASE[key]
    m = re.fullmatch(r"t(\d+)", key)
    if m:
        return StudentT(int(m.group(1)))
    raise DomainError(f"unknown copula family {name!r}")


@dataclass(frozen=True)
class CopulaModel:
    family: Family
    theta: float | None = None
    dim: int = 2

    def __post_init__(self):
        if self.dim < 2:
            raise DomainError("copula dimension must be at least 2")
        if self.family is not INDEPENDENCE:
            if self.theta is None:
                raise DomainError(f"{self.family.name} needs a parameter")
            self.family.validate(self.theta, self.dim)

    @property
    def name(self):
        return self.family.name

    def cdf(self, u):
        u = _check_unit(u)
        if u.shape[-1] != self.dim:
            raise DomainError(f"expected points of dimension {self.dim}")
        return self.family.cdf(u, self.theta)

    def pdf(self, u):
        return np.exp(self.logpdf(u))

    def logpdf(self, u):
        u = _check_unit(u, open_interval=True)
        if self.dim != 2 or u.shape[-1] != 2:
            raise CapabilityError("densities are implemented for bivariate copulas only")
        return self.family.logpdf(u, self.theta)

    def sample(self, n, rng):
        if n < 1:
            raise DomainError("sample size must be positive")
        return self.family.sample(int(n), self.theta, self.dim, rng)

    def tau(self):
        if self.dim != 2:
            raise CapabilityError("Kendall's tau relation is for bivariate models")
        return float(self.family.tau(self.theta))

    @classmethod
    def from_tau(cls, family, tau, dim=2):
        fam = get_family(family) if isinstance(family, str) else family
        if fam is INDEPENDENCE:
            return cls(fam, None, dim)
        return cls(fam, fam.theta_from_tau(tau), dim)

    def __str__(self):
        if self.theta is None:
            return self.family.name
        return f"{self.family.name}(theta={self.theta:.6g})"


@dataclass(frozen=True)
class Khoudraji:
    c1: CopulaModel
    c2: CopulaModel
    shapes: tuple = field(default=(0.5, 0.5))

    def __post_init__(self):
        s = tuple(float(x) for x in self.shapes)
        if len(s) != self.c1.dim or self.c1.dim != self.c2.dim:
            raise DomainError("Khoudraji components and shape vector must share a dimension")
        if any(not 0 <= x <= 1 for x in s):
            raise DomainError(f"Khoudraji shapes must lie in [0,1], got {s}")
        object.__setattr__(self, "shapes", s)

    @property
    def dim(self):
        return self.c1.dim

    @property
    def name(self):
        return f"khoudraji({self.c1.name},{self.c2.name},{','.join(f'{x:g}' for x in self.shapes)})"

    def cdf(self, u):
        u = _check_unit(u)
        s = np.asarray(self.shapes)
        return self.c1.cdf(u ** (1 - s)) * self.c2.cdf(u**s)

    def pdf(self, u):
        raise CapabilityError("Khoudraji densities are not implemented")

    logpdf = pdf

    def sample(self, n, rng):
        v = self.c1.sample(n, rng)
        w = self.c2.sample(n, rng)
        out = np.empty_like(v)
        for j, s in enumerate(self.shapes):
            if s == 0:
                out[:, j] = v[:, j]
            elif s == 1:
                out[:, j] = w[:, j]
            else:
                out[:, j] = np.maximum(v[:, j] ** (1 / (1 - s)), w[:, j] ** (1 / s))
        return out

    def tau(self):
        raise CapabilityError("no closed-form Kendall's tau for Khoudraji copulas")

    def __str__(self):
        return f"khoudraji({self.c1},{self.c2},s={self.shapes})"


def parse_copula(spec: str, tau: float | None = None, dim: int = 2):
    """Build a model from its textual name; ``tau`` sets every non-independence part."""
    spec = spec.strip()
    m = re.fullmatch(r"khoudraji\((.*)\)", spec, flags=re.IGNORECASE)
    if m:
        parts = [p.strip() for p in m.group(1).split(",")]
        if len(parts) != 2 + dim:
            raise DomainError(f"khoudraji spec needs two families and {dim} shapes: {spec!r}")
        c1 = parse_copula(parts[0], tau, dim)
        c2 = parse_copula(parts[1], tau, dim)
        return Khoudraji(c1, c2, tuple(float(x) for x in parts[2:]))
    fam = get_family(spec)
    if fam is INDEPENDENCE:
        return CopulaModel(fam, None, dim)
    if tau is None:
        raise DomainError(f"family {spec!r} needs a Kendall's tau")
    base = fam.inner if isinstance(fam, Survival) else fam
    if tau == 0 and base is CLAYTON:
        # Clayton's tau = 0 limit is the independence copula
        return CopulaModel(INDEPENDENCE, None, dim)
    return CopulaModel.from_tau(fam, tau, dim)


# functional aliases


def cdf(model, u):
    return model.cdf(u)


def pdf(model, u):
    return model.pdf(u)


def sample(model, n, rng):
    return model.sample(n, rng)


def tau_of(model):
    return model.tau()


def theta_from_tau(family, tau):
    fam = get_family(family) if isinstance(family, str) else family
    return fam.theta_from_tau(tau)
