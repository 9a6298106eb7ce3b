"""Test statistics R_nC, R_nA, Q_n, T_n and S_n.

The public functions take a single pseudo-sample (or data matrix); the
underscored helpers take rank arrays with leading batch axes so a whole
set of bootstrap replicates is evaluated in one call.  Counts of the
empirical copula are kept as integers until the final division, which is
what makes the brute-force comparisons in the test-suite exact.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .empirical import PickandsCurve
from .errors import CapabilityError, DomainError
from .ranks import PseudoSample, RankMode, as_data_matrix

__all__ = [
    "StatName",
    "StatisticValue",
    "stat_RnC",
    "stat_RnA",
    "stat_Qn",
    "stat_Tn",
    "stat_Sn",
    "tn_counts",
    "RNA_NODES",
]

RNA_NODES = 1001


class StatName(str, enum.Enum):
    RnC = "RnC"
    RnA = "RnA"
    Qn = "Qn"
    Tn = "Tn"
    Sn = "Sn"


@dataclass(frozen=True)
class StatisticValue:
    name: StatName
    value: float
    n: int


def _leq_counts(points, at):
    # counts[..., i] = #{k : points[..., k, :] <= at[..., i, :]}
    return np.sum(np.all(points[..., None, :, :] <= at[..., :, None, :], axis=-1), axis=-1)


def _rnc(ranks):
    n = ranks.shape[-2]
    direct = _leq_counts(ranks, ranks)
    swapped = _leq_counts(ranks, ranks[..., ::-1])
    diff = direct - swapped
    return np.sum(diff * diff, axis=-1) / n**2


def _qn(ranks):
    n = ranks.shape[-2]
    direct = _leq_counts(ranks, ranks)
    refl = _leq_counts(n + 1 - ranks, ranks)
    diff = direct - refl
    return np.sum(diff * diff, axis=-1) / n**2


def _rna_single(ps, nodes=RNA_NODES):
    t = np.linspace(0.0, 1.0, nodes)
    a = PickandsCurve(ps)(t)
    # the grid is symmetric, so A(1 - t_i) is the reversed vector
    g = (a - a[::-1]) ** 2
    return ps.n * simpson(g, x=t)


def _rna(ranks, nodes=RNA_NODES):
    flat = ranks.reshape(-1, *ranks.shape[-2:])
    out = np.array([_rna_single(PseudoSample(r, RankMode.AVERAGE), nodes) for r in flat])
    return out.reshape(ranks.shape[:-2])


def _require_bivariate(ps):
    if ps.d != 2:
        raise CapabilityError("this statistic is defined for bivariate samples")


def stat_RnC(ps: PseudoSample) -> float:
    """Sum over the sample of (C_n(U_i1, U_i2) - C_n(U_i2, U_i1))**2."""
    _require_bivariate(ps)
    return float(_rnc(ps.ranks))


def stat_RnA(ps: PseudoSample, nodes: int = RNA_NODES) -> float:
    """n times the integral of (A_n(t) - A_n(1-t))**2, composite Simpson rule."""
    _require_bivariate(ps)
    return float(_rna_single(ps, nodes))


def stat_Qn(ps: PseudoSample) -> float:
    """Sum over the sample of (C_n(U_i) - survival C_n(U_i))**2."""
    return float(_qn(ps.ranks))


def _tn_indicator(x):
    i = np.all(x[..., :, None, :] <= x[..., None, :, :], axis=-1)
    n = x.shape[-2]
    i[..., np.arange(n), np.arange(n)] = False
    return i


def tn_counts(data):
    """Integer sums (sum_{i!=j} I_ij, sum_{i!=j!=k} I_ij I_kj) behind T_n."""
    x = np.asarray(data, dtype=float)
    ind = _tn_indicator(x)
    col = ind.sum(axis=-2).astype(np.int64)
    return col.sum(axis=-1), (col * (col - 1)).sum(axis=-1)


def _tn_from_counts(s1, s2, n):
    return -1 + 8 * s1 / (n * (n - 1)) - 9 * s2 / (n * (n - 1) * (n - 2))


def _tn(x):
    n = x.shape[-2]
    s1, s2 = tn_counts(x)
    return _tn_from_counts(s1, s2, n)


def tn_leave_one_out(data) -> np.ndarray:
    """T_n recomputed with each row deleted in turn, in O(n^2) overall."""
    x = as_data_matrix(data, min_rows=4)
    n = x.shape[0]
    ind = _tn_indicator(x).astype(np.int64)
    col = ind.sum(axis=0)
    row = ind.sum(axis=1)
    s1 = col.sum() - row - col
    f = col * (col - 1)
    s2 = f.sum() - f - ind @ (2 * (col - 1))
    return _tn_from_counts(s1, s2, n - 1)


def stat_Tn(data) -> float:
    x = as_data_matrix(data, min_rows=3)
    if x.shape[1] != 2:
        raise CapabilityError("T_n is defined for bivariate data")
    return float(_tn(x))


def _sn(ranks_max, family, theta):
    """Batched S_n; ``theta`` has the batch shape of ``ranks_max``."""
    n = ranks_max.shape[-2]
    counts = _leq_counts(ranks_max, ranks_max)
    u = ranks_max / (n + 1)
    fitted = family.cdf(u, np.asarray(theta, dtype=float)[..., None])
    return np.sum((counts / n - fitted) ** 2, axis=-1)


def stat_Sn(ps_max: PseudoSample, model) -> float:
    """Sum of squared gaps between C_n and the fitted copula at the pseudo-observations.

    ``model`` is anything exposing ``cdf(points)``.
    """
    if ps_max.mode is not RankMode.MAXIMAL:
        raise DomainError("S_n is computed from maximal-rank pseudo-observations")
    counts = _leq_counts(ps_max.ranks, ps_max.ranks)
    fitted = np.asarray(model.cdf(ps_max.values), dtype=float)
    return float(np.sum((counts / ps_max.n - fitted) ** 2))
