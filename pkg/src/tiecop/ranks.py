"""Ranks, pseudo-observations and tie templates.

Everything here works in *rank units*: a pseudo-observation is stored as its
(average or maximal) rank and only divided by ``n + 1`` on request.  Ranks
are multiples of 1/2, hence exact in floating point, which keeps the
comparisons inside the empirical copula exact as well.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import DomainError

__all__ = [
    "RankMode",
    "PseudoSample",
    "TieTemplate",
    "as_data_matrix",
    "compute_ranks",
    "pseudo_observations",
    "tie_template",
    "impose_tie_structure",
    "tie_group_sizes",
]


class RankMode(str, enum.Enum):
    AVERAGE = "average"
    MAXIMAL = "max"


def as_data_matrix(data, min_rows: int = 2) -> np.ndarray:
    x = np.asarray(data, dtype=float)
    if x.ndim != 2:
        raise DomainError(f"expected an n x d matrix, got shape {x.shape}")
    n, d = x.shape
    if n < min_rows or d < 2:
        raise DomainError(f"need n >= {min_rows} rows and d >= 2 columns, got {x.shape}")
    if not np.isfinite(x).all():
        raise DomainError("data contain missing or non-finite entries")
    return x


def compute_ranks(x, mode: RankMode = RankMode.AVERAGE, axis: int = 0) -> np.ndarray:
    """Ranks along ``axis``; average mode gives midranks, maximal mode counts ``<=``."""
    x = np.asarray(x, dtype=float)
    if x.size == 0 or x.shape[axis] == 0:
        raise DomainError("cannot rank an empty column")
    return rankdata(x, method=RankMode(mode).value, axis=axis).astype(float)


@dataclass(frozen=True)
class PseudoSample:
    ranks: np.ndarray
    mode: RankMode

    @property
    def n(self) -> int:
        return self.ranks.shape[0]

    @property
    def d(self) -> int:
        return self.ranks.shape[1]

    @property
    def values(self) -> np.ndarray:
        return self.ranks / (self.n + 1)

    def reflected(self) -> "PseudoSample":
        """Pseudo-sample of ``1 - U`` (ranks ``n + 1 - R``)."""
        return PseudoSample(self.n + 1 - self.ranks, self.mode)


def pseudo_observations(data, mode: RankMode = RankMode.AVERAGE) -> PseudoSample:
    x = as_data_matrix(data)
    return PseudoSample(compute_ranks(x, mode, axis=0), RankMode(mode))


@dataclass(frozen=True)
class TieTemplate:
    """Per-column sorted average ranks of the original data."""

    S: np.ndarray

    @property
    def n(self) -> int:
        return self.S.shape[0]

    @property
    def d(self) -> int:
        return self.S.shape[1]

    @property
    def is_tie_free(self) -> bool:
        return bool(np.all(self.S == np.arange(1, self.n + 1)[:, None]))

    def group_sizes(self) -> list[list[int]]:
        return [tie_group_sizes(self.S[:, j]) for j in range(self.d)]


def tie_template(data) -> TieTemplate:
    x = as_data_matrix(data)
    return TieTemplate(np.sort(compute_ranks(x, RankMode.AVERAGE, axis=0), axis=0))


def impose_tie_structure(sample, template: TieTemplate) -> np.ndarray:
    """Give each column of ``sample`` the tie pattern of the template.

    Within column j the position holding the i-th smallest entry receives the
    order statistic ``V_(floor(S_ij))`` of that column.  Exact ties in the
    input are ordered by row index.  Leading axes of ``sample`` (if any) are
    treated as a batch of independent samples sharing one template.
    """
    v = np.asarray(sample, dtype=float)
    if v.ndim < 2 or v.shape[-2:] != template.S.shape:
        raise DomainError(
            f"sample shape {v.shape} does not match template shape {template.S.shape}"
        )
    order = np.argsort(v, axis=-2, kind="stable")
    v_sorted = np.take_along_axis(v, order, axis=-2)
    idx = np.floor(template.S).astype(np.intp) - 1
    idx = np.broadcast_to(idx, v.shape)
    picked = np.take_along_axis(v_sorted, idx, axis=-2)
    out = np.empty_like(v)
    np.put_along_axis(out, order, picked, axis=-2)
    return out


def tie_group_sizes(column) -> list[int]:
    """Sorted multiset of tie-group sizes of a single column."""
    _, counts = np.unique(np.asarray(column), return_counts=True)
    return sorted(counts.tolist())
