"""Splittable, reproducible random streams.

A stream is identified by a master seed and a path of child indices, e.g.
``(42, [3, 17])`` for replicate 17 of repetition 3.  Streams are built on
numpy's counter-based Philox bit generator keyed through ``SeedSequence``
spawn keys, so any stream can be materialised directly without burning
through its ancestors.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "SeedSpec",
    "derive_stream",
    "uniform01",
    "standard_normal",
    "gamma",
    "positive_stable",
    "log_series",
    "chi_squared",
]


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    stream_path: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise DomainError("master_seed must be a 64-bit unsigned integer")
        path = tuple(int(p) for p in self.stream_path)
        if any(p < 0 for p in path):
            raise DomainError("stream_path entries must be non-negative")
        object.__setattr__(self, "stream_path", path)

    def child(self, index: int) -> "SeedSpec":
        return derive_stream(self, index)

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of this stream."""
        ss = np.random.SeedSequence(entropy=self.master_seed, spawn_key=self.stream_path)
        return np.random.Generator(np.random.Philox(ss))

    def path_str(self) -> str:
        return "/".join(str(p) for p in self.stream_path)

    def to_dict(self) -> dict:
        return {"master_seed": self.master_seed, "stream_path": list(self.stream_path)}


def derive_stream(seed: SeedSpec, child: int) -> SeedSpec:
    if child < 0:
        raise DomainError("child index must be non-negative")
    return SeedSpec(seed.master_seed, seed.stream_path + (int(child),))


def uniform01(rng: np.random.Generator, size=None):
    """Uniform variates on the open interval (0, 1).

    ``Generator.random`` samples [0, 1); exact zeros are redrawn.
    """
    u = rng.random(size)
    if size is None:
        while u == 0.0:
            u = rng.random()
        return u
    bad = u == 0.0
    while bad.any():
        u[bad] = rng.random(int(bad.sum()))
        bad = u == 0.0
    return u


def standard_normal(rng: np.random.Generator, size=None):
    return rng.standard_normal(size)


def gamma(rng: np.random.Generator, shape: float, size=None):
    if not shape > 0:
        raise DomainError(f"gamma shape must be positive, got {shape}")
    return rng.standard_gamma(shape, size)


def positive_stable(rng: np.random.Generator, alpha: float, size=None):
    """Positive alpha-stable variates with Laplace transform exp(-s**alpha).

    Chambers-Mallows-Stuck construction (Kanter's form for the totally
    skewed case).  ``alpha == 1`` is the point mass at one.
    """
    if not 0 < alpha <= 1:
        raise DomainError(f"stable index must lie in (0, 1], got {alpha}")
    if alpha == 1:
        return 1.0 if size is None else np.ones(size)
    theta = np.pi * uniform01(rng, size)
    e = rng.standard_exponential(size)
    a = np.sin(alpha * theta) / np.sin(theta) ** (1.0 / alpha)
    b = (np.sin((1.0 - alpha) * theta) / e) ** ((1.0 - alpha) / alpha)
    return a * b


def log_series(rng: np.random.Generator, p: float, size=None):
    if not 0 < p < 1:
        raise DomainError(f"log-series parameter must lie in (0, 1), got {p}")
    return rng.logseries(p, size)


def chi_squared(rng: np.random.Generator, df: int, size=None):
    if df <= 0 or int(df) != df:
        raise DomainError(f"chi-squared degrees of freedom must be a positive integer, got {df}")
    return rng.chisquare(df, size)
