import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import stats

from tiecop.copulas import CopulaModel, get_family
from tiecop.empirical import (
    PickandsCurve,
    cfg_pickands,
    empirical_copula,
    kendall_tau_b,
    survival_empirical_copula,
    tau_b_batch,
)
from tiecop.errors import DegenerateInputError, DomainError
from tiecop.ranks import PseudoSample, RankMode, pseudo_observations
from tiecop.rng import SeedSpec


def test_empirical_copula_bounds():
    rng = np.random.default_rng(0)
    ps = pseudo_observations(rng.random((20, 2)))
    assert empirical_copula(ps, [1.0, 1.0]) == 1.0
    assert empirical_copula(ps, [0.5 / 21, 0.9]) == 0.0


def test_empirical_copula_two_points():
    ps = PseudoSample(np.array([[1.0, 1.0], [2.0, 2.0]]), RankMode.AVERAGE)
    assert empirical_copula(ps, [0.5, 0.5]) == 0.5


def test_empirical_copula_matches_loop():
    rng = np.random.default_rng(1)
    ps = pseudo_observations(rng.integers(0, 8, size=(50, 2)))
    u = rng.random((100, 2))
    brute = [np.mean([(p[0] <= a) and (p[1] <= b) for p in ps.values]) for a, b in u]
    assert np.array_equal(empirical_copula(ps, u), brute)


def test_empirical_copula_monotone():
    rng = np.random.default_rng(2)
    ps = pseudo_observations(rng.random((40, 3)))
    u = rng.random((200, 3))
    bumped = u + 0.1 * rng.random((200, 3))
    assert np.all(empirical_copula(ps, np.minimum(bumped, 1)) >= empirical_copula(ps, u))


def test_dimension_mismatch():
    ps = pseudo_observations(np.random.default_rng(0).random((10, 2)))
    with pytest.raises(DomainError):
        empirical_copula(ps, [0.5, 0.5, 0.5])


def test_survival_empirical_copula():
    rng = np.random.default_rng(3)
    ps = pseudo_observations(rng.random((30, 2)))
    u = rng.random((20, 2))
    assert np.array_equal(survival_empirical_copula(ps, u), empirical_copula(ps.reflected(), u))
    assert survival_empirical_copula(ps, [1.0, 1.0]) == 1.0


def test_self_reflected_sample():
    r = np.array([[1, 2], [2, 4], [3, 3], [4, 1], [5, 5]], dtype=float)
    r = np.vstack([r, 11 - r])  # n = 10, closed under R -> n + 1 - R
    ps = PseudoSample(r, RankMode.AVERAGE)
    assert np.array_equal(empirical_copula(ps, ps.values), survival_empirical_copula(ps, ps.values))


# --- Pickands


def test_pickands_endpoints_and_envelope():
    ps = pseudo_observations(np.random.default_rng(4).random((50, 2)))
    assert cfg_pickands(ps, 0.0) == 1.0
    assert cfg_pickands(ps, 1.0) == 1.0
    t = np.linspace(0, 1, 501)
    a = cfg_pickands(ps, t)
    assert np.all(a >= np.maximum(t, 1 - t)) and np.all(a <= 1)


def test_pickands_matches_direct_evaluation():
    ps = pseudo_observations(np.random.default_rng(5).random((60, 2)))
    u = ps.values
    t = np.linspace(0.01, 0.99, 37)
    xi = np.minimum(-np.log(u[:, [0]]) / (1 - t), -np.log(u[:, [1]]) / t)
    log_raw = -np.euler_gamma - np.mean(np.log(xi), axis=0)
    curve = PickandsCurve(ps)
    assert np.allclose(curve.log_uncorrected(t), log_raw, atol=1e-12)
    # endpoint correction: subtract the t=0 and t=1 raw values linearly
    l0 = -np.euler_gamma - np.mean(np.log(-np.log(u[:, 0])))
    l1 = -np.euler_gamma - np.mean(np.log(-np.log(u[:, 1])))
    corrected = np.exp(log_raw - (1 - t) * l0 - t * l1)
    expect = np.clip(corrected, np.maximum(t, 1 - t), 1)
    assert np.allclose(curve(t), expect, atol=1e-12)


def test_pickands_consistent_for_gumbel():
    theta = 2.0
    x = CopulaModel(get_family("gumbel"), theta).sample(10_000, SeedSpec(9).generator())
    a = cfg_pickands(pseudo_observations(x), 0.5)
    assert a == pytest.approx(2 ** (1 / theta - 1), abs=0.02)


def test_pickands_domain():
    ps = pseudo_observations(np.random.default_rng(4).random((10, 2)))
    with pytest.raises(DomainError):
        cfg_pickands(ps, 1.5)


# --- Kendall's tau-b


def test_tau_b_examples():
    assert kendall_tau_b(np.array([[1, 1], [2, 2], [3, 3]])) == 1.0
    assert kendall_tau_b(np.array([[1, 1], [1, 2], [2, 2]])) == pytest.approx(0.5)


def test_tau_b_constant_column():
    with pytest.raises(DegenerateInputError):
        kendall_tau_b(np.array([[1, 1], [1, 2], [1, 3]]))


@settings(max_examples=100, deadline=None)
@given(arrays(np.int64, st.tuples(st.integers(3, 60), st.just(2)), elements=st.integers(0, 6)))
def test_tau_b_matches_scipy(x):
    if np.ptp(x[:, 0]) == 0 or np.ptp(x[:, 1]) == 0:
        return
    want = stats.kendalltau(x[:, 0], x[:, 1], variant="b").statistic
    assert kendall_tau_b(x) == pytest.approx(want, abs=1e-12)


def test_tau_b_tie_free_is_pair_count():
    rng = np.random.default_rng(6)
    for _ in range(100):
        x = rng.random((15, 2))
        s = np.sign(x[:, None, 0] - x[None, :, 0]) * np.sign(x[:, None, 1] - x[None, :, 1])
        assert kendall_tau_b(x) == pytest.approx(s.sum() / (15 * 14), abs=1e-14)


def test_tau_b_rank_mode_invariance():
    x = np.random.default_rng(7).integers(0, 5, size=(40, 2))
    a = pseudo_observations(x, RankMode.AVERAGE).ranks
    m = pseudo_observations(x, RankMode.MAXIMAL).ranks
    assert kendall_tau_b(a) == kendall_tau_b(m) == kendall_tau_b(x)


def test_tau_b_batched():
    x = np.random.default_rng(8).integers(0, 5, size=(7, 30, 2)).astype(float)
    batch = tau_b_batch(x[..., 0], x[..., 1])
    assert np.allclose(batch, [kendall_tau_b(s) for s in x], atol=1e-15)
