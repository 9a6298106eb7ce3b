import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tiecop.copulas import INDEPENDENCE, CopulaModel
from tiecop.errors import CapabilityError, DomainError
from tiecop.ranks import PseudoSample, RankMode, pseudo_observations
from tiecop.statistics import (
    stat_Qn,
    stat_RnA,
    stat_RnC,
    stat_Sn,
    stat_Tn,
    tn_counts,
    tn_leave_one_out,
)
from tiecop.statistics import _rna_single


def ps_of(points, n=None):
    r = np.asarray(points, dtype=float)
    return PseudoSample(r, RankMode.AVERAGE)


def _tn_triple_loop(x):
    n = len(x)
    le = lambda i, j: bool(np.all(x[i] <= x[j]))
    s1 = sum(le(i, j) for i, j in itertools.permutations(range(n), 2))
    s2 = sum(le(i, j) and le(k, j) for i, j, k in itertools.permutations(range(n), 3))
    return s1, s2


def test_rnc_swap_symmetric_is_zero():
    assert stat_RnC(ps_of([[1, 2], [2, 1]])) == 0
    pts = np.array([[1, 3], [3, 1], [2, 2], [4, 5], [5, 4]])
    assert stat_RnC(ps_of(pts)) == 0


def test_rnc_matches_triple_loop():
    x = np.random.default_rng(1).integers(0, 6, size=(30, 2))
    ps = pseudo_observations(x)
    u = ps.values
    cn = lambda a, b: np.mean((u[:, 0] <= a) & (u[:, 1] <= b))
    brute = sum((cn(a, b) - cn(b, a)) ** 2 for a, b in u)
    assert stat_RnC(ps) == pytest.approx(brute, rel=1e-13)


def test_qn_self_reflected_is_zero():
    assert stat_Qn(ps_of([[1, 1], [2, 2]])) == 0


def test_qn_matches_double_loop_d3():
    x = np.random.default_rng(2).integers(0, 5, size=(30, 3))
    ps = pseudo_observations(x)
    r, n = ps.ranks, ps.n
    direct = [np.sum(np.all(r <= p, axis=1)) for p in r]
    refl = [np.sum(np.all(n + 1 - r <= p, axis=1)) for p in r]
    brute = sum((a - b) ** 2 for a, b in zip(direct, refl)) / n**2
    assert stat_Qn(ps) == brute


def test_rna_zero_for_symmetric_curve_and_symmetric_integrand():
    rng = np.random.default_rng(3)
    ps = pseudo_observations(rng.random((100, 2)))
    # evaluating the integral over [0, 1/2] twice gives the full integral
    t = np.linspace(0, 0.5, 501)
    from tiecop.empirical import PickandsCurve
    from scipy.integrate import simpson

    a = PickandsCurve(ps)
    half = simpson((a(t) - a(1 - t)) ** 2, x=t)
    assert 2 * ps.n * half == pytest.approx(stat_RnA(ps), rel=1e-12)
    assert stat_RnA(ps_of([[1, 2], [2, 1]])) == pytest.approx(0, abs=1e-15)


def test_rna_grid_refinement():
    rng = np.random.default_rng(4)
    for _ in range(3):
        ps = pseudo_observations(rng.random((100, 2)) ** [1, 3])
        coarse, fine = _rna_single(ps, 1001), _rna_single(ps, 4001)
        assert abs(coarse - fine) < 1e-4 * fine


def test_tn_comonotone_is_zero():
    x = np.arange(10.0)
    assert stat_Tn(np.column_stack([x, x])) == pytest.approx(0, abs=1e-14)


@settings(max_examples=40, deadline=None)
@given(arrays(np.int64, st.tuples(st.integers(5, 20), st.just(2)), elements=st.integers(0, 4)))
def test_tn_counts_match_triple_loop(x):
    s1, s2 = tn_counts(x.astype(float))
    assert (int(s1), int(s2)) == _tn_triple_loop(x)


def test_tn_n25_exact():
    x = np.random.default_rng(5).random((25, 2))
    s1, s2 = _tn_triple_loop(x)
    n = 25
    assert stat_Tn(x) == -1 + 8 * s1 / (n * (n - 1)) - 9 * s2 / (n * (n - 1) * (n - 2))


def test_tn_leave_one_out_matches_deletion():
    x = np.random.default_rng(6).integers(0, 5, size=(30, 2)).astype(float)
    loo = tn_leave_one_out(x)
    assert np.allclose(loo, [stat_Tn(np.delete(x, i, axis=0)) for i in range(30)], atol=1e-14)


def test_tn_bounds_and_domain():
    x = np.random.default_rng(7).random((40, 2))
    assert -10 <= stat_Tn(x) <= 8
    with pytest.raises(CapabilityError):
        stat_Tn(np.random.default_rng(7).random((10, 3)))
    with pytest.raises(DomainError):
        stat_Tn(np.zeros((2, 2)))


def test_sn_hand_example():
    ps = PseudoSample(np.array([[1.0, 1.0], [2.0, 2.0]]), RankMode.MAXIMAL)
    want = (0.5 - 1 / 9) ** 2 + (1 - 4 / 9) ** 2
    assert stat_Sn(ps, CopulaModel(INDEPENDENCE)) == pytest.approx(want, abs=1e-15)


def test_sn_zero_against_empirical_copula():
    x = np.random.default_rng(8).integers(0, 6, size=(30, 2))
    ps = pseudo_observations(x, RankMode.MAXIMAL)

    class Plugin:
        def cdf(self, u):
            from tiecop.empirical import empirical_copula

            return empirical_copula(ps, u)

    assert stat_Sn(ps, Plugin()) == 0


def test_sn_requires_maximal_ranks():
    with pytest.raises(DomainError):
        stat_Sn(pseudo_observations(np.random.default_rng(0).random((5, 2))), CopulaModel(INDEPENDENCE))


def test_monotone_transform_invariance():
    x = np.random.default_rng(9).integers(1, 8, size=(40, 2)).astype(float)
    y = np.column_stack([np.exp(x[:, 0]), x[:, 1] ** 3 + 2])
    for f in (stat_RnC, stat_RnA, stat_Qn):
        assert f(pseudo_observations(x)) == f(pseudo_observations(y))
    assert stat_Tn(x) == stat_Tn(y)
    m = CopulaModel.from_tau("frank", 0.3)
    assert stat_Sn(pseudo_observations(x, RankMode.MAXIMAL), m) == stat_Sn(pseudo_observations(y, RankMode.MAXIMAL), m)


def test_statistics_non_negative():
    rng = np.random.default_rng(10)
    for _ in range(10):
        ps = pseudo_observations(rng.integers(0, 4, size=(20, 2)))
        assert stat_RnC(ps) >= 0 and stat_RnA(ps) >= 0 and stat_Qn(ps) >= 0


def test_bivariate_only_statistics():
    ps = pseudo_observations(np.random.default_rng(0).random((10, 3)))
    with pytest.raises(CapabilityError):
        stat_RnC(ps)
    with pytest.raises(CapabilityError):
        stat_RnA(ps)
