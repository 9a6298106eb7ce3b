import math

import numpy as np
import pytest
from scipy.special import ndtr

from tiecop.copulas import CopulaModel, parse_copula
from tiecop.errors import CapabilityError, DegenerateInputError, DomainError
from tiecop.harness import discretize
from tiecop.procedures import (
    TestKind,
    jackknife_sigma,
    pvalue_combine,
    run_named_test,
    test_evdep,
    test_exchangeability,
    test_gof,
    test_radial_symmetry,
)
from tiecop.ranks import tie_group_sizes, tie_template
from tiecop.rng import SeedSpec
from tiecop.statistics import stat_Tn


def data(name="gumbel", tau=0.5, n=80, k=10, seed=0, dim=2):
    u = CopulaModel.from_tau(name, tau, dim).sample(n, SeedSpec(seed).generator())
    return discretize(u, k, 1.0)


# --- p-value combination


def test_pvalue_formula():
    assert pvalue_combine(0.0, np.ones(999)) == pytest.approx(0.9995)
    assert pvalue_combine(2.0, np.ones(999)) == pytest.approx(0.0005)
    reps = np.r_[np.zeros(500), np.ones(500)]
    assert pvalue_combine(0.5, reps) == pytest.approx(500.5 / 1001)
    with pytest.raises(DomainError):
        pvalue_combine(1.0, [])


def test_ties_count_as_exceedances():
    assert pvalue_combine(1.0, [1.0, 0.0, 2.0]) == pytest.approx(2.5 / 4)


# --- exchangeability and radial symmetry


@pytest.mark.parametrize("variant", ["RnC", "RnA"])
def test_exchangeability_report(variant):
    x = data()
    rep = test_exchangeability(x, variant, 60, 3)
    assert rep.test is (TestKind.ExchCn if variant == "RnC" else TestKind.ExchAn)
    assert 0 < rep.p_value < 1
    m = rep.p_value * 61 - 0.5
    assert m == pytest.approx(round(m))
    assert rep.statistic.n == 80 and rep.n_boot == 60


def test_same_seed_same_report():
    x = data()
    a = test_exchangeability(x, "RnC", 40, SeedSpec(9, (1,)), keep_replicates=True)
    b = test_exchangeability(x, "RnC", 40, SeedSpec(9, (1,)), keep_replicates=True)
    assert a.p_value == b.p_value and np.array_equal(a.replicates, b.replicates)
    c = test_exchangeability(x, "RnC", 40, SeedSpec(9, (2,)), keep_replicates=True)
    assert not np.array_equal(a.replicates, c.replicates)


def test_replicates_do_not_depend_on_batch_size(monkeypatch):
    import tiecop.procedures as proc

    x = data()
    a = test_radial_symmetry(x, 70, 4, keep_replicates=True).replicates
    monkeypatch.setattr(proc, "BATCH", 7)
    b = test_radial_symmetry(x, 70, 4, keep_replicates=True).replicates
    assert np.array_equal(a, b)


def _collect_tie_patterns(fn, x):
    want = tie_template(x).group_sizes()
    seen = []

    def hook(ranks):
        for r in ranks:
            seen.append([tie_group_sizes(r[:, j]) for j in range(r.shape[1])] == want)

    fn(hook)
    return seen


@pytest.mark.parametrize(
    "call",
    [
        lambda x, h: test_exchangeability(x, "RnC", 30, 1, replicate_hook=h),
        lambda x, h: test_radial_symmetry(x, 30, 1, replicate_hook=h),
        lambda x, h: test_evdep(x, 30, 1, replicate_hook=h),
        lambda x, h: test_gof(x, "gumbel", "mpl", 30, 1, replicate_hook=h),
    ],
)
def test_adapted_replicates_keep_tie_structure(call):
    x = data()
    seen = _collect_tie_patterns(lambda h: call(x, h), x)
    assert len(seen) == 30 and all(seen)


def test_radial_symmetry_higher_dimension():
    x = data("normal", 0.4, n=60, dim=3)
    rep = test_radial_symmetry(x, 30, 2)
    assert rep.test is TestKind.RadSym and 0 < rep.p_value < 1


def test_exchangeability_is_bivariate():
    with pytest.raises(CapabilityError):
        test_exchangeability(data(dim=3, name="normal"), "RnC", 10, 0)
    with pytest.raises(DomainError):
        test_exchangeability(data(), "Qn", 10, 0)
    with pytest.raises(DomainError):
        test_exchangeability(data(), "RnC", 0, 0)


def test_adapted_equals_plain_when_template_and_resample_are_tie_free():
    # GoF replicates come from a continuous copula, so imposing a tie-free
    # template is the identity
    x = CopulaModel.from_tau("clayton", 0.4).sample(60, SeedSpec(5).generator())
    a = test_gof(x, "clayton", "itau", 40, 7, adapted=True)
    b = test_gof(x, "clayton", "itau", 40, 7, adapted=False)
    assert a.p_value == b.p_value


def test_strong_asymmetry_is_detected():
    k = parse_copula("khoudraji(indep,normal,0.2,0.95)", 0.75)
    y = k.sample(200, SeedSpec(4).generator())
    assert test_exchangeability(y, "RnC", 200, 1).p_value < 0.05


# --- extreme-value dependence


def test_jackknife_matches_deletion_loop():
    x = np.random.default_rng(3).random((30, 2))
    loo = np.array([stat_Tn(np.delete(x, i, axis=0)) for i in range(30)])
    v = 29 / 30 * np.sum((loo - loo.mean()) ** 2)
    jk = jackknife_sigma(x)
    assert jk.sigma == pytest.approx(math.sqrt(30 * v), rel=1e-12)
    assert not jk.degenerate


def test_jackknife_degenerate():
    x = np.column_stack([np.arange(10.0), np.arange(10.0)])
    jk = jackknife_sigma(x)
    assert jk.degenerate and jk.sigma == 1e-12


def test_evdep_plain_pvalue_formula():
    x = data("gumbel", 0.3, n=100)
    rep = test_evdep(x, adapted=False)
    s = rep.extras["sigma_hat"]
    assert rep.extras["bias_hat"] == 0
    assert rep.p_value == pytest.approx(2 * ndtr(-math.sqrt(100) * abs(rep.statistic.value) / s))


def test_evdep_adapted_bias():
    x = data("gumbel", 0.3, n=100)
    rep = test_evdep(x, 20, 5)
    assert rep.extras["gh_theta"] == pytest.approx(1 / (1 - rep.extras["tau_b"]))
    z = math.sqrt(100) * abs(rep.statistic.value - rep.extras["bias_hat"]) / rep.extras["sigma_hat"]
    assert rep.p_value == pytest.approx(2 * ndtr(-z))
    assert 0 < rep.p_value <= 1


def test_evdep_negative_tau_uses_independence_gumbel():
    x = data("frank", -0.3, n=60)
    assert test_evdep(x, 5, 1).extras["gh_theta"] == 1.0


def test_evdep_constant_column():
    x = np.column_stack([np.ones(20), np.arange(20.0)])
    with pytest.raises(DegenerateInputError):
        test_evdep(x, 5, 0)


# --- goodness of fit


@pytest.mark.parametrize("estimator", ["itau", "mpl"])
def test_gof_report(estimator):
    x = data("clayton", 0.5, n=60)
    rep = test_gof(x, "clayton", estimator, 30, 2)
    assert rep.extras["family"] == "clayton" and rep.extras["estimator"] == estimator
    assert rep.extras["theta_n"] > 0
    assert 0 < rep.p_value < 1


def test_gof_misspecified_rejects():
    x = CopulaModel.from_tau("clayton", 0.6).sample(200, SeedSpec(1).generator())
    assert test_gof(x, "gumbel", "mpl", 100, 3).p_value < 0.05


def test_gof_khoudraji_family_unavailable():
    with pytest.raises(Exception):
        test_gof(data(), "khoudraji", "mpl", 10, 0)


def test_run_named_test_dispatch():
    x = data()
    assert run_named_test(x, "exch-an", n_boot=10).test is TestKind.ExchAn
    assert run_named_test(x, "evdep", adapted=False).n_boot == 0
    with pytest.raises(DomainError):
        run_named_test(x, "gof", n_boot=10)
