"""Rank-based copula tests (exchangeability, radial symmetry, extreme-value
dependence, goodness of fit) adapted to ties in the data."""

from .copulas import CopulaModel, Khoudraji, get_family, parse_copula
from .empirical import PickandsCurve, cfg_pickands, empirical_copula, kendall_tau_b, survival_empirical_copula
from .errors import CapabilityError, DegenerateInputError, DomainError, ExperimentAborted, FitError
from .estimation import FitResult, fit_itau, fit_mpl
from .harness import ExperimentConfig, ExperimentResult, discretize, run_experiment
from .procedures import (
    TestKind,
    TestReport,
    jackknife_sigma,
    pvalue_combine,
    run_named_test,
    test_evdep,
    test_exchangeability,
    test_gof,
    test_radial_symmetry,
)
from .ranks import PseudoSample, RankMode, impose_tie_structure, pseudo_observations, tie_template
from .rng import SeedSpec, derive_stream
from .statistics import stat_Qn, stat_RnA, stat_RnC, stat_Sn, stat_Tn

__version__ = "0.1.0"
