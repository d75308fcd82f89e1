"""trigauss: limit laws, Monte Carlo verification and parametric inference
for componentwise maxima of bivariate Gaussian triangular arrays whose
row correlations follow rho_ni = 1 - m(i/n)/log n."""

__version__ = "0.1.0"

from .profiles import CorrelationProfile
from .normal import (
    NormingConstant,
    norming_constant,
    norming_constant_expansion,
    sample_bivariate_gauss,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_quantile,
)
from .limits import (
    CorrectionTerm,
    correction_dependent,
    correction_independent,
    correction_mixed,
    correction_univariate,
    gumbel_cdf,
    hr_cdf,
    limit_cdf_H,
)
from .simulate import (
    ArrayConfig,
    EmpiricalJointCDF,
    convergence_diagnostic,
    empirical_joint_cdf,
    rho_schedule,
    simulate_maxima,
    simulate_row,
)
from .inference import (
    ParamEstimate,
    ScoreValue,
    constant_m_mle,
    delta_hat_matrix,
    linear_family_covariance,
    mle_fit,
    score,
    sigma_matrix,
    test_constant_m,
    wald_report,
)
from .dataio import (
    AnalysisReport,
    PairedSeries,
    analyze_constant_m,
    load_csv,
    log_returns,
    prefix_correlations,
)
from .backend import HAVE_COMPILED, backend_name

__all__ = [name for name in dir() if not name.startswith("_")]
