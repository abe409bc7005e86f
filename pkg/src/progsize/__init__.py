"""Program-size distributions, size estimation and size-ranked defect analysis."""

__version__ = "0.1.0"

from .defects import alberg_curve, concentration_table, fit_defect_weibull  # noqa: E402
from .estimate import (  # noqa: E402
    CORPUS_DEFAULTS,
    CORPUS_MEAN_SIZE,
    EstimationResult,
    estimate_count_in_range,
    estimate_total_size,
    expected_program_size,
    mre,
)
from .fit import (  # noqa: E402
    FitQuality,
    LognormalParams,
    WeibullFit,
    WeibullParams,
    fit_lognormal_mle,
    fit_quality_cdf,
    fit_weibull,
    lognormal_cdf,
    lognormal_pdf,
    weibull_cdf,
)
from .ingest import Dataset, ProgramRecord, import_eclipse_dataset, load_canonical_csv, parse_canonical_csv  # noqa: E402
from .loc_scanner import SourceFile, count_loc, scan_tree  # noqa: E402
from .stats import describe, empirical_cdf, rank_size_curve  # noqa: E402
