"""Sublinear estimation of star counts, self-join sizes and directed 2-paths.

The estimators only need magnitude-proportional samples (a random edge's
endpoint, a random row's label) and magnitude lookups (degree queries,
per-label counts); :mod:`starcount.exact` supplies brute-force ground truth
and :mod:`starcount.instances` the fixtures, including lower-bound families.
"""

from .errors import (
    ConstraintError,
    EmptySourceError,
    InvalidArgumentError,
    ParseError,
    RatioViolationError,
    StarCountError,
)
from .oracle import (
    Graph,
    GraphOracle,
    QueryLedger,
    TableColumn,
    TableOracle,
    WeightedOracle,
    as_weighted_oracle,
    make_rng,
)
from .estimator import (
    EstimateReport,
    EstimatorParams,
    amplification_count_l,
    binomial,
    count_stars,
    estimator_value,
    median_estimate,
    sample_count_k,
    self_join_estimate,
    unbiased_estimate,
)
from .directed import (
    Path2Report,
    estimate_path2,
    exactly_in_out_stars,
    join_size_exact_mapping,
    sqrt_weighted_sample,
)
from .exact import (
    exact_join_cardinality,
    exact_path2_count,
    exact_self_join_cardinality,
    exact_star_count,
    exact_star_count_by_enumeration,
    validate_jensen_bounds,
)

__version__ = "0.1.0"
