"""Lexical C code-quality measurement and history analysis."""

from ._cqmine import (  # noqa: F401
    __version__,
    acf,
    analysis_metric_names,
    bh_adjust,
    check_inclusion,
    chi_squared_sf,
    empirical_quantile,
    kolmogorov_sf,
    ks_two_sample,
    ljung_box,
    measure,
    plan_strata,
    record_field_names,
    style_rule_names,
)

__all__ = [
    "__version__",
    "acf",
    "analysis_metric_names",
    "bh_adjust",
    "check_inclusion",
    "chi_squared_sf",
    "empirical_quantile",
    "kolmogorov_sf",
    "ks_two_sample",
    "ljung_box",
    "measure",
    "plan_strata",
    "record_field_names",
    "style_rule_names",
]
