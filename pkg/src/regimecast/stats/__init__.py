"""Descriptive statistics, correlograms, decomposition and unit-root testing."""

from .acf import AcfResult, acf
from .adf import AdfResult, adf_test, mackinnon_crit, mackinnon_p
from .decompose import Decomposition, decompose
from .descriptive import (
    FiveNumberSummary,
    StatsSummary,
    describe,
    first_difference,
    five_number,
    monthly_summary,
    trimmed_mean,
)

__all__ = [
    "AcfResult",
    "AdfResult",
    "Decomposition",
    "FiveNumberSummary",
    "StatsSummary",
    "acf",
    "adf_test",
    "decompose",
    "describe",
    "first_difference",
    "five_number",
    "mackinnon_crit",
    "mackinnon_p",
    "monthly_summary",
    "trimmed_mean",
]
