"""Proof replays that navigate a colored Tr(N) and return verified witnesses."""

from .base import (
    Budget,
    BudgetExhausted,
    ExtractOutcome,
    FailureReport,
    HypothesisViolation,
    MonoC4ThroughApex,
    ReplayTrace,
    WitnessOutcome,
    check_trace,
    extract_c4_region,
)
from .bistar import extract_bistar, extract_bistar_under_star
from .flower import extract_flower
from .jellyfish import extract_jellyfish, extract_jellyfish_under_star

__all__ = [
    "Budget",
    "BudgetExhausted",
    "ExtractOutcome",
    "FailureReport",
    "HypothesisViolation",
    "MonoC4ThroughApex",
    "ReplayTrace",
    "WitnessOutcome",
    "check_trace",
    "extract_bistar",
    "extract_bistar_under_star",
    "extract_c4_region",
    "extract_flower",
    "extract_jellyfish",
    "extract_jellyfish_under_star",
]
