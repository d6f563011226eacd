"""Oracles, corpus generators and the experiment runner."""

from .corpus import ConfigError, CorpusSpec, generate, generate_one
from .experiments import ExperimentConfig, VerificationReport, run_experiments
from .oracles import all_modulators, expectation_audit, verify_exhaustive, verify_hitting_family

__all__ = [
    "ConfigError",
    "CorpusSpec",
    "ExperimentConfig",
    "VerificationReport",
    "all_modulators",
    "expectation_audit",
    "generate",
    "generate_one",
    "run_experiments",
    "verify_exhaustive",
    "verify_hitting_family",
]
