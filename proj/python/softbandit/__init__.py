"""Soft-prompt personalization with neural bandits.

Configs cross the native boundary as JSON; this module accepts and returns
plain dicts.
"""

import json

from ._softbandit import (
    ConfigError,
    DataError,
    Projection,
    ServiceError,
    Surrogate,
    avg_rouge_reward,
    improvement_pct,
    lcs_length,
    rouge1,
    rouge_l,
    tokenize,
)
from . import _softbandit

__all__ = [
    "ConfigError",
    "DataError",
    "Projection",
    "ServiceError",
    "Surrogate",
    "aggregate_finals",
    "avg_rouge_reward",
    "config_fingerprint",
    "improvement_pct",
    "lcs_length",
    "load_config",
    "rouge1",
    "rouge_l",
    "run_synthetic",
    "synthetic_suite",
    "tokenize",
]


def load_config(config=None):
    """Validated config dict with defaults filled in."""
    return json.loads(_softbandit.normalize_config(json.dumps(config or {})))


def config_fingerprint(config=None):
    return _softbandit.config_fingerprint(json.dumps(config or {}))


def synthetic_suite(suite_id):
    """(config dict, profile ids) of a synthetic suite preset."""
    doc, count = _softbandit.synthetic_suite(suite_id)
    return json.loads(doc), _softbandit.synthetic_profile_ids(suite_id, count)


def run_synthetic(config, profile_ids, policy=None, threads=0):
    """Trajectory dicts for one policy; policy=None runs the baseline."""
    return _softbandit.run_synthetic(json.dumps(config), list(profile_ids), policy, threads)


def aggregate_finals(policy_finals, baseline_finals):
    """Aggregate report dict from final best-so-far values per policy."""
    return json.loads(_softbandit.aggregate_finals(dict(policy_finals), list(baseline_finals)))
