"""Stance-aware polarization analysis of interaction graphs."""

import json

from . import _core
from ._core import (
    PolarlensError,
    calibrate_thresholds,
    classify_stance,
    compare_scores,
    ei_index,
    propagate,
    score_text,
)

__all__ = [
    "PolarlensError",
    "calibrate_thresholds",
    "classify_stance",
    "compare_scores",
    "ei_index",
    "generate_corpus",
    "propagate",
    "run_pipeline",
    "score_text",
]


def generate_corpus(out_dir, **config):
    """Write a synthetic corpus into out_dir and return the tweet count."""
    return _core.generate_corpus(json.dumps(config), str(out_dir))


def run_pipeline(**config):
    """Run every stage; keys match the JSON config file."""
    _core.run_pipeline(json.dumps(config))
