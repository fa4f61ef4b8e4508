"""Python access to the anosov-lab core.

Recipes are plain dicts in the config format::

    {"generators": [{"label": "a", "matrix": [[2, 0], [0, 0.5]]}, ...],
     "chain": [{"op": "tau", "d": 3}]}
"""

import json

from ._core import (
    AnosovError,
    ConfigError,
    __version__,
    build_su21_rep,
    eigen_moduli,
    examples,
    hilbert_distance_psd,
    singular_values,
    sym_square,
    tau_d,
    wedge_power,
)
from . import _core

__all__ = [
    "AnosovError",
    "ConfigError",
    "__version__",
    "alpha_estimate",
    "build_su21_rep",
    "config_hash",
    "eigen_moduli",
    "examples",
    "gap_profile",
    "hilbert_distance_psd",
    "limit_points",
    "parse_config",
    "run",
    "singular_values",
    "sym_square",
    "tau_d",
    "wedge_power",
]


def _recipe(recipe):
    return recipe if isinstance(recipe, str) else json.dumps(recipe)


def parse_config(text, source="config"):
    """Validate a config and return it with defaults filled in."""
    if not isinstance(text, str):
        text = json.dumps(text)
    return json.loads(_core._parse_config(text, source))


def config_hash(text):
    if not isinstance(text, str):
        text = json.dumps(text)
    return _core._config_hash(text)


def alpha_estimate(recipe, m, radius, tol=1e-9):
    return json.loads(_core._alpha(_recipe(recipe), m, radius, tol))


def gap_profile(recipe, k, radius):
    return json.loads(_core._gap_profile(_recipe(recipe), k, radius))


def limit_points(recipe, m, radius):
    """Words and unit representatives of the sampled attracting lines."""
    return _core._limit_points(_recipe(recipe), m, radius)


def run(path, radius=None, out=None, seed=None):
    """Run a config file; returns (exit_code, summary)."""
    code, summary = _core._run(str(path), radius, None if out is None else str(out), seed)
    return code, json.loads(summary)
