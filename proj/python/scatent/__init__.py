"""Subsystem entropy change under weak bipartite scattering."""

import json

from ._scatent import (
    ScatentError,
    builtin_names,
    classify,
    exact_delta_entropy,
    predict,
    random_hermitian,
    scenario_yaml,
    sweep_fit,
)
from . import _scatent


def run(source, mode=""):
    """Run a scenario given as YAML text or "builtin:<name>"; returns the report dict."""
    return json.loads(_scatent.run_json(source, mode))


def suite():
    return json.loads(_scatent.suite_json())


__all__ = [
    "ScatentError",
    "builtin_names",
    "classify",
    "exact_delta_entropy",
    "predict",
    "random_hermitian",
    "run",
    "scenario_yaml",
    "suite",
    "sweep_fit",
]
