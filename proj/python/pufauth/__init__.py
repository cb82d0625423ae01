"""PUF-based IoT authentication workbench.

Thin wrappers over the C++ core: protocol sessions, attack scenarios and the
attack/defense matrix, with JSON-speaking convenience functions.
"""

import json as _json

from ._core import (
    Rng,
    PufDevice,
    attacks,
    fe_gen,
    fe_rep,
    hash_concat,
    perturb_biometric,
    run_attack_json,
    run_matrix_json,
    run_session_json,
    sha256,
    variants,
    xor256,
)

__version__ = "0.1.0"

__all__ = [
    "Rng",
    "PufDevice",
    "attacks",
    "fe_gen",
    "fe_rep",
    "hash_concat",
    "perturb_biometric",
    "run_attack",
    "run_matrix",
    "run_session",
    "sha256",
    "variants",
    "xor256",
]


def run_session(variant, **kwargs):
    """Run one honest session; returns a dict with outcome and session keys."""
    return _json.loads(run_session_json(variant, **kwargs))


def run_attack(variant, attack, **kwargs):
    """Run one attack scenario; returns a dict with verdict and evidence."""
    return _json.loads(run_attack_json(variant, attack, **kwargs))


def run_matrix(**kwargs):
    """Run the attack x variant matrix; returns the report as a dict."""
    return _json.loads(run_matrix_json(**kwargs))
