"""Dimensions, socles and pairings of tautological rings of curves and their Jacobians."""

import json

from ._tautring import (
    InputError,
    IntegrityError,
    PreconditionError,
    apply_E,
    apply_F,
    apply_H,
    default_seed,
    engine_version,
    house,
    p_to_kappa,
)
from . import _tautring

__all__ = [
    "InputError",
    "IntegrityError",
    "PreconditionError",
    "apply_E",
    "apply_F",
    "apply_H",
    "compute",
    "engine_version",
    "house",
    "mg",
    "p_to_kappa",
    "sympow",
]


def compute(genus, mode="ttilde", max_codim=-1, policy="auto", threads=1,
            seed=default_seed, cache_dir="", time_limit=0.0):
    """Dimension table and, once the socle is reached, the pairing report."""
    return json.loads(_tautring.analysis_json(genus, mode, max_codim, policy, threads,
                                              seed, cache_dir, time_limit))


def mg(genus, max_codim=-1, **kw):
    return compute(genus, "mg", max_codim, **kw)


def sympow(genus, n, policy="auto", threads=1, seed=default_seed, cache_dir=""):
    return json.loads(_tautring.sympow_json(genus, n, policy, threads, seed, cache_dir))
