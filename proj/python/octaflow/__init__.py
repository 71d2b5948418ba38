"""Octic roots by iterating an S8-equivariant map on P^6.

    >>> import octaflow
    >>> r = octaflow.solve([-36, 546, -4536, 22449, -67284, 118124, -109584, 40320])
    >>> sorted(round(x["root"].real, 6) for x in r["roots"])
    [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]
"""

import os
from pathlib import Path

from . import _octaflow
from ._octaflow import DomainError, DimensionError, Error, TablesError, g4, k_invariants, restricted_map

__all__ = [
    "DimensionError",
    "DomainError",
    "Error",
    "TablesError",
    "default_tables",
    "g4",
    "generate_tables",
    "k_invariants",
    "render_basin",
    "restricted_map",
    "solve",
    "verify_tables",
]

_PACKAGED = Path(__file__).with_name("data") / "octic_tables.json"


def default_tables():
    """OCTAFLOW_TABLES, else the tables shipped in the wheel, else the build-time path."""
    env = os.environ.get("OCTAFLOW_TABLES")
    if env:
        return env
    if _PACKAGED.is_file():
        return str(_PACKAGED)
    return _octaflow.compiled_tables_path()


def solve(coeffs, tables=None, precision="double", seed=1, tol=1e-12, max_iter=200, restarts=16):
    """Roots of x^8 + a1 x^7 + ... + a8; coeffs = [a1, ..., a8]."""
    return _octaflow.solve([complex(c) for c in coeffs], tables or default_tables(), precision, seed, tol,
                           max_iter, restarts)


def verify_tables(tables=None, trials=10, exact_trials=2, seed=99):
    return _octaflow.verify_tables(tables or default_tables(), trials, exact_trials, seed)


def generate_tables(out, seed=20240531, trials=10):
    _octaflow.generate_tables(str(out), seed, trials)


def render_basin(tag, width=400, height=400, window=(-2.0, 2.0, -2.0, 2.0), max_iter=60, attractors=(), threads=0):
    """Basin portrait of a restricted map. Returns labels (row-major, -1 = over the cap), attractors and P6 bytes."""
    pts = [[complex(c) for c in a] for a in attractors]
    return _octaflow.render_basin(tag, width, height, list(window), max_iter, pts, threads)
