"""Exact decision-tree complexity of Boolean functions.

Thin wrapper around the native ``_dtrank`` module: JSON payloads are
decoded into plain dicts and exact rationals into ``fractions.Fraction``.
"""

import json as _json
from fractions import Fraction as _Fraction

from ._dtrank import (  # noqa: F401
    BoolFun,
    CapExceeded,
    DTree,
    ParseError,
    asym_game_value,
    cert_tree,
    compose,
    constant,
    depth,
    depth_tree,
    dt_size,
    from_hex,
    game_value,
    gap,
    gap_min,
    iterate,
    parse,
    rank,
    rank_tree,
    size_tree,
    sparsity,
    sparsity_tilde,
    sparsity_tree,
    spectrum,
    weighted_depth,
)
from . import _dtrank as _native

__all__ = [
    "BoolFun",
    "CapExceeded",
    "DTree",
    "ParseError",
    "asym_game_value",
    "cert_tree",
    "certificates",
    "compose",
    "constant",
    "depth",
    "depth_tree",
    "dt_size",
    "from_hex",
    "game_value",
    "gap",
    "gap_min",
    "iterate",
    "measure_report",
    "parse",
    "play",
    "rank",
    "rank_tree",
    "size_tree",
    "sparsity",
    "sparsity_tilde",
    "sparsity_tree",
    "spectrum",
    "verify_exhaustive",
    "weighted_depth",
]


def certificates(f, cap=0):
    """Certificate complexities of ``f`` with ``c_avg`` as a Fraction."""
    stats = _native.certificates(f, cap)
    stats["c_avg"] = _Fraction(stats["c_avg"])
    return stats


def measure_report(f, weights=None):
    """Every measure of ``f`` as a dict (exact rationals stay strings)."""
    return _json.loads(_native.measure_report(f, weights))


def play(f):
    """Transcript of optimal prover vs optimal delayer as a dict."""
    return _json.loads(_native.play(f))


def verify_exhaustive(n):
    """Check report over all functions of arity ``n`` as a dict."""
    return _json.loads(_native.verify_exhaustive(n))
