"""Shared fixtures and numerical helpers for the test suite.

Finite-difference checks in the suite compare analytic derivatives against
central differences of one order lower (second derivatives are differenced
from the analytic first derivative, not from the value), which keeps the
truncation error quadratic in the step without compounding roundoff.
"""
from __future__ import annotations

import numpy as np

from tiebreak import make_family

FD_STEP = 1e-5
FD_REL_TOL = 1e-6

# Parameter points satisfying each family's closed-form precondition.
RATIO_CASES = [
    ("vesperoni-ratio", dict(r=0.5, k=2)),
    ("vesperoni-ratio", dict(r=0.25, k=3)),
    ("vesperoni-ratio", dict(r=1.0, k=1)),
    ("jia-ratio", dict(r=1.0, k=2)),
    ("jia-ratio", dict(r=0.5, k=2)),
    ("jia-ratio", dict(r=1.0, k=1)),
]

DIFF_CASES = [
    ("vesperoni-diff", dict(k=1)),
    ("vesperoni-diff", dict(k=2)),
    ("vesperoni-diff", dict(k=3)),
    ("jia-diff", dict(k=1)),
    ("jia-diff", dict(k=2)),
    ("jia-diff", dict(k=5)),
]

CONCAVE_CASES = [
    ("blavatskyy-power", dict(r=0.3)),
    ("blavatskyy-power", dict(r=0.5)),
    ("blavatskyy-power", dict(r=1.0)),
]

Q_POINTS = (0.0, 0.3, 1.0)


def case_id(case: tuple[str, dict]) -> str:
    name, params = case
    return name + "-" + "-".join(f"{key}{value:g}" for key, value in params.items())


def build(case: tuple[str, dict]):
    name, params = case
    return make_family(name, **params)


def central_diff(fn, x, h: float = FD_STEP):
    """Symmetric difference quotient of `fn` at `x` (vectorized)."""
    x = np.asarray(x, dtype=float)
    return (np.asarray(fn(x + h)) - np.asarray(fn(x - h))) / (2.0 * h)


def rel_err(approx, reference):
    """Elementwise |approx - reference| / (1 + |reference|)."""
    approx = np.asarray(approx, dtype=float)
    reference = np.asarray(reference, dtype=float)
    return np.abs(approx - reference) / (1.0 + np.abs(reference))


def max_rel_err(approx, reference) -> float:
    return float(np.max(rel_err(approx, reference)))
