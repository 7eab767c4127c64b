"""Exact volumes of the majorization polytopes inside the ordered simplex.

Points are sorted probability vectors ``x1 >= ... >= xd >= 0`` written in the
coordinates ``(x1, ..., x_{d-1})``.  Both polytopes are given by half-spaces
on partial sums; the vertices are enumerated by ``scipy.spatial`` and the
volume taken from the convex hull.
"""
from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

_RADIUS_TOL = 1e-13


def _chamber_halfspaces(d: int):
    """``A y <= b`` for the ordered simplex in ``y = (x1..x_{d-1})``."""
    rows, rhs = [], []
    m = d - 1
    for i in range(m - 1):                      # x_{i+1} - x_i <= 0
        a = np.zeros(m)
        a[i + 1], a[i] = 1.0, -1.0
        rows.append(a)
        rhs.append(0.0)
    # x_d = 1 - sum(y) <= x_{d-1}  and  x_d >= 0
    a = -np.ones(m)
    a[-1] -= 1.0
    rows.append(a)
    rhs.append(-1.0)
    rows.append(np.ones(m))
    rhs.append(1.0)
    return rows, rhs


def _partial_sum_halfspaces(lam: Sequence[float], sign: float):
    """``sign * (sum_{i<=k} x_i - sum_{i<=k} lam_i) <= 0`` for ``k = 1..d-1``."""
    lam = np.asarray(lam, dtype=float)
    m = lam.size - 1
    cum = np.cumsum(lam)
    rows, rhs = [], []
    for k in range(m):
        a = np.zeros(m)
        a[: k + 1] = sign
        rows.append(a)
        rhs.append(sign * cum[k])
    return rows, rhs


def hpolytope_volume(A: np.ndarray, b: np.ndarray) -> float:
    """Volume of the bounded polytope ``{y : A y <= b}``; 0 if it has empty interior."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    norms = np.linalg.norm(A, axis=1)
    m = A.shape[1]
    # Chebyshev centre: maximize t subject to A y + |a| t <= b
    res = linprog(np.r_[np.zeros(m), -1.0], A_ub=np.c_[A, norms], b_ub=b,
                  bounds=[(None, None)] * m + [(0, None)], method="highs")
    if res.status != 0 or res.x[-1] <= _RADIUS_TOL:
        return 0.0
    centre = res.x[:m]
    if m == 1:
        lo = max((bi / ai for ai, bi in zip(A[:, 0], b) if ai < 0), default=-math.inf)
        hi = min((bi / ai for ai, bi in zip(A[:, 0], b) if ai > 0), default=math.inf)
        return max(hi - lo, 0.0)
    hs = HalfspaceIntersection(np.c_[A, -b], centre)
    try:
        return float(ConvexHull(hs.intersections).volume)
    except QhullError:
        return 0.0


def accessible_volume(lam: Sequence[float]) -> float:
    """Volume of ``{x sorted : lam ≺ x}``."""
    d = len(lam)
    r1, b1 = _chamber_halfspaces(d)
    r2, b2 = _partial_sum_halfspaces(lam, -1.0)
    return hpolytope_volume(np.array(r1 + r2), np.array(b1 + b2))


def source_volume(lam: Sequence[float]) -> float:
    """Volume of ``{x sorted : x ≺ lam}`` from the half-space description."""
    d = len(lam)
    r1, b1 = _chamber_halfspaces(d)
    r2, b2 = _partial_sum_halfspaces(lam, 1.0)
    return hpolytope_volume(np.array(r1 + r2), np.array(b1 + b2))


def rado_source_volume(lam: Sequence[float]) -> float:
    """Source volume from the convex hull of all ``d!`` permutations of ``lam``.

    The hull is symmetric under permutations, so its ordered part has
    ``1/d!`` of its volume.
    """
    d = len(lam)
    pts = np.unique(np.array(list(itertools.permutations(lam)))[:, : d - 1], axis=0)
    if d == 2:
        return float(np.ptp(pts[:, 0])) / 2
    try:
        return float(ConvexHull(pts).volume) / math.factorial(d)
    except QhullError:
        return 0.0
