"""Globally adaptive tensor-product Gauss-Legendre cubature over boxes.

Each box is integrated with a low and a high order tensor rule; their
difference is the box error estimate.  The boxes carrying the most error
are bisected along every axis until the summed error estimate drops below
``tol``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CubatureNotConverged

LOW_ORDER = 6
HIGH_ORDER = 11
MAX_BOXES = 400_000


@dataclass(frozen=True)
class CubatureResult:
    value: float
    error: float
    boxes: int


def _tensor_rule(order: int, dim: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    wgrids = np.meshgrid(*([w] * dim), indexing="ij")
    nodes = np.stack([gg.ravel() for gg in grids], axis=-1)
    weights = np.prod(np.stack([gg.ravel() for gg in wgrids], axis=-1), axis=-1)
    return nodes, weights


def _integrate_boxes(f, lo, width, rule):
    nodes, weights = rule
    pts = lo[:, None, :] + width[:, None, :] * nodes[None, :, :]
    vals = f(pts.reshape(-1, lo.shape[1])).reshape(lo.shape[0], -1)
    return (vals @ weights) * np.prod(width, axis=1)


def integrate(f: Callable[[np.ndarray], np.ndarray], lower, upper, tol: float = 1e-8,
              max_boxes: int = MAX_BOXES) -> CubatureResult:
    """Integrate a vectorized ``f(points[n, d]) -> values[n]`` over a box.

    Parameters
    ----------
    f : callable
        Evaluated on arrays of shape ``(n, d)``.
    lower, upper : array_like
        Box corners.
    tol : float
        Absolute error target for the summed estimate.

    Raises
    ------
    CubatureNotConverged
        When the box budget ``max_boxes`` is exhausted first.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    dim = lower.size
    lo_rule = _tensor_rule(LOW_ORDER, dim)
    hi_rule = _tensor_rule(HIGH_ORDER, dim)
    offsets = np.array(np.meshgrid(*([[0.0, 1.0]] * dim), indexing="ij")).reshape(dim, -1).T

    done_val = 0.0
    done_err = 0.0
    lo = lower[None, :]
    width = (upper - lower)[None, :]
    nboxes = 1
    while True:
        hi_val = _integrate_boxes(f, lo, width, hi_rule)
        err = np.abs(hi_val - _integrate_boxes(f, lo, width, lo_rule))
        total = done_err + err.sum()
        if total <= tol:
            return CubatureResult(float(done_val + hi_val.sum()), float(total), nboxes)
        # split the largest-error boxes until the rest fit in half the budget
        order = np.argsort(-err)
        cum = np.cumsum(err[order])
        keep_budget = 0.5 * tol - done_err
        n_split = int(np.searchsorted(cum, err.sum() - max(keep_budget, 0.0))) + 1
        n_split = min(n_split, order.size)
        split = order[:n_split]
        rest = order[n_split:]
        done_val += float(hi_val[rest].sum())
        done_err += float(err[rest].sum())
        nboxes += n_split * (2 ** dim - 1)
        if nboxes > max_boxes:
            raise CubatureNotConverged(
                f"cubature exceeded {max_boxes} boxes with error estimate {total:.3e} > {tol:.3e}")
        half = 0.5 * width[split]
        lo = (lo[split][:, None, :] + offsets[None, :, :] * half[:, None, :]).reshape(-1, dim)
        width = np.repeat(half, 2 ** dim, axis=0)
