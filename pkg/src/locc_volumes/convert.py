"""Deterministic LOCC convertibility between pure states of the same class.

* bipartite: majorization of Schmidt vectors,
* W class: componentwise ``x_i >= y_i``,
* GHZ class: the full case tree (both generic, vanishing target, vanishing
  source), including the degenerate ratio branches of the equality
  conditions.

GHZ-class inputs are canonicalized first, so convertibility is decided up to
complex conjugation of either state (conjugates share every operational
measure).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, PreconditionViolated
from .states import (EPS_CLASS, GhzKind, GhzParams, SchmidtVector, WParams,
                     canonical_arrays, canonicalize_ghz, classify_ghz, cos2_arr,
                     sin2_arr)

INEQ_TOL = 1e-12
RATIO_RTOL = 1e-10


class FailedCondition(str, Enum):
    INEQUALITY = "Inequality_i"
    EQUALITY_RE = "EqualityRe"
    EQUALITY_IM = "EqualityIm"
    SPECIAL_RE_ZERO = "SpecialReZero"
    SPECIAL_IM_ZERO = "SpecialImZero"
    SPECIAL_MODULUS_ONE = "SpecialModulusOne"
    VANISHING_R = "VanishingR"
    MES_PHI = "MesPhiConstraint"
    CROSS_CLASS = "CrossClass"


class _Code(IntEnum):
    OK = 0
    INEQUALITY = 1
    EQUALITY_RE = 2
    EQUALITY_IM = 3
    SPECIAL_RE_ZERO = 4
    SPECIAL_IM_ZERO = 5
    SPECIAL_MODULUS_ONE = 6
    VANISHING_R = 7
    MES_PHI = 8


_CODE_TO_FAILURE = {
    _Code.INEQUALITY: FailedCondition.INEQUALITY,
    _Code.EQUALITY_RE: FailedCondition.EQUALITY_RE,
    _Code.EQUALITY_IM: FailedCondition.EQUALITY_IM,
    _Code.SPECIAL_RE_ZERO: FailedCondition.SPECIAL_RE_ZERO,
    _Code.SPECIAL_IM_ZERO: FailedCondition.SPECIAL_IM_ZERO,
    _Code.SPECIAL_MODULUS_ONE: FailedCondition.SPECIAL_MODULUS_ONE,
    _Code.VANISHING_R: FailedCondition.VANISHING_R,
    _Code.MES_PHI: FailedCondition.MES_PHI,
}


@dataclass(frozen=True)
class ConvertDecision:
    convertible: bool
    failed_condition: Optional[FailedCondition] = None
    target_z: Optional[tuple[float, float]] = None

    def to_dict(self) -> dict:
        return {
            "convertible": self.convertible,
            "failedCondition": None if self.failed_condition is None else self.failed_condition.value,
            "targetZ": None if self.target_z is None else {"r": self.target_z[0], "phi": self.target_z[1]},
        }


# ---------------------------------------------------------------------------
# bipartite and W


def majorized_mask(x, y, tol=INEQ_TOL):
    """Row-wise ``x ≺ y`` for arrays of shape ``(..., d)`` (rows need not be sorted)."""
    x = -np.sort(-np.asarray(x, dtype=float), axis=-1)
    y = -np.sort(-np.asarray(y, dtype=float), axis=-1)
    if x.shape[-1] != y.shape[-1]:
        raise DimensionMismatch(f"dimension mismatch: {x.shape[-1]} vs {y.shape[-1]}")
    sx = np.cumsum(x, axis=-1)
    sy = np.cumsum(y, axis=-1)
    partial = np.all(sx[..., :-1] <= sy[..., :-1] + tol, axis=-1)
    return partial & (np.abs(sx[..., -1] - sy[..., -1]) <= tol)


def majorizes(x: SchmidtVector, y: SchmidtVector) -> bool:
    """True iff ``x ≺ y``: every partial sum of sorted ``x`` is at most that of ``y``.

    A bipartite pure state with Schmidt vector ``x`` converts to one with
    Schmidt vector ``y`` by LOCC exactly when this holds.
    """
    lx = x.lam if isinstance(x, SchmidtVector) else tuple(x)
    ly = y.lam if isinstance(y, SchmidtVector) else tuple(y)
    if len(lx) != len(ly):
        raise DimensionMismatch(f"dimension mismatch: {len(lx)} vs {len(ly)}")
    return bool(majorized_mask(lx, ly))


def w_convertible(src: WParams, dst: WParams) -> bool:
    return all(a >= b - INEQ_TOL for a, b in zip(src.x, dst.x))


# ---------------------------------------------------------------------------
# GHZ class: z' reconstruction


def _z_from_ab(a, b):
    """Solve ``a_{z'} = a``, ``b_{z'} = b`` for ``z'`` with ``|z'| <= 1``.

    Vectorized; returns ``(r, phi, ok)`` with ``ok`` false where no real
    ``r'`` exists.  ``b`` must be finite here.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = a * a + b * b
    with np.errstate(divide="ignore", invalid="ignore"):
        # e = n/d - 1 written without cancellation; real r' iff e >= 0 iff |a| <= 1
        e = 2 * (1 - a * a) / d
        ok = (d > 0) & (e >= 0)
        e = np.where(ok, e, 1.0)
        t = 1.0 / (1 + e + np.sqrt(e * (e + 2)))     # r'^4 = n/d - sqrt((n/d)^2 - 1)
        s = np.sqrt(t)
        c = a * (1 + t) / (2 * s)
        sn = b * (t - 1) / (2 * s)
    phi = np.mod(0.5 * np.arctan2(sn, c), math.pi)
    r = np.sqrt(s)
    return np.where(ok, r, np.nan), np.where(ok, phi, np.nan), ok


def _z_for_ratio(p: GhzParams, k):
    """``z'`` with ``a_{z'} = k a_z`` and ``b_{z'} = k b_z`` (vectorized over ``k``)."""
    k = np.asarray(k, dtype=float)
    if p.r == 1.0:
        # |z| = 1: the Im-ratio forces |z'| = 1 and only cos(2 phi') = k cos(2 phi) remains
        c = k * p.cos2phi
        ok = np.abs(c) <= 1 + 1e-15
        phi = 0.5 * np.arccos(np.clip(c, -1, 1))
        return np.where(ok, 1.0, np.nan), np.where(ok, phi, np.nan), ok
    return _z_from_ab(k * p.a_z, k * p.b_z)


def _require_case_a(p: GhzParams) -> GhzParams:
    c = canonicalize_ghz(p)
    if classify_ghz(c).kind not in (GhzKind.GENERIC, GhzKind.MES):
        raise PreconditionViolated(f"expected all g_i > 0, got {classify_ghz(c).tag}")
    return c


def solve_target_z(src: GhzParams, h) -> Optional[tuple[float, float]]:
    """Canonical ``z' = (r', phi')`` of the state with parameters ``h`` reachable from ``src``.

    ``r'^4 = n/d - sqrt((n/d)^2 - 1)`` with the phase fixed by the sign
    rule; ``None`` when ``(n/d)^2 < 1``.  For a MES source (``|z| = 1``)
    the reachable ``z'`` form a one-parameter family; the member with
    ``|z'| = 1`` is returned.

    Raises
    ------
    PreconditionViolated
        If some ``g_i`` vanishes or some ``h_i < g_i``.
    """
    c = _require_case_a(src)
    h = np.asarray(h, dtype=float)
    if np.any(h < np.asarray(c.g) - INEQ_TOL) or np.any(h >= 0.5):
        raise PreconditionViolated("need g_i <= h_i < 1/2 for all i")
    r, phi, ok = _z_for_ratio(c, c.G / float(np.prod(h)))
    if not bool(ok):
        return None
    _, rr, pp = canonical_arrays(h, float(r), float(phi))
    return float(rr), float(pp)


def solve_source_z(dst: GhzParams, h) -> Optional[tuple[float, float]]:
    """``z'`` of the state with parameters ``h`` that reaches ``dst``, if any."""
    c = _require_case_a(dst)
    h = np.asarray(h, dtype=float)
    if np.any(h > np.asarray(c.g) + INEQ_TOL) or np.any(h <= 0):
        raise PreconditionViolated("need 0 < h_i <= g_i for all i")
    r, phi, ok = _z_for_ratio(c, c.G / float(np.prod(h)))
    if not bool(ok):
        return None
    _, rr, pp = canonical_arrays(h, float(r), float(phi))
    return float(rr), float(pp)


# ---------------------------------------------------------------------------
# GHZ class: the predicate


_ULP = np.finfo(float).eps


def _close(x, y, floor=0.0):
    """Relative comparison at ``RATIO_RTOL`` plus a per-element rounding floor."""
    return np.abs(x - y) <= (RATIO_RTOL + floor) * np.maximum(np.abs(x), np.abs(y))


def ghz_failure_codes(g, r, phi, h, rp, phip):
    """Vectorized GHZ-class convertibility, source ``(g, r, phi)`` -> target ``(h, rp, phip)``.

    ``g`` and ``h`` have shape ``(..., 3)``; everything broadcasts.  Inputs
    are canonicalized here.  Returns an int array of ``_Code`` values
    (0 = convertible), reporting the first failed condition.
    """
    g, r, phi = canonical_arrays(g, r, phi)
    h, rp, phip = canonical_arrays(h, rp, phip)
    g, h = np.broadcast_arrays(g, h)
    shape = g.shape[:-1]
    r, phi, rp, phip = (np.broadcast_to(v, shape) for v in (r, phi, rp, phip))
    code = np.zeros(shape, dtype=np.int8)

    def fail(mask, c):
        m = mask & (code == 0)
        code[m] = c

    src_zero = np.any(g == 0, axis=-1)
    dst_zero = np.any(h == 0, axis=-1)
    fail(np.any(g > h + INEQ_TOL, axis=-1), _Code.INEQUALITY)

    # target with a vanishing parameter: only r >= r'
    fail(dst_zero & (rp > r + INEQ_TOL), _Code.VANISHING_R)

    # vanishing source, all-positive target: r = 1 and phi' in {pi/4, 3pi/4}
    branch_c = src_zero & ~dst_zero
    fail(branch_c & (r != 1.0), _Code.VANISHING_R)
    fail(branch_c & (np.abs(cos2_arr(phip)) > EPS_CLASS), _Code.SPECIAL_RE_ZERO)

    # both all-positive
    a = ~src_zero & ~dst_zero
    if np.any(a & (code == 0)):
        _generic_branch(code, a & (code == 0), g, r, phi, h, rp, phip)
    return code


def _generic_branch(code, sel, g, r, phi, h, rp, phip):
    g, r, phi, h, rp, phip = g[sel], r[sel], phi[sel], h[sel], rp[sel], phip[sel]
    out = np.zeros(g.shape[0], dtype=np.int8)

    def fail(mask, c):
        m = mask & (out == 0)
        out[m] = c

    k = np.prod(g, axis=-1) / np.prod(h, axis=-1)
    re_zero = np.abs(cos2_arr(phi)) <= EPS_CLASS
    re_zero_p = np.abs(cos2_arr(phip)) <= EPS_CLASS
    im_zero = np.abs(sin2_arr(phi)) <= EPS_CLASS
    im_zero_p = np.abs(sin2_arr(phip)) <= EPS_CLASS
    mod_one = r == 1.0
    mod_one_p = rp == 1.0
    src_mes = mod_one & im_zero

    # Re-ratio: Re(z'^2)(|z|^4+1) / ((|z'|^4+1) Re(z^2)) = k
    r2, rp2 = r * r, rp * rp
    with np.errstate(divide="ignore", invalid="ignore"):
        a_src = 2 * r2 * cos2_arr(phi) / (r2 * r2 + 1)
        a_dst = 2 * rp2 * cos2_arr(phip) / (rp2 * rp2 + 1)
        ratio_re = a_dst / a_src
    fail(re_zero & ~re_zero_p, _Code.SPECIAL_RE_ZERO)
    both_re = ~re_zero & ~re_zero_p
    with np.errstate(divide="ignore"):
        re_floor = 8 * _ULP * (1 / np.abs(cos2_arr(phi)) + 1 / np.abs(cos2_arr(phip)))
    m = (~re_zero & re_zero_p) | (both_re & ~_close(ratio_re, k, re_floor))
    fail(m & src_mes, _Code.MES_PHI)
    fail(m & ~src_mes, _Code.EQUALITY_RE)

    # Im-ratio: Im(z'^2)(|z|^4-1) / ((|z'|^4-1) Im(z^2)) = k
    num_zero = im_zero_p | mod_one
    den_zero = mod_one_p | im_zero
    fail(im_zero & ~num_zero, _Code.SPECIAL_IM_ZERO)
    fail(mod_one & ~den_zero, _Code.SPECIAL_MODULUS_ONE)
    fail(num_zero ^ den_zero, _Code.EQUALITY_IM)
    with np.errstate(divide="ignore", invalid="ignore"):
        b_src = 2 * r2 * sin2_arr(phi) / (r2 * r2 - 1)
        b_dst = 2 * rp2 * sin2_arr(phip) / (rp2 * rp2 - 1)
        ratio_im = b_dst / b_src
    # |z|^4 - 1 and sin(2 phi) lose relative precision near their zeros
    with np.errstate(divide="ignore"):
        im_floor = 16 * _ULP * (1 / np.abs(r2 * r2 - 1) + 1 / np.abs(rp2 * rp2 - 1)
                                + 1 / np.abs(sin2_arr(phi)) + 1 / np.abs(sin2_arr(phip)))
    fail(~num_zero & ~den_zero & ~_close(ratio_im, k, im_floor), _Code.EQUALITY_IM)
    code[sel] = out


def ghz_convertible(src: GhzParams, dst: GhzParams) -> ConvertDecision:
    """Decide whether ``src`` reaches ``dst`` by deterministic LOCC.

    The decision records the first failed condition and, for a generic
    source and target with ``h_i >= g_i``, the witness ``z'`` obtained from
    :func:`solve_target_z`.
    """
    s = canonicalize_ghz(src)
    t = canonicalize_ghz(dst)
    code = _Code(int(ghz_failure_codes(np.array(s.g), s.r, s.phi, np.array(t.g), t.r, t.phi)))
    target_z = None
    if (min(s.g) > 0 and min(t.g) > 0
            and all(gi <= hi + INEQ_TOL for gi, hi in zip(s.g, t.g))):
        target_z = solve_target_z(s, np.maximum(t.g, s.g))
    if code is _Code.OK:
        return ConvertDecision(True, None, target_z)
    return ConvertDecision(False, _CODE_TO_FAILURE[code], target_z)


def convertible(src, dst) -> ConvertDecision:
    """Class-dispatching convertibility; W vs GHZ queries are never convertible."""
    if isinstance(src, GhzParams) and isinstance(dst, GhzParams):
        return ghz_convertible(src, dst)
    if isinstance(src, WParams) and isinstance(dst, WParams):
        ok = w_convertible(src, dst)
        return ConvertDecision(ok, None if ok else FailedCondition.INEQUALITY)
    if isinstance(src, SchmidtVector) and isinstance(dst, SchmidtVector):
        ok = majorizes(src, dst)
        return ConvertDecision(ok, None if ok else FailedCondition.INEQUALITY)
    return ConvertDecision(False, FailedCondition.CROSS_CLASS)
