"""Accessible and source volumes, the normalized measures ``E_a``, ``E_s``,
and the bipartite quantities used to characterize three-qubit states.

Normalization: ``E_a = V_a / V_a^sup`` and ``E_s = 1 - V_s / V_s^sup``, where
the suprema are fixed per case.  Each report also carries the dimension of
the accessible and source sets, since volumes of different dimension are not
comparable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np
from scipy.special import gammainc

from . import polytope
from .cubature import integrate
from .errors import DimensionTooLarge, WrongClass
from .states import (GhzKind, GhzParams, SchmidtVector, VolumeDimension, WParams,
                     canonicalize_ghz, classify_ghz, cos2_arr, to_signed_mes)

DEFAULT_CUBATURE_TOL = 1e-8
EXACT_MAX_D = 4


class Method(str, Enum):
    CLOSED_FORM = "ClosedForm"
    CUBATURE = "Cubature"
    MONTE_CARLO = "MonteCarlo"
    EXACT_POLYTOPE = "ExactPolytope"


@dataclass(frozen=True)
class VolumeReport:
    Va: float
    Vs: float
    Ea: float
    Es: float
    VaSup: float
    VsSup: float
    dims: VolumeDimension
    method: Method
    # absolute error of Va (cubature) or standard errors (Monte Carlo)
    Va_err: float = 0.0
    Vs_err: float = 0.0

    @classmethod
    def build(cls, Va, Vs, VaSup, VsSup, dims, method, Va_err=0.0, Vs_err=0.0) -> "VolumeReport":
        Va = max(float(Va), 0.0)
        Vs = max(float(Vs), 0.0)
        Ea = min(max(Va / VaSup, 0.0), 1.0)
        Es = min(max(1.0 - Vs / VsSup, 0.0), 1.0) if VsSup > 0 else 1.0
        return cls(Va, Vs, Ea, Es, float(VaSup), float(VsSup), dims, method,
                   float(Va_err), float(Vs_err))

    def to_dict(self) -> dict:
        return {"Va": self.Va, "Vs": self.Vs, "Ea": self.Ea, "Es": self.Es,
                "VaSup": self.VaSup, "VsSup": self.VsSup, "dims": self.dims.to_dict(),
                "method": self.method.value, "VaErr": self.Va_err, "VsErr": self.Vs_err}


@dataclass(frozen=True)
class MeasureTuple:
    C1: float
    C2: float
    C3: float
    Ea: float
    Es: float
    dims: VolumeDimension
    bit: Optional[bool] = None
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def C(self) -> tuple[float, float, float]:
        return (self.C1, self.C2, self.C3)

    def to_dict(self) -> dict:
        out = {"C1": self.C1, "C2": self.C2, "C3": self.C3, "Ea": self.Ea, "Es": self.Es,
               "dims": self.dims.to_dict(), "bit": self.bit}
        out.update(self.extra)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "MeasureTuple":
        dims = data.get("dims")
        dims = VolumeDimension.from_dict(dims) if dims is not None else VolumeDimension(3, 3)
        bit = data.get("bit")
        return cls(float(data["C1"]), float(data["C2"]), float(data["C3"]),
                   float(data["Ea"]), float(data["Es"]), dims,
                   None if bit is None else bool(bit))


# ---------------------------------------------------------------------------
# W class


def w_volumes(p: WParams) -> VolumeReport:
    """``V_a = x1 x2 x3`` (sup 1/27) and ``V_s = x0^3 / 6`` (sup 1/6)."""
    Va = p.x1 * p.x2 * p.x3
    Vs = p.x0 ** 3 / 6
    dims = VolumeDimension(3, 0 if p.x0 == 0 else 3)
    return VolumeReport.build(Va, Vs, 1 / 27, 1 / 6, dims, Method.CLOSED_FORM)


# ---------------------------------------------------------------------------
# GHZ class, generic


def psi_source(f):
    """Source-volume shape factor ``1 - f (1 - ln f + ln(f)^2 / 2)`` with ``psi(0) = 1``.

    This is the Gamma(3, 1) CDF at ``-ln f``; the regularized incomplete
    gamma avoids the cancellation of the explicit form as ``f -> 1``.
    """
    f = np.asarray(f, dtype=float)
    with np.errstate(divide="ignore"):
        out = gammainc(3.0, -np.log(np.clip(f, 0.0, 1.0)))
    return np.where(f <= 0, 1.0, np.where(f >= 1, 0.0, out))


def ghz_generic_volumes(p: GhzParams) -> VolumeReport:
    """Closed-form volumes of a generic (non-MES, no vanishing ``g_i``) GHZ-class state.

    ``V_a = prod(1/2 - g_i)`` and ``V_s = G psi(f_z)``; both suprema are 1/8.
    """
    c = canonicalize_ghz(p)
    if classify_ghz(c).kind is not GhzKind.GENERIC:
        raise WrongClass(f"generic volumes need a GenericNonMes state, got {classify_ghz(c).tag}")
    Va = float(np.prod([0.5 - gi for gi in c.g]))
    Vs = c.G * float(psi_source(c.f_z))
    return VolumeReport.build(Va, Vs, 0.125, 0.125, VolumeDimension(3, 3), Method.CLOSED_FORM)


# ---------------------------------------------------------------------------
# GHZ class, MES


def mes_integrand(h, G):
    """``1 - sqrt(x - sqrt(x^2 - 1))`` with ``x = h1 h2 h3 / G``.

    The subtracted term is the lower end of the reachable ``r'`` interval;
    it is evaluated as ``1 / sqrt(x + sqrt(x^2 - 1))`` to avoid cancellation.
    """
    x = np.prod(h, axis=-1) / G
    x = np.maximum(x, 1.0)
    return 1.0 - 1.0 / np.sqrt(x + np.sqrt((x - 1.0) * (x + 1.0)))


def ghz_mes_accessible(p: GhzParams, tol: float = DEFAULT_CUBATURE_TOL) -> VolumeReport:
    """Accessible volume of a GHZ-MES state by adaptive cubature over ``h``.

    The ``r'`` integral is done analytically, leaving a 3-D integral over
    ``prod [|g_i|, 1/2)``.  ``V_s = 0`` (MES states have no sources).

    Raises
    ------
    WrongClass
        For a state that is not in the GHZ-MES (or is the GHZ state itself).
    CubatureNotConverged
    """
    c = canonicalize_ghz(p)
    if classify_ghz(c).kind is not GhzKind.MES:
        raise WrongClass(f"MES cubature needs a GHZ-MES state, got {classify_ghz(c).tag}")
    g = np.abs(np.asarray(to_signed_mes(c)))
    G = float(np.prod(g))

    # h_i = g_i exp(u_i) resolves the boundary layers near h_i ~ g_i for small g
    def f(u):
        h = g * np.exp(u)
        return mes_integrand(h, G) * np.prod(h, axis=-1)

    res = integrate(f, np.zeros(3), np.log(0.5 / g), tol=tol)
    return VolumeReport.build(res.value, 0.0, 0.125, 0.125, VolumeDimension(4, 0),
                              Method.CUBATURE, Va_err=res.error)


# ---------------------------------------------------------------------------
# GHZ class, vanishing parameters


def ghz_vanishing_volumes(p: GhzParams) -> VolumeReport:
    """Volumes of GHZ-class states with at least one vanishing ``g_i``."""
    c = canonicalize_ghz(p)
    cls = classify_ghz(c)
    if cls.kind not in (GhzKind.VANISHING_ONE, GhzKind.VANISHING_TWO,
                        GhzKind.VANISHING_THREE, GhzKind.GHZ_STATE):
        raise WrongClass(f"vanishing-parameter volumes need some g_i = 0, got {cls.tag}")
    free = [gi for gi in c.g if gi != 0.0]
    n0 = 3 - len(free)
    pa = float(np.prod([0.5 - gi for gi in free]))
    pg = float(np.prod(free)) if free else 1.0
    r = c.r
    if not cls.r_is_one:
        Va = pa * r * (0.75 if n0 == 3 else 1.0)
        Va_sup = {1: 0.25, 2: 0.5, 3: 0.75}[n0]
        Vs = pg * (1.0 - r)
        Vs_sup = Va_sup if n0 < 3 else 1.0
        return VolumeReport.build(Va, Vs, Va_sup, Vs_sup, cls.dims, Method.CLOSED_FORM)
    Va = 2.0 * 0.5 ** n0 * pa
    if n0 == 3:
        return VolumeReport.build(Va, 0.0, 0.25, 1.0, cls.dims, Method.CLOSED_FORM)
    return VolumeReport.build(Va, pg, 0.25, 0.25 if n0 == 1 else 0.5, cls.dims, Method.CLOSED_FORM)


def ghz_volumes(p: GhzParams, tol: float = DEFAULT_CUBATURE_TOL) -> VolumeReport:
    """Dispatch to the volume formulas of the state's case."""
    kind = classify_ghz(p).kind
    if kind is GhzKind.GENERIC:
        return ghz_generic_volumes(p)
    if kind is GhzKind.MES:
        return ghz_mes_accessible(p, tol)
    return ghz_vanishing_volumes(p)


def volumes(state: Union[WParams, GhzParams, SchmidtVector], **kw) -> VolumeReport:
    if isinstance(state, WParams):
        return w_volumes(state)
    if isinstance(state, GhzParams):
        return ghz_volumes(state, **kw)
    return bipartite_volumes(state, **kw)


# ---------------------------------------------------------------------------
# bipartite


def chamber_volume(d: int) -> float:
    """Volume of the ordered simplex ``x1 >= ... >= xd >= 0`` in ``(x1..x_{d-1})`` coordinates."""
    return 1.0 / (math.factorial(d) * math.factorial(d - 1))


def bipartite_volumes(lam: Union[SchmidtVector, Sequence[float]], method: str = "auto",
                      n: int = 1_000_000, seed: int = 0) -> VolumeReport:
    """Volumes of the majorization polytopes of a Schmidt vector.

    ``V_a`` measures the sorted vectors ``x`` with ``lam ≺ x`` and ``V_s``
    those with ``x ≺ lam``, both in the coordinates ``(x1, ..., x_{d-1})``.
    The supremum of both is the volume of the whole ordered simplex.

    Parameters
    ----------
    method : {"auto", "exact", "mc"}
        ``auto`` is exact for ``d <= 4`` and Monte Carlo beyond.
    n, seed
        Sample count and seed for the Monte Carlo path.
    """
    if not isinstance(lam, SchmidtVector):
        lam = SchmidtVector.from_values(lam)
    d = lam.d
    sup = chamber_volume(d)
    dims = VolumeDimension(d - 1, d - 1)
    method = method.lower()
    if method not in ("auto", "exact", "mc"):
        raise ValueError(f"unknown method {method!r}")
    if d == 2 and method != "mc":
        l1 = lam.lam[0]
        return VolumeReport.build(1.0 - l1, l1 - 0.5, sup, sup, dims, Method.CLOSED_FORM)
    if method == "exact" and d > EXACT_MAX_D:
        raise DimensionTooLarge(f"exact polytope volumes are limited to d <= {EXACT_MAX_D}")
    if method == "mc" or d > EXACT_MAX_D:
        from .oracle import mc_bipartite
        ea, es = mc_bipartite(lam, n, seed)
        return VolumeReport.build(ea.value, es.value, sup, sup, dims, Method.MONTE_CARLO,
                                  ea.stderr, es.stderr)
    Va = polytope.accessible_volume(lam.lam)
    Vs = polytope.source_volume(lam.lam)
    return VolumeReport.build(Va, Vs, sup, sup, dims, Method.EXACT_POLYTOPE)


# ---------------------------------------------------------------------------
# bipartite entanglement of three-qubit states


def ghz_concurrence_arrays(g, r, phi):
    """Vectorized squared concurrences ``C_i`` for GHZ-class parameters, shape ``(..., 3)``."""
    g = np.asarray(g, dtype=float)
    r = np.asarray(r, dtype=float)[..., None]
    phi = np.asarray(phi, dtype=float)[..., None]
    G = np.prod(g, axis=-1, keepdims=True)
    r2 = r * r
    den = 1.0 + r2 * r2 + 16.0 * r2 * G * cos2_arr(phi)
    gjk2 = np.stack([g[..., 1] * g[..., 2], g[..., 0] * g[..., 2], g[..., 0] * g[..., 1]], axis=-1) ** 2
    return 4 * r2 * r2 * (1 - 4 * g * g) * (1 - 16 * gjk2) / (den * den)


def concurrences(state: Union[WParams, GhzParams]) -> tuple[float, float, float]:
    """Squared concurrence of each party against the other two."""
    if isinstance(state, WParams):
        return tuple(4 * xi * (1 - xi - state.x0) for xi in state.x)
    if isinstance(state, GhzParams):
        c = ghz_concurrence_arrays(np.array(state.g), state.r, state.phi)
        return tuple(float(v) for v in c)
    raise WrongClass(f"concurrences need a three-qubit state, got {type(state).__name__}")


def mes_eigs_signed(gs):
    """``(E^+, E^-)`` arrays for signed MES parameters ``gs`` of shape ``(..., 3)``.

    ``E_i^± = (1 ± 2 g_i)(1 ± 4 g_j g_k) / (1 + 8 g1 g2 g3)`` are twice the
    eigenvalues of the single-party reduced states.
    """
    gs = np.asarray(gs, dtype=float)
    gjk = np.stack([gs[..., 1] * gs[..., 2], gs[..., 0] * gs[..., 2], gs[..., 0] * gs[..., 1]], axis=-1)
    q = 1 + 8 * np.prod(gs, axis=-1, keepdims=True)
    return (1 + 2 * gs) * (1 + 4 * gjk) / q, (1 - 2 * gs) * (1 - 4 * gjk) / q


def mes_min_eigs(p: Union[GhzParams, Sequence[float]]):
    """Minimum (doubled) reduced-state eigenvalues of a GHZ-MES state.

    ``p`` is either a ``GhzParams`` in the MES or a signed triple
    ``(g1, g2, g3)`` with ``z = 1``.  Returns ``(mins, branches)`` where
    ``branches[i]`` is ``"-"`` or ``"+"``.
    """
    gs = to_signed_mes(p) if isinstance(p, GhzParams) else tuple(float(v) for v in p)
    if any(abs(v) >= 0.5 for v in gs):
        raise WrongClass("signed MES parameters must lie in (-1/2, 1/2)")
    ep, em = mes_eigs_signed(np.array(gs))
    mins = tuple(float(min(a, b)) for a, b in zip(ep, em))
    branches = tuple("-" if b <= a else "+" for a, b in zip(ep, em))
    return mins, branches
