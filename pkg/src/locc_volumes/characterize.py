"""Forward measure tuples and their inversion back to state parameters.

For a three-qubit state the tuple is ``(C1, C2, C3, E_a, E_s)`` plus the
volume dimensions and, where needed, one disambiguation bit:

* generic GHZ-class states: ``g1`` by bisection on the strictly decreasing
  ``E_a(g1)``, then ``f_z`` from ``E_s`` and at most two ``(r, phi)``
  candidates, split by the bit,
* GHZ-MES states: closed-form inversion of the reduced-state eigenvalues
  per sign pattern; at most two candidates, split by accessible volume,
* vanishing-parameter states: closed form from the concurrences,
* W-class states: all solutions from any three measures.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Sequence, Union

import numpy as np
from scipy.optimize import brentq

from .errors import (AmbiguousInversion, BitRequired, Inconsistent, NoSecondCandidate,
                     NonPhysicalRoot, WrongClass)
from .states import (GHZ_STATE, GhzKind, GhzParams, WParams,
                     canonicalize_ghz, classify_ghz, from_signed_mes, to_signed_mes)
from .volumes import (MeasureTuple, concurrences, ghz_mes_accessible, ghz_volumes,
                      mes_eigs_signed, psi_source, w_volumes)

RESIDUAL_TOL = 1e-8
BISECT_MAX_ITER = 200
DEDUP_TOL = 1e-7


class Ambiguity(str, Enum):
    UNIQUE = "Unique"
    BY_BIT = "ByBit"
    CONJUGATE_PAIR = "ConjugatePair"


@dataclass(frozen=True)
class InversionResult:
    state: Union[WParams, GhzParams]
    residual: float
    ambiguity: Ambiguity
    candidates: tuple = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {"state": self.state.to_dict(), "residual": self.residual,
                "ambiguityResolved": self.ambiguity.value,
                "candidates": [c.to_dict() for c in self.candidates]}


# ---------------------------------------------------------------------------
# forward map


def measure(state: Union[WParams, GhzParams], tol: float = 1e-8) -> MeasureTuple:
    """Measure tuple of a three-qubit state.

    The bit is attached for generic GHZ-class states with ``f_z > 0`` and for
    GHZ-MES states (where it is ``True`` whenever the state is unique).
    """
    if isinstance(state, WParams):
        rep = w_volumes(state)
        return MeasureTuple(*concurrences(state), rep.Ea, rep.Es, rep.dims)
    if not isinstance(state, GhzParams):
        raise WrongClass(f"cannot measure {type(state).__name__}")
    c = canonicalize_ghz(state)
    kind = classify_ghz(c).kind
    rep = ghz_volumes(c, tol=tol)
    bit = None
    if kind is GhzKind.GENERIC and c.f_z > 0:
        bit = compute_bit_generic(c)
    elif kind is GhzKind.MES:
        bit = compute_bit_mes(c, tol=tol)
    return MeasureTuple(*concurrences(c), rep.Ea, rep.Es, rep.dims, bit)


def _rel_residual(got: Sequence[float], want: Sequence[float]) -> float:
    got = np.asarray(got, dtype=float)
    want = np.asarray(want, dtype=float)
    return float(np.max(np.abs(got - want) / np.maximum(np.abs(want), 1.0)))


def _tuple_values(t: MeasureTuple) -> tuple:
    return (t.C1, t.C2, t.C3, t.Ea, t.Es)


# ---------------------------------------------------------------------------
# generic GHZ class


def _g_of_g1(g1, C):
    """``(g2, g3)`` as functions of ``g1``; nan where a radicand is negative."""
    C1, C2, C3 = C
    q = 4 * g1 * g1
    with np.errstate(divide="ignore", invalid="ignore"):
        t2 = (C1 - C2 + q * C3) / (q * (C1 - C2) + C3)
        t3 = (C1 - C3 + q * C2) / (q * (C1 - C3) + C2)
        g2 = 0.5 * np.sqrt(np.where(t2 >= 0, t2, np.nan))
        g3 = 0.5 * np.sqrt(np.where(t3 >= 0, t3, np.nan))
    return g2, g3


def ea_of_g1(g1, C):
    g2, g3 = _g_of_g1(g1, C)
    return 8 * (0.5 - g1) * (0.5 - g2) * (0.5 - g3)


def ea_derivative(g1, C):
    """Closed-form ``dE_a/dg1`` along the curve ``(g1, g2(g1), g3(g1))``."""
    C1, C2, C3 = C
    g2, g3 = _g_of_g1(g1, C)
    q = 4 * g1 * g1
    t1 = (4 * g1 * (1 - 2 * g1) * (0.5 - g3) * (C1 ** 2 + C2 ** 2 - C3 ** 2 - 2 * C1 * C2)
          / ((q * (C1 - C2) + C3) ** 2 * g2))
    t3 = (4 * g1 * (1 - 2 * g1) * (0.5 - g2) * (C1 ** 2 + C3 ** 2 - C2 ** 2 - 2 * C1 * C3)
          / ((q * (C1 - C3) + C2) ** 2 * g3))
    return t1 - 8 * (0.5 - g2) * (0.5 - g3) + t3


def _bisect_g1(C, Ea, iterates: Optional[list] = None) -> float:
    def resid(x):
        v = float(ea_of_g1(x, C))
        return math.inf if math.isnan(v) else v - Ea

    lo, hi = 0.0, 0.5
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if iterates is not None:
            iterates.append(mid)
        if resid(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _bisect_f(target: float) -> float:
    """Solve ``psi(f) = target`` on ``[0, 1]`` (``psi`` strictly decreasing)."""
    if target >= 1:
        return 0.0
    if target <= 0:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if float(psi_source(mid)) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _r_from_rho(rho: float) -> float:
    """``r <= 1`` with ``r^2 / (1 + r^4) = rho``."""
    return math.sqrt(2 * rho / (1 + math.sqrt(max(1 - 4 * rho * rho, 0.0))))


def generic_candidates(t: MeasureTuple, iterates: Optional[list] = None) -> list[GhzParams]:
    """All generic states compatible with the five measures (at most two).

    The first candidate, when present with positive ``f_z``, has
    ``cos(2 phi) > 0``.
    """
    C = t.C
    if min(C) <= 0:
        raise Inconsistent("generic states have all C_i > 0")
    g1 = _bisect_g1(C, t.Ea, iterates)
    g2, g3 = (float(v) for v in _g_of_g1(g1, C))
    g = (g1, g2, g3)
    if not all(0 < gi < 0.5 for gi in g):
        raise NonPhysicalRoot(f"no admissible g for these measures: {g}")
    G = g1 * g2 * g3
    f = _bisect_f((1 - t.Es) / (8 * G))
    K = math.sqrt((1 - 4 * g2 * g2) * (1 - 16 * g1 * g1 * g3 * g3))
    s = math.sqrt(C[1])
    out = []
    if f == 0:
        rho = s / (2 * K)
        if 0 < rho <= 0.5:
            out.append(GhzParams(*g, _r_from_rho(rho), math.pi / 4))
        return out
    for sign in (1.0, -1.0):
        rho = s * (1 + sign * 8 * G * f) / (2 * K)
        if not 0 < rho <= 0.5 + 1e-15:
            continue
        rho = min(rho, 0.5)
        cos2 = sign * f / (2 * rho)
        if abs(cos2) > 1:
            continue
        out.append(canonicalize_ghz(GhzParams(*g, _r_from_rho(rho), 0.5 * math.acos(cos2))))
    return out


def _mes_source_sums(p: GhzParams) -> tuple[float, float]:
    """``sum C_i`` of the MES states ``Psi(h, 1)`` and ``Psi(h, i)``, ``h = (g1, g2, f_z g3)``."""
    h = (p.g1, p.g2, p.f_z * p.g3)
    s1 = sum(concurrences(GhzParams(*h, 1.0, 0.0)))
    s2 = sum(concurrences(GhzParams(*h, 1.0, math.pi / 2)))
    return s1, s2


def compute_bit_generic(p: GhzParams) -> bool:
    """Whether this state's MES source carries the larger ``sum C_i``.

    The source is ``Psi(h, 1)`` for ``cos(2 phi) > 0`` and ``Psi(h, i)``
    otherwise.

    Raises
    ------
    WrongClass
        If ``p`` is not generic.
    ArithmeticError
        If the two sums coincide within ``1e-10`` (only when ``f_z = 0``).
    """
    c = canonicalize_ghz(p)
    if classify_ghz(c).kind is not GhzKind.GENERIC:
        raise WrongClass(f"bit is defined for generic states, got {classify_ghz(c).tag}")
    s1, s2 = _mes_source_sums(c)
    if abs(s1 - s2) <= 1e-10:
        raise ArithmeticError("MES sources have equal bipartite entanglement")
    own = s2 if c.cos2phi < 0 else s1
    return own == max(s1, s2)


def invert_ghz_generic(t: MeasureTuple, bit: Optional[bool] = None,
                       iterates: Optional[list] = None) -> InversionResult:
    """Recover a generic GHZ-class state (up to complex conjugation) from its measures.

    Parameters
    ----------
    t : MeasureTuple
        ``t.bit`` is used when ``bit`` is not given.
    iterates : list, optional
        Receives every bisection point of ``g1``.

    Raises
    ------
    Inconsistent, NonPhysicalRoot, BitRequired, NoSecondCandidate
    """
    bit = t.bit if bit is None else bit
    cands = generic_candidates(t, iterates)
    if not cands:
        raise Inconsistent("no (r, phi) reproduces the source measure")
    f0 = cands[0].f_z == 0 and cands[0].phi == math.pi / 4
    if len(cands) == 2:
        if bit is None:
            raise BitRequired("two generic states share these measures; supply the bit")
        chosen = [c for c in cands if compute_bit_generic(c) == bool(bit)]
        amb = Ambiguity.BY_BIT
    else:
        if bit is not None and f0:
            raise NoSecondCandidate("cos(2 phi) = 0: the state is unique and has no bit")
        chosen = cands if bit is None or f0 else [c for c in cands if compute_bit_generic(c) == bool(bit)]
        amb = Ambiguity.CONJUGATE_PAIR
    if not chosen:
        raise Inconsistent("supplied bit matches no candidate")
    state = chosen[0]
    if state.phi in (0.0, math.pi / 2) or state.r == 1.0:
        amb = Ambiguity.UNIQUE if amb is Ambiguity.CONJUGATE_PAIR else amb
    got = measure(state)
    res = _rel_residual(_tuple_values(got), _tuple_values(t))
    if res > RESIDUAL_TOL:
        raise Inconsistent(f"forward residual {res:.3e} exceeds {RESIDUAL_TOL}")
    return InversionResult(state, res, amb, tuple(cands))


# ---------------------------------------------------------------------------
# GHZ-MES

# sign patterns of c_i = a_i + a_j a_k (a = 2 g, signed); the minimum
# eigenvalue of party i is E_i^- when c_i >= 0 and E_i^+ otherwise
MES_PATTERNS = {1: (1, 1, 1), 2: (1, 1, -1), 3: (1, -1, -1), 4: (-1, 1, -1)}


def mes_min_eigs_from_c(C: Sequence[float]) -> tuple[float, float, float]:
    """Doubled minimum eigenvalues from squared concurrences (qubit reduced states)."""
    return tuple(1 - math.sqrt(max(1 - c, 0.0)) for c in C)


def _mes_solve_pattern(e, sigma):
    """Signed ``g`` for one sign pattern, or ``None`` if the pattern is inconsistent."""
    v = np.asarray(sigma, dtype=float) * (1 - np.asarray(e, dtype=float))
    A = np.array([1 + v.sum(), 1 + v[0] - v[1] - v[2], 1 - v[0] + v[1] - v[2], 1 - v[0] - v[1] + v[2]])
    if np.any(A <= 0):
        return None
    R = np.sqrt(A[0] * A[1:] / (np.prod(A[1:]) / A[1:]))
    a = (R - 1) / (R + 1)
    if not (a[0] > 0 and a[1] > 0 and a[2] != 0):
        return None
    c = a + np.array([a[1] * a[2], a[0] * a[2], a[0] * a[1]])
    if np.any((np.sign(c) != np.asarray(sigma)) & (np.abs(c) > 1e-12)):
        return None
    g = a / 2
    ep, em = mes_eigs_signed(g)
    if np.max(np.abs(np.minimum(ep, em) - e)) > 1e-10:
        return None
    return tuple(float(x) for x in g)


def mes_regions(e: Sequence[float]) -> list[int]:
    """Indices ``k`` of the sign-pattern regions ``J_k`` that contain ``e``."""
    return [k for k, s in MES_PATTERNS.items() if _mes_solve_pattern(e, s) is not None]


def mes_candidates(e: Sequence[float]) -> list[tuple[float, float, float]]:
    """Distinct signed MES parameter triples reproducing the minimum eigenvalues ``e``."""
    out = []
    for s in MES_PATTERNS.values():
        g = _mes_solve_pattern(e, s)
        if g is not None and not any(np.allclose(g, o, atol=DEDUP_TOL, rtol=0) for o in out):
            out.append(g)
    return out


def _ordered_mes_pair(cands, tol):
    """Order two candidates by accessible volume, larger first."""
    vols = [ghz_mes_accessible(from_signed_mes(g), tol).Va for g in cands]
    order = sorted(range(len(cands)), key=lambda i: -vols[i])
    return [cands[i] for i in order], [vols[i] for i in order]


def compute_bit_mes(p: GhzParams, tol: float = 1e-8) -> bool:
    """``True`` when ``p`` has the larger accessible volume of its measure-compatible pair.

    States with a unique preimage get ``True``.
    """
    gs = to_signed_mes(p)
    ep, em = mes_eigs_signed(np.array(gs))
    cands = mes_candidates(np.minimum(ep, em))
    if len(cands) < 2:
        return True
    ordered, _ = _ordered_mes_pair(cands, tol)
    return bool(np.allclose(ordered[0], gs, atol=DEDUP_TOL, rtol=0))


def invert_ghz_mes(e: Sequence[float], bit: Optional[bool] = None,
                   tol: float = 1e-8) -> InversionResult:
    """Recover a GHZ-MES state from its doubled minimum reduced eigenvalues.

    Raises
    ------
    Inconsistent
        If no sign pattern reproduces ``e``.
    BitRequired
        If two states are compatible and no bit is supplied.
    """
    e = tuple(float(v) for v in e)
    if len(e) != 3:
        raise Inconsistent("need three minimum eigenvalues")
    if all(abs(v - 1) <= 1e-12 for v in e):
        return InversionResult(GHZ_STATE, 0.0, Ambiguity.UNIQUE, (GHZ_STATE,))
    cands = mes_candidates(e)
    if not cands:
        raise Inconsistent(f"no GHZ-MES state has minimum eigenvalues {e}")
    amb = Ambiguity.UNIQUE
    if len(cands) == 2:
        if bit is None:
            raise BitRequired("two GHZ-MES states share these eigenvalues; supply the bit")
        cands, _ = _ordered_mes_pair(cands, tol)
        g = cands[0] if bit else cands[1]
        amb = Ambiguity.BY_BIT
    elif len(cands) == 1:
        g = cands[0]
    else:
        raise AmbiguousInversion(f"{len(cands)} GHZ-MES states share these eigenvalues",
                                 [from_signed_mes(c) for c in cands])
    ep, em = mes_eigs_signed(np.array(g))
    res = _rel_residual(np.minimum(ep, em), e)
    if res > RESIDUAL_TOL:
        raise Inconsistent(f"forward residual {res:.3e} exceeds {RESIDUAL_TOL}")
    return InversionResult(from_signed_mes(g), res, amb, tuple(from_signed_mes(c) for c in cands))


# ---------------------------------------------------------------------------
# vanishing parameters

_DIMS_TO_CASE = {(3, 3): (1, False), (3, 2): (2, False), (3, 1): (3, False),
                 (4, 2): (1, True), (4, 1): (2, True), (4, 0): (3, True)}


def invert_ghz_vanishing(t: MeasureTuple) -> InversionResult:
    """Recover a GHZ-class state with vanishing parameters from measures and dimensions.

    The dimensions fix the number of zeros and whether ``r = 1``; the zeros sit
    at the largest concurrences.
    """
    key = (t.dims.accessible, t.dims.source)
    if key not in _DIMS_TO_CASE:
        raise Inconsistent(f"dimensions {key} do not belong to a vanishing-parameter case")
    n0, r_one = _DIMS_TO_CASE[key]
    C = np.asarray(t.C, dtype=float)
    order = np.argsort(-C, kind="stable")
    zeros, free = order[:n0], order[n0:]
    g = np.zeros(3)
    if n0 == 1:
        i, (j, k) = zeros[0], sorted(free)
        den = C[j] + C[k] - C[i]
        M = C[j] * C[k] / den if den > 0 else math.nan
        if not (0 < M <= 1 + 1e-12):
            raise Inconsistent("concurrences do not fit a single vanishing parameter")
        M = 1.0 if r_one else M
        for m in (j, k):
            g[m] = 0.5 * math.sqrt(max(1 - C[m] / M, 0.0))
    elif n0 == 2:
        k = free[0]
        M = 1.0 if r_one else C[zeros].mean()
        g[k] = (1 - t.Es) / 2 if r_one else 0.5 * math.sqrt(max(1 - C[k] / M, 0.0))
    if r_one:
        r = 1.0
    else:
        pa = float(np.prod([0.5 - g[m] for m in free]))
        r = t.Ea / ({1: 4.0, 2: 2.0, 3: 1.0}[n0] * pa)
    if not (0 < r <= 1) or np.any(g >= 0.5):
        raise NonPhysicalRoot(f"no admissible state: g={g.tolist()}, r={r}")
    state = canonicalize_ghz(GhzParams(*g.tolist(), r, 0.0))
    got = measure(state)
    if (got.dims.accessible, got.dims.source) != key:
        raise Inconsistent("reconstructed state falls in a different case")
    res = _rel_residual(_tuple_values(got), _tuple_values(t))
    if res > RESIDUAL_TOL:
        raise Inconsistent(f"forward residual {res:.3e} exceeds {RESIDUAL_TOL}")
    return InversionResult(state, res, Ambiguity.UNIQUE, (state,))


# ---------------------------------------------------------------------------
# W class

W_KEYS = ("C1", "C2", "C3", "Ea", "Es")


def w_measure_dict(x: Sequence[float]) -> dict:
    x0, x1, x2, x3 = x
    s = 1 - x0
    return {"C1": 4 * x1 * (s - x1), "C2": 4 * x2 * (s - x2), "C3": 4 * x3 * (s - x3),
            "Ea": 27 * x1 * x2 * x3, "Es": 1 - x0 ** 3}


def _c_branches(C, s):
    """Both roots of ``4 x (s - x) = C``, or ``None`` if ``s^2 < C``."""
    disc = s * s - C
    if disc < -1e-12:
        return None
    disc = max(disc, 0.0)
    rt = math.sqrt(disc)
    return (0.5 * (s - rt), 0.5 * (s + rt))


def _branch_roots(residual, signs, deg: int, lo: float):
    """Roots ``s`` in ``[lo, 1]`` of ``residual(s, sigma) = 0`` for any sign pattern.

    ``residual`` is a polynomial in ``s`` and the ``sigma_i sqrt(s^2 - C_i)``;
    its product over all sign patterns is a polynomial of degree ``deg`` in
    ``s``.  Its real roots are located by Chebyshev interpolation and then
    polished on each branch that they (nearly) satisfy.
    """
    def prod(x):
        x = np.asarray(x, dtype=complex)
        return np.real(np.prod([residual(x, sg) for sg in signs], axis=0))

    poly = np.polynomial.Chebyshev.interpolate(prod, deg, domain=[0.0, 1.0])
    found = []
    for z in poly.roots():
        if abs(z.imag) > 1e-6 or not (lo - 1e-7 <= z.real <= 1 + 1e-9):
            continue
        s0 = min(max(z.real, lo), 1.0)
        for sg in signs:
            f = lambda x, sg=sg: float(np.real(residual(complex(max(x, lo)), sg)))
            if abs(f(s0)) > 1e-6:
                continue
            root = s0
            for d in (1e-10, 1e-8, 1e-6):
                a, b = max(s0 - d, lo), min(s0 + d, 1.0)
                if a < b and f(a) * f(b) < 0:
                    root = brentq(f, a, b, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=200)
                    break
            found.append((root, sg))
    return found


def _usqrt(x, C):
    return np.lib.scimath.sqrt(x * x - C)


def _w_solutions(m: Mapping[str, float]) -> list[tuple[float, float, float, float]]:
    keys = frozenset(m)
    Cs = {i: m[f"C{i + 1}"] for i in range(3) if f"C{i + 1}" in m}
    sols: list = []

    def add(x0, xs):
        x = (x0, *xs)
        if x0 < -1e-12 or min(xs) <= 0:
            return
        sols.append(x)

    if "Es" in keys:
        x0 = (max(1 - m["Es"], 0.0)) ** (1 / 3)
        s = 1 - x0
        if len(Cs) == 2:
            (i, Ci), (j, Cj) = sorted(Cs.items())
            k = 3 - i - j
            bi, bj = _c_branches(Ci, s), _c_branches(Cj, s)
            if bi is None or bj is None:
                return []
            for xi, xj in itertools.product(bi, bj):
                xs = [0.0, 0.0, 0.0]
                xs[i], xs[j], xs[k] = xi, xj, s - xi - xj
                add(x0, xs)
        else:
            (i, Ci), = Cs.items()
            j, k = [q for q in range(3) if q != i]
            bi = _c_branches(Ci, s)
            if bi is None:
                return []
            for xi in bi:
                if xi <= 0:
                    continue
                rest, prod = s - xi, m["Ea"] / (27 * xi)
                disc = rest * rest - 4 * prod
                if disc < -1e-12:
                    continue
                disc = max(disc, 0.0)
                for xj in (0.5 * (rest - math.sqrt(disc)), 0.5 * (rest + math.sqrt(disc))):
                    xs = [0.0, 0.0, 0.0]
                    xs[i], xs[j], xs[k] = xi, xj, rest - xj
                    add(x0, xs)
    elif len(Cs) == 3:
        # x_i = (s + sigma_i u_i)/2 with u_i = sqrt(s^2 - C_i); sum x_i = s
        C = [Cs[q] for q in range(3)]
        signs = list(itertools.product((-1, 1), repeat=3))

        def res3(x, sg):
            return x + sum(sgi * _usqrt(x, Ci) for sgi, Ci in zip(sg, C))

        for s, sg in _branch_roots(res3, signs, 8, math.sqrt(max(C))):
            u = [math.sqrt(max(s * s - Ci, 0.0)) for Ci in C]
            add(1 - s, [0.5 * (s + sgi * ui) for sgi, ui in zip(sg, u)])
    else:
        (i, Ci), (j, Cj) = sorted(Cs.items())
        k = 3 - i - j
        signs = list(itertools.product((-1, 1), repeat=2))
        Ea = m["Ea"]

        def res2(x, sg):
            ui, uj = sg[0] * _usqrt(x, Ci), sg[1] * _usqrt(x, Cj)
            return 27 * (x + ui) * (x + uj) * (ui + uj) + 8 * Ea

        for s, sg in _branch_roots(res2, signs, 12, math.sqrt(max(Ci, Cj))):
            ui = sg[0] * math.sqrt(max(s * s - Ci, 0.0))
            uj = sg[1] * math.sqrt(max(s * s - Cj, 0.0))
            xs = [0.0, 0.0, 0.0]
            xs[i], xs[j], xs[k] = 0.5 * (s + ui), 0.5 * (s + uj), -0.5 * (ui + uj)
            add(1 - s, xs)

    # keep forward-consistent, deduplicated solutions
    good: list = []
    for x in sols:
        x = (max(x[0], 0.0), *x[1:])
        fw = w_measure_dict(x)
        if _rel_residual([fw[k] for k in m], [m[k] for k in m]) > RESIDUAL_TOL:
            continue
        if not any(np.allclose(x, y, atol=DEDUP_TOL, rtol=0) for y in good):
            good.append(x)
    return good


def invert_w(measures: Mapping[str, float]) -> InversionResult:
    """Recover ``(x0, x1, x2, x3)`` from any three of ``C1, C2, C3, Ea, Es``.

    Every solution in the closed simplex is enumerated.

    Raises
    ------
    Inconsistent
        If no valid W-class state reproduces the measures.
    AmbiguousInversion
        If several do; ``err.candidates`` lists them.
    """
    m = {k: float(v) for k, v in measures.items() if v is not None}
    if len(m) != 3 or not set(m) <= set(W_KEYS):
        raise Inconsistent(f"need exactly three of {W_KEYS}, got {sorted(m)}")
    sols = _w_solutions(m)
    if not sols:
        raise Inconsistent("no W-class state reproduces these measures")
    states = []
    for x in sols:
        x = np.asarray(x)
        x = x / x.sum()
        states.append(WParams(*(float(v) for v in x)))
    if len(states) > 1:
        raise AmbiguousInversion(f"{len(states)} W-class states reproduce these measures", states)
    fw = w_measure_dict((states[0].x0, *states[0].x))
    res = _rel_residual([fw[k] for k in m], [m[k] for k in m])
    return InversionResult(states[0], res, Ambiguity.UNIQUE, tuple(states))
