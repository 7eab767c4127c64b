"""Canonical parameterizations of bipartite and three-qubit pure states.

Bipartite states are represented by their sorted Schmidt vector.  Three-qubit
states are represented by the LU canonical forms of the two genuinely
entangled SLOCC classes:

* W class, ``sqrt(x0)|000> + sqrt(x1)|100> + sqrt(x2)|010> + sqrt(x3)|001>``
* GHZ class, ``g_x^1 (x) g_x^2 (x) g_x^3 P_z |GHZ>`` with
  ``(g_x^i)^dagger g_x^i = 1/2 + g_i sigma_x`` and ``P_z = diag(z, 1/z)``,
  ``z = r exp(i phi)``.

GHZ-class parameters are canonicalized so that ``0 < r <= 1`` (``z -> 1/z``),
``0 <= phi <= pi/2`` (complex conjugation) and ``phi = 0`` whenever some
``g_i`` vanishes.  All boundary decisions use ``EPS_CLASS``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import Biseparable, NotNormalized, OutOfRange

EPS_CLASS = 1e-10
NORM_TOL = 1e-12


def _finite(values, name):
    for v in values:
        if not math.isfinite(v):
            raise OutOfRange(f"{name}: non-finite value {v!r}")


# ---------------------------------------------------------------------------
# bipartite


@dataclass(frozen=True)
class SchmidtVector:
    """Schmidt coefficients (reduced-state eigenvalues), sorted non-increasing."""

    lam: tuple[float, ...]

    def __post_init__(self):
        lam = tuple(float(v) for v in self.lam)
        _finite(lam, "SchmidtVector")
        if len(lam) < 2:
            raise OutOfRange("SchmidtVector needs d >= 2")
        if any(v < -NORM_TOL or v > 1 + NORM_TOL for v in lam):
            raise OutOfRange(f"Schmidt coefficients must lie in [0, 1]: {lam}")
        if abs(math.fsum(lam) - 1.0) > NORM_TOL:
            raise NotNormalized(f"Schmidt coefficients sum to {math.fsum(lam)!r}")
        if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
            raise OutOfRange("SchmidtVector must be sorted non-increasing")
        object.__setattr__(self, "lam", lam)

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "SchmidtVector":
        """Sort ``values`` in non-increasing order and validate."""
        return cls(tuple(sorted((float(v) for v in values), reverse=True)))

    @property
    def d(self) -> int:
        return len(self.lam)

    def to_dict(self) -> dict:
        return {"class": "bipartite", "lambda": list(self.lam)}

    @classmethod
    def from_dict(cls, data: dict) -> "SchmidtVector":
        return cls.from_values(data["lambda"])


# ---------------------------------------------------------------------------
# W class


@dataclass(frozen=True)
class WParams:
    x0: float
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        _check_w(self.x0, self.x1, self.x2, self.x3)

    @property
    def x(self) -> tuple[float, float, float]:
        return (self.x1, self.x2, self.x3)

    def to_dict(self) -> dict:
        return {"class": "w", "x0": self.x0, "x1": self.x1, "x2": self.x2, "x3": self.x3}

    @classmethod
    def from_dict(cls, data: dict) -> "WParams":
        return validate_w([data["x0"], data["x1"], data["x2"], data["x3"]])


def _check_w(x0, x1, x2, x3):
    vals = (x0, x1, x2, x3)
    _finite(vals, "WParams")
    if any(v < 0 or v > 1 for v in vals):
        raise OutOfRange(f"W parameters must lie in [0, 1]: {vals}")
    if abs(math.fsum(vals) - 1.0) > NORM_TOL:
        raise NotNormalized(f"W parameters sum to {math.fsum(vals)!r}")
    if min(x1, x2, x3) <= 0:
        raise Biseparable("x1, x2, x3 must be > 0 for a genuinely entangled W-class state")


def validate_w(raw: Sequence[float]) -> WParams:
    """Build ``WParams`` from four raw reals ``(x0, x1, x2, x3)``.

    Raises
    ------
    NotNormalized, Biseparable, OutOfRange
    """
    vals = [float(v) for v in raw]
    if len(vals) != 4:
        raise OutOfRange(f"W state needs 4 parameters, got {len(vals)}")
    _finite(vals, "WParams")
    if any(v < 0 or v > 1 for v in vals):
        raise OutOfRange(f"W parameters must lie in [0, 1]: {vals}")
    if abs(math.fsum(vals) - 1.0) > NORM_TOL:
        raise NotNormalized(f"W parameters sum to {math.fsum(vals)!r}")
    if min(vals[1:]) <= 0:
        raise Biseparable("x1, x2, x3 must be > 0 for a genuinely entangled W-class state")
    return WParams(*vals)


W_STATE = WParams(0.0, 1 / 3, 1 / 3, 1 - 2 / 3)


# ---------------------------------------------------------------------------
# GHZ class


class GhzKind(str, Enum):
    GENERIC = "GenericNonMes"
    MES = "Mes"
    VANISHING_ONE = "VanishingOne"
    VANISHING_TWO = "VanishingTwo"
    VANISHING_THREE = "VanishingThree"
    GHZ_STATE = "GhzState"


@dataclass(frozen=True)
class VolumeDimension:
    accessible: int
    source: int

    def to_dict(self) -> dict:
        return {"accessible": self.accessible, "source": self.source}

    @classmethod
    def from_dict(cls, data) -> "VolumeDimension":
        if isinstance(data, (list, tuple)):
            return cls(int(data[0]), int(data[1]))
        return cls(int(data["accessible"]), int(data["source"]))


@dataclass(frozen=True)
class GhzClass:
    """Case taxonomy tag.  ``zeros`` holds the 1-based indices of vanishing g_i."""

    kind: GhzKind
    zeros: tuple[int, ...] = ()
    r_is_one: bool = False

    @property
    def tag(self) -> str:
        if self.kind in (GhzKind.VANISHING_ONE, GhzKind.VANISHING_TWO):
            return f"{self.kind.value}({','.join(map(str, self.zeros))})"
        return self.kind.value

    @property
    def dims(self) -> VolumeDimension:
        return _DIMS[(self.kind, self.r_is_one)]

    def to_dict(self) -> dict:
        return {"tag": self.tag, "kind": self.kind.value, "zeros": list(self.zeros),
                "rIsOne": self.r_is_one}


_DIMS = {
    (GhzKind.GENERIC, False): VolumeDimension(3, 3),
    (GhzKind.GENERIC, True): VolumeDimension(3, 3),
    (GhzKind.MES, True): VolumeDimension(4, 0),
    (GhzKind.VANISHING_ONE, False): VolumeDimension(3, 3),
    (GhzKind.VANISHING_TWO, False): VolumeDimension(3, 2),
    (GhzKind.VANISHING_THREE, False): VolumeDimension(3, 1),
    (GhzKind.VANISHING_ONE, True): VolumeDimension(4, 2),
    (GhzKind.VANISHING_TWO, True): VolumeDimension(4, 1),
    (GhzKind.GHZ_STATE, True): VolumeDimension(4, 0),
}


@dataclass(frozen=True)
class GhzParams:
    """GHZ-class coordinates ``(g1, g2, g3, r, phi)`` with ``z = r e^{i phi}``.

    The constructor only checks the raw ranges (``0 <= g_i < 1/2``, ``r > 0``);
    use :func:`validate_ghz` or :func:`canonicalize_ghz` for the canonical
    representative.
    """

    g1: float
    g2: float
    g3: float
    r: float
    phi: float = 0.0

    def __post_init__(self):
        vals = (self.g1, self.g2, self.g3, self.r, self.phi)
        _finite(vals, "GhzParams")
        if any(g < 0 or g >= 0.5 for g in vals[:3]):
            raise OutOfRange(f"g_i must lie in [0, 1/2): {vals[:3]}")
        if self.r <= 0:
            raise OutOfRange(f"r must be > 0, got {self.r}")

    @property
    def g(self) -> tuple[float, float, float]:
        return (self.g1, self.g2, self.g3)

    @property
    def z(self) -> complex:
        return complex(self.r * math.cos(self.phi), self.r * math.sin(self.phi))

    @property
    def G(self) -> float:
        return self.g1 * self.g2 * self.g3

    @property
    def cos2phi(self) -> float:
        """``cos(2 phi)``, exactly 0 on the snapped values ``phi = pi/4, 3pi/4``."""
        if self.phi in (math.pi / 4, 3 * math.pi / 4):
            return 0.0
        return math.cos(2 * self.phi)

    @property
    def sin2phi(self) -> float:
        """``sin(2 phi)``, exactly 0 on the snapped values ``phi = 0, pi/2``."""
        if self.phi in (0.0, math.pi / 2):
            return 0.0
        return math.sin(2 * self.phi)

    @property
    def a_z(self) -> float:
        """``2 Re(z^2) / (|z|^4 + 1)``."""
        r2 = self.r * self.r
        return 2 * r2 * self.cos2phi / (r2 * r2 + 1)

    @property
    def b_z(self) -> float:
        """``2 Im(z^2) / (|z|^4 - 1)``; infinite (signed) or nan when ``|z| = 1``."""
        r2 = self.r * self.r
        num = 2 * r2 * self.sin2phi
        den = r2 * r2 - 1
        if den == 0:
            return math.copysign(math.inf, -num) if num != 0 else math.nan
        return num / den

    @property
    def f_z(self) -> float:
        """``2 |Re(z^2)| / (1 + |z|^4)``."""
        return abs(self.a_z)

    def to_dict(self) -> dict:
        return {"class": "ghz", "g1": self.g1, "g2": self.g2, "g3": self.g3,
                "r": self.r, "phi": self.phi, "tag": classify_ghz(self).tag}

    @classmethod
    def from_dict(cls, data: dict) -> "GhzParams":
        return validate_ghz([data["g1"], data["g2"], data["g3"], data["r"], data.get("phi", 0.0)])


def canonical_arrays(g, r, phi):
    """Vectorized canonicalization of GHZ parameters.

    ``g`` has shape ``(..., 3)``; ``r`` and ``phi`` broadcast against ``g[..., 0]``.
    Returns new ``(g, r, phi)`` arrays.
    """
    g = np.array(g, dtype=float, copy=True)
    r = np.array(r, dtype=float, copy=True)
    phi = np.array(phi, dtype=float, copy=True)
    r, phi = np.broadcast_arrays(r, phi)
    r = r.copy()
    phi = phi.copy()
    g[g < EPS_CLASS] = 0.0
    inv = r > 1
    r[inv] = 1 / r[inv]
    phi[inv] = -phi[inv]
    r[np.abs(r - 1) < EPS_CLASS] = 1.0
    phi = np.mod(phi, math.pi)
    phi = np.where(phi > math.pi / 2, math.pi - phi, phi)
    for target in (0.0, math.pi / 4, math.pi / 2):
        phi[np.abs(phi - target) < EPS_CLASS] = target
    phi[np.any(g == 0, axis=-1)] = 0.0
    return g, r, phi


def cos2_arr(phi):
    """Vectorized ``cos(2 phi)`` that is exactly 0 at ``phi = pi/4, 3pi/4``."""
    phi = np.asarray(phi, dtype=float)
    return np.where((phi == math.pi / 4) | (phi == 3 * math.pi / 4), 0.0, np.cos(2 * phi))


def sin2_arr(phi):
    """Vectorized ``sin(2 phi)`` that is exactly 0 at ``phi = 0, pi/2``."""
    phi = np.asarray(phi, dtype=float)
    return np.where((phi == 0) | (phi == math.pi / 2), 0.0, np.sin(2 * phi))


def canonicalize_ghz(p: GhzParams) -> GhzParams:
    """Canonical LU/conjugation representative of ``p``.

    Enforces ``|z| <= 1`` via ``z -> 1/z``, folds ``phi`` into ``[0, pi/2]``
    via ``phi -> pi - phi``, sets ``phi = 0`` if some ``g_i`` vanishes and
    snaps values within ``EPS_CLASS`` of a case boundary onto it.
    """
    g, r, phi = canonical_arrays(np.array(p.g), p.r, p.phi)
    return GhzParams(float(g[0]), float(g[1]), float(g[2]), float(r), float(phi))


def validate_ghz(raw: Sequence[float]) -> GhzParams:
    """Build canonical ``GhzParams`` from ``(g1, g2, g3, r[, phi])``."""
    vals = [float(v) for v in raw]
    if len(vals) == 4:
        vals.append(0.0)
    if len(vals) != 5:
        raise OutOfRange(f"GHZ state needs 4 or 5 parameters, got {len(vals)}")
    return canonicalize_ghz(GhzParams(*vals))


def classify_ghz(p: GhzParams) -> GhzClass:
    """Case taxonomy of ``p`` (evaluated on its canonical form)."""
    c = canonicalize_ghz(p)
    zeros = tuple(i + 1 for i, gi in enumerate(c.g) if gi == 0.0)
    r_is_one = c.r == 1.0
    if len(zeros) == 3:
        return GhzClass(GhzKind.GHZ_STATE if r_is_one else GhzKind.VANISHING_THREE, zeros, r_is_one)
    if len(zeros) == 2:
        return GhzClass(GhzKind.VANISHING_TWO, zeros, r_is_one)
    if len(zeros) == 1:
        return GhzClass(GhzKind.VANISHING_ONE, zeros, r_is_one)
    if r_is_one and c.phi in (0.0, math.pi / 2):
        return GhzClass(GhzKind.MES, (), True)
    return GhzClass(GhzKind.GENERIC, (), r_is_one)


GHZ_STATE = GhzParams(0.0, 0.0, 0.0, 1.0, 0.0)


def to_signed_mes(p: GhzParams) -> tuple[float, float, float]:
    """Signed-g3 encoding of a GHZ-MES state: ``z = i`` becomes ``g3 < 0``."""
    c = canonicalize_ghz(p)
    if classify_ghz(c).kind not in (GhzKind.MES, GhzKind.GHZ_STATE):
        from .errors import WrongClass
        raise WrongClass("signed encoding is defined for GHZ-MES states only")
    sign = -1.0 if c.phi == math.pi / 2 else 1.0
    return (c.g1, c.g2, sign * c.g3)


def from_signed_mes(gs: Sequence[float]) -> GhzParams:
    g1, g2, g3 = (float(v) for v in gs)
    phi = math.pi / 2 if g3 < 0 else 0.0
    return canonicalize_ghz(GhzParams(abs(g1), abs(g2), abs(g3), 1.0, phi))


def state_from_dict(data: dict):
    """Deserialize any state object from its JSON dict (``class`` key required)."""
    kind = str(data.get("class", "")).lower()
    if kind == "w":
        return WParams.from_dict(data)
    if kind == "ghz":
        return GhzParams.from_dict(data)
    if kind == "bipartite":
        return SchmidtVector.from_dict(data)
    raise OutOfRange(f"unknown state class {data.get('class')!r}")
