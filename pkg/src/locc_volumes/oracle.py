"""Seeded samplers and Monte-Carlo volume estimates built on the convert predicates.

Every estimate counts hits of an LOCC-convertibility predicate over a box of
candidate states.  Samples come in fixed chunks of ``CHUNK`` draws; chunk
``c`` of stream ``s`` uses its own generator seeded by ``(seed, s, c)``, and
hit counts are integers, so results do not depend on how chunks are spread
over worker threads.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .convert import _z_for_ratio, ghz_failure_codes, majorized_mask
from .errors import UnsupportedCase
from .states import (GHZ_STATE, GhzKind, GhzParams, SchmidtVector, WParams, canonical_arrays,
                     canonicalize_ghz, classify_ghz)
from .volumes import chamber_volume, volumes

CHUNK = 65536
ACCESSIBLE = "Accessible"
SOURCE = "Source"
_STREAMS = {ACCESSIBLE: 1, SOURCE: 2, "bipartite": 3, "sample": 4}


@dataclass(frozen=True)
class VolumeEstimate:
    value: float
    stderr: float
    samples: int
    seed: int
    region: str
    hits: int = 0
    box: float = 0.0

    def to_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "samples": self.samples,
                "seed": self.seed, "region": self.region, "hits": self.hits, "box": self.box}


def worker_count() -> int:
    env = os.environ.get("LOCC_VOLUMES_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def chunk_rng(seed: int, stream: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed % 2 ** 64, stream, index])))


def _chunks(n: int):
    return [(i, min(CHUNK, n - i * CHUNK)) for i in range((n + CHUNK - 1) // CHUNK)]


def count_hits(hit_fn: Callable[[np.random.Generator, int], int], n: int, seed: int,
               stream: int, workers: Optional[int] = None) -> int:
    """Sum ``hit_fn(rng, m)`` over the chunk decomposition of ``n`` draws."""
    chunks = _chunks(n)
    workers = min(workers or worker_count(), len(chunks)) or 1
    run = lambda c: int(hit_fn(chunk_rng(seed, stream, c[0]), c[1]))  # noqa: E731
    if workers == 1:
        return sum(map(run, chunks))
    with ThreadPoolExecutor(workers) as ex:
        return sum(ex.map(run, chunks))


def estimate(hit_fn, box: float, n: int, seed: int, stream: int, region: str,
             workers: Optional[int] = None) -> VolumeEstimate:
    """Hit-or-miss estimate ``box * hits / n`` with binomial standard error."""
    if n < 1:
        raise ValueError("need n >= 1")
    hits = count_hits(hit_fn, n, seed, stream, workers) if box > 0 else 0
    p = hits / n
    return VolumeEstimate(box * p, box * math.sqrt(p * (1 - p) / n), n, seed, region, hits, box)


def mc_box(indicator: Callable[[np.ndarray], np.ndarray], lower, upper, n: int, seed: int,
           stream: int = 0, workers: Optional[int] = None) -> VolumeEstimate:
    """Volume of ``{y in box : indicator(y)}`` for a vectorized indicator."""
    lower = np.asarray(lower, dtype=float)
    width = np.asarray(upper, dtype=float) - lower

    def hit(rng, m):
        return np.count_nonzero(indicator(lower + width * rng.random((m, lower.size))))

    return estimate(hit, float(np.prod(width)), n, seed, stream, "box", workers)


# ---------------------------------------------------------------------------
# samplers


def _draw(n: int, seed: int, stream: int, fn) -> np.ndarray:
    return np.concatenate([fn(chunk_rng(seed, stream, i), m) for i, m in _chunks(n)])


def sample_w_array(n: int, seed: int) -> np.ndarray:
    """``(n, 4)`` array of ``(x0, x1, x2, x3)`` uniform on the simplex."""
    return _draw(n, seed, _STREAMS["sample"], lambda rng, m: rng.dirichlet(np.ones(4), m))


def sample_w(n: int, seed: int) -> list[WParams]:
    """``n`` W-class states uniform in the simplex of ``(x1, x2, x3)``."""
    out = []
    for row in sample_w_array(n, seed):
        x = row / row.sum()
        x0 = max(1.0 - x[1] - x[2] - x[3], 0.0)
        out.append(WParams(x0, float(x[1]), float(x[2]), 1.0 - x0 - float(x[1]) - float(x[2])))
    return out


_TAG_ZEROS = {GhzKind.VANISHING_ONE: 1, GhzKind.VANISHING_TWO: 2, GhzKind.VANISHING_THREE: 3}


def _parse_tag(tag: str):
    """``"VanishingTwo(1,3)"`` -> ``(GhzKind.VANISHING_TWO, (1, 3))``."""
    tag = tag.strip()
    zeros = None
    if "(" in tag:
        tag, rest = tag.split("(", 1)
        zeros = tuple(int(v) for v in rest.rstrip(")").split(",") if v.strip())
    try:
        kind = GhzKind(tag)
    except ValueError:
        raise UnsupportedCase(f"unknown GHZ class tag {tag!r}") from None
    return kind, zeros


def sample_ghz_array(tag: str, n: int, seed: int, r_is_one: bool = False) -> np.ndarray:
    """``(n, 5)`` canonical ``(g1, g2, g3, r, phi)`` rows of the given case.

    Vanishing tags without explicit indices draw the vanishing positions
    uniformly.  ``r_is_one`` selects the ``r = 1`` variant of the vanishing
    cases (``GhzState`` always has ``r = 1``, ``VanishingThree`` never).
    """
    kind, zeros = _parse_tag(tag)

    def draw(rng, m):
        u = rng.random((m, 5))
        g = 0.5 * u[:, :3]
        r = 1.0 - u[:, 3]
        phi = math.pi * u[:, 4]
        if kind is GhzKind.MES:
            r[:] = 1.0
            phi = np.where(rng.random(m) < 0.5, 0.0, math.pi / 2)
        elif kind is GhzKind.GHZ_STATE:
            g[:] = 0.0
            r[:] = 1.0
        elif kind in _TAG_ZEROS:
            nz = _TAG_ZEROS[kind]
            if zeros is not None:
                if len(zeros) != nz and kind is not GhzKind.VANISHING_THREE:
                    raise UnsupportedCase(f"{tag} needs {nz} indices")
                g[:, [z - 1 for z in zeros]] = 0.0
            else:
                perm = np.argsort(rng.random((m, 3)), axis=1)[:, :nz]
                np.put_along_axis(g, perm, 0.0, axis=1)
            if r_is_one and kind is not GhzKind.VANISHING_THREE:
                r[:] = 1.0
        # keep positive parameters clear of the snapping band
        g = np.where(g == 0, 0.0, np.maximum(g, 1e-9))
        gc, rc, pc = canonical_arrays(g, r, phi)
        return np.c_[gc, rc, pc]

    return _draw(n, seed, _STREAMS["sample"], draw)


def sample_ghz(tag: str, n: int, seed: int, r_is_one: bool = False) -> list[GhzParams]:
    return [GhzParams(*map(float, row)) for row in sample_ghz_array(tag, n, seed, r_is_one)]


# ---------------------------------------------------------------------------
# volume estimates


def _w_estimate(p: WParams, side: str, n: int, seed: int, workers) -> VolumeEstimate:
    x = np.array(p.x)
    if side == ACCESSIBLE:
        def hit(rng, m):
            y = rng.random((m, 3))
            valid = (y.sum(axis=1) <= 1) & np.all(y > 0, axis=1)
            return np.count_nonzero(valid & np.all(x >= y, axis=1))
        return estimate(hit, 1.0, n, seed, _STREAMS[side], "W targets in the unit cube", workers)

    x0 = p.x0

    def hit(rng, m):
        y = x + x0 * rng.random((m, 3))
        valid = y.sum(axis=1) <= 1
        return np.count_nonzero(valid & np.all(y >= x, axis=1))
    return estimate(hit, x0 ** 3, n, seed, _STREAMS[side], "W sources in prod[x_i, x_i + x0]", workers)


def _ghz_codes(g, r, phi, h, rp, php):
    return ghz_failure_codes(g, r, phi, h, rp, php) == 0


def _ghz_estimate(p: GhzParams, side: str, n: int, seed: int, workers) -> VolumeEstimate:
    c = canonicalize_ghz(p)
    cls = classify_ghz(c)
    g = np.array(c.g)
    stream = _STREAMS[side]
    case_a = cls.kind in (GhzKind.GENERIC, GhzKind.MES)

    if case_a and side == SOURCE:
        # sources (h, z') with h <= g; z' fixed by the equalities, real only inside the region
        def hit(rng, m):
            h = g * rng.random((m, 3))
            rp, php, ok = _z_for_ratio(c, c.G / np.prod(h, axis=1))
            ok = ok & np.all(h > 0, axis=1)
            rp = np.where(ok, rp, 1.0)
            php = np.where(ok, php, 0.0)
            return np.count_nonzero(ok & _ghz_codes(h, rp, php, g, c.r, c.phi))
        return estimate(hit, c.G, n, seed, stream, "sources h in prod[0, g_i], z' from the equalities", workers)

    if cls.kind is GhzKind.GENERIC:
        def hit(rng, m):
            h = 0.5 * rng.random((m, 3))
            rp, php, ok = _z_for_ratio(c, c.G / np.prod(h, axis=1))
            ok = ok & np.all(h > 0, axis=1)
            rp = np.where(ok, rp, 1.0)
            php = np.where(ok, php, 0.0)
            return np.count_nonzero(ok & _ghz_codes(g, c.r, c.phi, h, rp, php))
        return estimate(hit, 0.125, n, seed, stream, "targets h in [0, 1/2)^3, z' from the equalities", workers)

    if cls.kind is GhzKind.MES:
        sgn = c.cos2phi
        span = 0.5 - g

        def hit(rng, m):
            u = rng.random((m, 4))
            h = g + span * u[:, :3]
            rp = 1.0 - u[:, 3]
            cos2 = sgn * (c.G / np.prod(h, axis=1)) * (1 + rp ** 4) / (2 * rp * rp)
            ok = np.abs(cos2) <= 1
            php = 0.5 * np.arccos(np.clip(cos2, -1, 1))
            return np.count_nonzero(ok & _ghz_codes(g, c.r, c.phi, h, rp, php))
        return estimate(hit, float(np.prod(span)), n, seed, stream,
                        "targets (h, r') in prod[g_i, 1/2) x (0, 1], phi' from the first equality", workers)

    # vanishing parameters (including the GHZ state)
    if side == ACCESSIBLE:
        if cls.r_is_one:
            def hit(rng, m):
                u = rng.random((m, 5))
                h = 0.5 * u[:, :3]
                rp = 1.0 - u[:, 3]
                php = np.where(u[:, 4] < 0.5, math.pi / 4, 3 * math.pi / 4)
                return np.count_nonzero(_ghz_codes(g, c.r, 0.0, h, rp, php))
            return estimate(hit, 0.25, n, seed, stream,
                            "targets h in [0, 1/2)^3, r' in (0, 1], phi' in {pi/4, 3pi/4}", workers)

        def hit(rng, m):
            u = rng.random((m, 3))
            fam = rng.integers(0, 3, m)
            h = np.zeros((m, 3))
            rows = np.arange(m)
            h[rows, (fam + 1) % 3] = 0.5 * u[:, 0]
            h[rows, (fam + 2) % 3] = 0.5 * u[:, 1]
            rp = 1.0 - u[:, 2]
            return np.count_nonzero(_ghz_codes(g, c.r, 0.0, h, rp, 0.0))
        return estimate(hit, 0.75, n, seed, stream,
                        "targets with one vanishing h_i: three families of [0, 1/2)^2 x (0, 1]", workers)

    free = np.flatnonzero(g > 0)
    if free.size == 0 and cls.r_is_one:
        return VolumeEstimate(0.0, 0.0, n, seed, "single point (GHZ state)", 0, 0.0)
    box = float(np.prod(g[free]))

    def hit(rng, m):
        u = rng.random((m, 4))
        h = np.zeros((m, 3))
        h[:, free] = g[free] * u[:, : free.size]
        rs = np.ones(m) if cls.r_is_one else 1.0 - u[:, 3]
        return np.count_nonzero(_ghz_codes(h, rs, 0.0, g, c.r, 0.0))
    return estimate(hit, box, n, seed, stream,
                    "sources with h_i in [0, g_i] on the non-vanishing indices"
                    + ("" if cls.r_is_one else ", r in (0, 1]"), workers)


def mc_bipartite(lam: Union[SchmidtVector, Sequence[float]], n: int, seed: int,
                 workers: Optional[int] = None) -> tuple[VolumeEstimate, VolumeEstimate]:
    """Accessible and source volumes of a Schmidt vector by sampling the ordered simplex."""
    lam = np.asarray(lam.lam if isinstance(lam, SchmidtVector) else lam, dtype=float)
    d = lam.size
    box = chamber_volume(d)

    def hits(side):
        def hit(rng, m):
            x = -np.sort(-rng.dirichlet(np.ones(d), m), axis=1)
            ok = majorized_mask(lam, x) if side == ACCESSIBLE else majorized_mask(x, lam)
            return np.count_nonzero(ok)
        return hit

    region = f"ordered simplex, d={d}"
    return (estimate(hits(ACCESSIBLE), box, n, seed, _STREAMS[ACCESSIBLE], region, workers),
            estimate(hits(SOURCE), box, n, seed, _STREAMS[SOURCE], region, workers))


def mc_volume(state, side: str, n: int, seed: int, workers: Optional[int] = None) -> VolumeEstimate:
    """Monte-Carlo accessible or source volume of any supported state.

    Raises
    ------
    UnsupportedCase
        For unknown sides or state types.
    """
    side = {"accessible": ACCESSIBLE, "source": SOURCE}.get(str(side).lower())
    if side is None:
        raise UnsupportedCase("side must be Accessible or Source")
    if isinstance(state, WParams):
        return _w_estimate(state, side, n, seed, workers)
    if isinstance(state, GhzParams):
        return _ghz_estimate(state, side, n, seed, workers)
    if isinstance(state, (SchmidtVector, list, tuple, np.ndarray)):
        a, s = mc_bipartite(state, n, seed, workers)
        return a if side == ACCESSIBLE else s
    raise UnsupportedCase(f"no oracle for {type(state).__name__}")


# ---------------------------------------------------------------------------
# verification


VERIFY_CASES = ("w", "ghz-generic", "ghz-mes", "ghz-vanishing-one", "ghz-vanishing-two",
                "ghz-vanishing-three", "ghz-vanishing-one-r1", "ghz-vanishing-two-r1",
                "ghz-state", "bipartite-3", "bipartite-4")
Z_THRESHOLD = 4.0


def case_states(case: str, count: int, seed: int) -> list:
    """Seeded sample states for a verification case."""
    if case == "w":
        return sample_w(count, seed)
    if case.startswith("bipartite-"):
        d = int(case.split("-")[1])
        rows = _draw(count, seed, _STREAMS["sample"], lambda rng, m: rng.dirichlet(np.ones(d), m))
        return [SchmidtVector.from_values(r / r.sum()) for r in rows]
    table = {"ghz-generic": ("GenericNonMes", False), "ghz-mes": ("Mes", False),
             "ghz-vanishing-one": ("VanishingOne", False), "ghz-vanishing-two": ("VanishingTwo", False),
             "ghz-vanishing-three": ("VanishingThree", False),
             "ghz-vanishing-one-r1": ("VanishingOne", True), "ghz-vanishing-two-r1": ("VanishingTwo", True)}
    if case == "ghz-state":
        return [GHZ_STATE]
    if case not in table:
        raise UnsupportedCase(f"unknown verification case {case!r}")
    tag, r1 = table[case]
    return sample_ghz(tag, count, seed, r_is_one=r1)


def z_score(mc: float, closed: float, stderr: float, box: float = 0.0, n: int = 0) -> float:
    """``(mc - closed) / stderr``.

    With zero or all hits the binomial standard error vanishes; when ``box``
    and ``n`` are given it is then taken at the closed-form hit rate instead.
    """
    if stderr == 0 and box > 0 and n > 0:
        p0 = min(max(closed / box, 0.0), 1.0)
        stderr = box * math.sqrt(p0 * (1 - p0) / n)
    if stderr > 0:
        return (mc - closed) / stderr
    return 0.0 if abs(mc - closed) <= 1e-12 else math.copysign(math.inf, mc - closed)


@dataclass
class VerificationReport:
    entries: list = field(default_factory=list)
    n: int = 0
    seed: int = 0

    @property
    def passed(self) -> bool:
        return all(e["pass"] for e in self.entries)

    def to_dict(self) -> dict:
        cases = {}
        for e in self.entries:
            cases.setdefault(e["case"], []).append(e)
        return {"n": self.n, "seed": self.seed, "pass": self.passed, "zThreshold": Z_THRESHOLD,
                "cases": {k: {"pass": all(e["pass"] for e in v), "entries": v} for k, v in cases.items()}}


def verify_all(n_per_case: int = 20, n: int = 100_000, seed: int = 0,
               cases: Optional[Iterable[str]] = None,
               closed_override: Optional[Callable] = None,
               workers: Optional[int] = None) -> VerificationReport:
    """Compare closed-form volumes against Monte-Carlo estimates for every case.

    ``closed_override(case, state, report)`` may return a modified
    ``(Va, Vs)`` pair; it exists to check that the comparison has power.
    An entry fails when ``|z| > 4``.
    """
    cases = list(cases) if cases is not None else list(VERIFY_CASES)
    report = VerificationReport(n=n, seed=seed)
    for ci, case in enumerate(cases):
        if case not in VERIFY_CASES:
            raise UnsupportedCase(f"unknown verification case {case!r}")
        states = case_states(case, n_per_case, seed + 1000 * (ci + 1))
        for si, st in enumerate(states):
            rep = volumes(st)
            closed = (rep.Va, rep.Vs)
            if closed_override is not None:
                closed = closed_override(case, st, rep) or closed
            s_seed = seed * 1_000_003 + 7919 * ci + si
            if isinstance(st, SchmidtVector):
                est = mc_bipartite(st, n, s_seed, workers)
            else:
                est = (mc_volume(st, ACCESSIBLE, n, s_seed, workers),
                       mc_volume(st, SOURCE, n, s_seed, workers))
            for name, cv, e in zip(("Va", "Vs"), closed, est):
                z = z_score(e.value, cv, e.stderr, e.box, e.samples)
                report.entries.append({
                    "case": case, "index": si, "state": st.to_dict(), "quantity": name,
                    "closed": float(cv), "mc": e.value, "stderr": e.stderr,
                    "z": z if math.isfinite(z) else None, "pass": bool(abs(z) <= Z_THRESHOLD)})
    return report
