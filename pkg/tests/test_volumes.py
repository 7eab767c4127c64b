import math

import mpmath
import numpy as np
import pytest
import scipy.integrate as si
from hypothesis import given, strategies as st

from locc_volumes import polytope
from locc_volumes.cubature import integrate
from locc_volumes.errors import CubatureNotConverged, DimensionTooLarge, WrongClass
from locc_volumes.states import GHZ_STATE, W_STATE, GhzParams, WParams
from locc_volumes.volumes import (Method, bipartite_volumes, chamber_volume, concurrences,
                                  ghz_generic_volumes, ghz_mes_accessible, ghz_vanishing_volumes,
                                  mes_min_eigs, psi_source, volumes, w_volumes)

from conftest import ghz_vector, min_eig2, sq_concurrences, w_vector

gs = st.floats(0.01, 0.49)
rs = st.floats(0.01, 0.99)
phis = st.floats(0.0, math.pi / 2)


class TestCubature:
    def test_polynomial_exact(self):
        res = integrate(lambda x: x[:, 0] ** 5 * x[:, 1] ** 3, [0, 0], [1, 2])
        assert math.isclose(res.value, 4.0 / 6, rel_tol=1e-14)
        assert res.boxes == 1

    def test_peaked_integrand(self):
        f = lambda x: np.exp(-np.sum(x, axis=1) * 30)
        res = integrate(f, [0, 0, 0], [1, 1, 1], tol=1e-10)
        assert abs(res.value - ((1 - math.exp(-30)) / 30) ** 3) < 1e-10

    def test_budget(self):
        with pytest.raises(CubatureNotConverged):
            integrate(lambda x: np.abs(x[:, 0] - 0.3) ** 0.01, [0, 0, 0], [1, 1, 1],
                      tol=1e-14, max_boxes=50)


class TestW:
    def test_w_state(self):
        rep = w_volumes(W_STATE)
        assert rep.Ea == pytest.approx(1.0, abs=1e-15) and rep.Es == 1.0
        assert (rep.dims.accessible, rep.dims.source) == (3, 0)

    def test_values(self):
        rep = w_volumes(WParams(0.4, 0.2, 0.2, 0.2))
        assert rep.Va == pytest.approx(0.008, rel=1e-14)
        assert rep.Vs == pytest.approx(0.064 / 6, rel=1e-14)
        assert rep.Ea == pytest.approx(0.216, rel=1e-14)
        assert rep.Es == pytest.approx(1 - 0.064, rel=1e-14)

    @given(st.lists(st.floats(0.01, 1.0), min_size=4, max_size=4))
    def test_concurrences_match_state_vector(self, raw):
        x = np.array(raw) / sum(raw)
        p = WParams(1 - x[1:].sum(), *x[1:])
        assert np.allclose(concurrences(p), sq_concurrences(w_vector([p.x0, *p.x])), atol=1e-12)


class TestGhzGeneric:
    @pytest.mark.parametrize("f", [1e-9, 0.01, 0.3, 0.7, 0.999, 1 - 1e-6])
    def test_psi_high_precision(self, f):
        with mpmath.workdps(60):
            x = mpmath.mpf(f)
            want = 1 - x * (1 - mpmath.log(x) + mpmath.log(x) ** 2 / 2)
        assert psi_source(f) == pytest.approx(float(want), rel=1e-12)

    def test_psi_limits(self):
        assert psi_source(0.0) == 1.0 and psi_source(1.0) == 0.0

    def test_re_zero_branch(self):
        p = GhzParams(0.1, 0.2, 0.3, 0.5, math.pi / 4)
        assert ghz_generic_volumes(p).Vs == pytest.approx(0.006, rel=1e-15)

    def test_near_z_one(self):
        assert ghz_generic_volumes(GhzParams(0.2, 0.3, 0.1, 0.999, 0.001)).Vs < 1e-10

    def test_va_product(self):
        rep = ghz_generic_volumes(GhzParams(0.22, 0.26, 0.32, 0.1, 2.68))
        assert rep.Va == pytest.approx(0.28 * 0.24 * 0.18, rel=1e-14)
        assert rep.Ea == pytest.approx(8 * 0.28 * 0.24 * 0.18, rel=1e-14)

    def test_wrong_class(self):
        with pytest.raises(WrongClass):
            ghz_generic_volumes(GhzParams(0.1, 0.2, 0.3, 1.0, 0.0))

    @given(gs, gs, gs, rs, phis)
    def test_concurrences_match_state_vector(self, g1, g2, g3, r, phi):
        p = GhzParams(g1, g2, g3, r, phi)
        assert np.allclose(concurrences(p), sq_concurrences(ghz_vector(p.g, r, phi)), atol=1e-10)

    @given(gs, gs, gs, rs, phis)
    def test_measures_in_unit_interval(self, g1, g2, g3, r, phi):
        rep = volumes(GhzParams(g1, g2, g3, r, phi))
        assert 0 <= rep.Ea <= 1 and 0 <= rep.Es <= 1


def mes_oracle(g):
    """Direct integral over h with the r' bound, via scipy quadrature."""
    G = np.prod(g)

    def f(h3, h2, h1):
        x = h1 * h2 * h3 / G
        return 1 - math.sqrt(x - math.sqrt(max(x * x - 1, 0)))

    return si.nquad(f, [[g[2], 0.5], [g[1], 0.5], [g[0], 0.5]],
                    opts={"epsabs": 1e-13, "epsrel": 1e-12})[0]


class TestMes:
    # frozen from mes_oracle
    @pytest.mark.parametrize("g,want", [
        ((0.2, 0.2, 0.2), 0.018022836439715702),
        ((0.1, 0.3, 0.25), 0.0136105671692766),
        ((0.05, 0.4, 0.3), 0.006452778377331191),
    ])
    def test_frozen(self, g, want):
        rep = ghz_mes_accessible(GhzParams(*g, 1.0, 0.0))
        assert rep.Va == pytest.approx(want, abs=1e-9)
        assert rep.method is Method.CUBATURE and rep.Vs == 0.0 and rep.Es == 1.0

    def test_oracle_agrees(self):
        g = (0.15, 0.35, 0.2)
        assert ghz_mes_accessible(GhzParams(*g, 1.0, 0.0)).Va == pytest.approx(mes_oracle(g), abs=1e-9)

    def test_z_i_same_volume(self):
        a = ghz_mes_accessible(GhzParams(0.1, 0.3, 0.25, 1.0, 0.0)).Va
        b = ghz_mes_accessible(GhzParams(0.1, 0.3, 0.25, 1.0, math.pi / 2)).Va
        assert a == pytest.approx(b, abs=1e-12)

    def test_small_g_limit(self):
        assert ghz_mes_accessible(GhzParams(1e-7, 1e-7, 1e-7, 1.0, 0.0)).Va == pytest.approx(0.125, abs=1e-6)

    @given(gs, gs, gs, st.booleans())
    def test_min_eigs_match_state_vector(self, g1, g2, g3, zi):
        phi = math.pi / 2 if zi else 0.0
        mins, _ = mes_min_eigs(GhzParams(g1, g2, g3, 1.0, phi))
        assert np.allclose(mins, min_eig2(ghz_vector((g1, g2, g3), 1.0, phi)), atol=1e-10)

    @given(gs, gs, gs)
    def test_min_eig_from_concurrence(self, g1, g2, g3):
        p = GhzParams(g1, g2, g3, 1.0, 0.0)
        mins, _ = mes_min_eigs(p)
        C = np.array(concurrences(p))
        assert np.allclose(mins, 1 - np.sqrt(1 - C), atol=1e-12)


class TestVanishing:
    @pytest.mark.parametrize("params,sup_a,sup_s", [
        ((0.0, 0.2, 0.3, 0.5), 0.25, 0.25),
        ((0.0, 0.0, 0.3, 0.5), 0.5, 0.5),
        ((0.0, 0.0, 0.0, 0.5), 0.75, 1.0),
        ((0.0, 0.2, 0.3, 1.0), 0.25, 0.25),
        ((0.0, 0.0, 0.3, 1.0), 0.25, 0.5),
    ])
    def test_suprema(self, params, sup_a, sup_s):
        rep = ghz_vanishing_volumes(GhzParams(*params))
        assert (rep.VaSup, rep.VsSup) == (sup_a, sup_s)

    def test_values(self):
        rep = ghz_vanishing_volumes(GhzParams(0.0, 0.2, 0.3, 0.5))
        assert rep.Va == pytest.approx(0.3 * 0.2 * 0.5, rel=1e-14)
        assert rep.Vs == pytest.approx(0.06 * 0.5, rel=1e-14)

    def test_ghz_state(self):
        rep = volumes(GHZ_STATE)
        assert rep.Ea == 1.0 and rep.Es == 1.0

    @pytest.mark.parametrize("g", [(0.0, 1e-12, 1e-12), (0.0, 0.0, 1e-12)])
    def test_limits_reach_one(self, g):
        for r in (1 - 1e-12, 1.0):
            rep = volumes(GhzParams(*g, r))
            assert rep.Ea == pytest.approx(1.0, abs=1e-9)


class TestBipartite:
    def test_d2(self):
        rep = bipartite_volumes([0.7, 0.3])
        assert rep.Ea == pytest.approx(0.6, abs=1e-15) and rep.Es == pytest.approx(0.6, abs=1e-15)

    # frozen, cross-checked against the Rado permutation hull
    @pytest.mark.parametrize("lam,va,vs", [
        ((0.5, 0.3, 0.2), 0.06, 0.010833333333333334),
        ((0.6, 0.25, 0.15), 0.0375, 0.022708333333333334),
        ((0.4, 0.3, 0.2, 0.1), 0.004833333333333334, 0.0006666666666666666),
        ((0.7, 0.1, 0.1, 0.1), 0.00075, 0.0015),
    ])
    def test_frozen(self, lam, va, vs):
        rep = bipartite_volumes(lam)
        assert rep.method is Method.EXACT_POLYTOPE
        assert rep.Va == pytest.approx(va, abs=1e-13) and rep.Vs == pytest.approx(vs, abs=1e-13)

    @given(st.lists(st.floats(0.01, 1.0), min_size=3, max_size=4))
    def test_halfspaces_match_rado(self, raw):
        lam = sorted(np.array(raw) / sum(raw), reverse=True)
        assert polytope.source_volume(lam) == pytest.approx(polytope.rado_source_volume(lam), abs=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_extremes(self, d):
        flat = bipartite_volumes([1 / d] * d)
        assert flat.Ea == pytest.approx(1.0, abs=1e-9) and flat.Es == pytest.approx(1.0, abs=1e-9)
        prod = bipartite_volumes([1.0] + [0.0] * (d - 1))
        assert prod.Ea == pytest.approx(0.0, abs=1e-9) and prod.Es == pytest.approx(0.0, abs=1e-9)

    def test_chamber(self):
        assert chamber_volume(3) == 1 / 12 and chamber_volume(4) == 1 / 144

    def test_large_d(self):
        with pytest.raises(DimensionTooLarge):
            bipartite_volumes([0.2] * 5, method="exact")
        rep = bipartite_volumes([0.3, 0.25, 0.2, 0.15, 0.1], n=100_000, seed=3)
        assert rep.method is Method.MONTE_CARLO and rep.Va_err > 0
