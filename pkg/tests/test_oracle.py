import math

import numpy as np
import pytest

from locc_volumes.errors import UnsupportedCase
from locc_volumes.oracle import (ACCESSIBLE, SOURCE, case_states, mc_box, mc_volume, sample_ghz,
                                 sample_ghz_array, sample_w, sample_w_array, verify_all,
                                 worker_count, z_score)
from locc_volumes.states import W_STATE, GhzKind, GhzParams, classify_ghz


class TestSamplers:
    def test_w_deterministic(self):
        assert sample_w(3, 42) == sample_w(3, 42)
        assert sample_w(3, 42) != sample_w(3, 43)

    def test_w_mean_x0(self):
        x0 = sample_w_array(1_000_000, 9)[:, 0]
        # uniform on the 3-simplex: E[x0] = 1/4, Var = 3/80
        assert abs(x0.mean() - 0.25) <= 3 * math.sqrt(3 / 80 / x0.size)

    @pytest.mark.parametrize("tag,kind", [
        ("GenericNonMes", GhzKind.GENERIC), ("Mes", GhzKind.MES),
        ("VanishingOne", GhzKind.VANISHING_ONE), ("VanishingTwo(1,3)", GhzKind.VANISHING_TWO),
        ("VanishingThree", GhzKind.VANISHING_THREE), ("GhzState", GhzKind.GHZ_STATE),
    ])
    def test_ghz_tags(self, tag, kind):
        states = sample_ghz(tag, 200, 1)
        assert all(classify_ghz(p).kind is kind for p in states)

    def test_explicit_zeros(self):
        g = sample_ghz_array("VanishingTwo(1,3)", 50, 2)[:, :3]
        assert np.all(g[:, 0] == 0) and np.all(g[:, 2] == 0) and np.all(g[:, 1] > 0)

    def test_mes_phases(self):
        phi = sample_ghz_array("Mes", 2000, 3)[:, 4]
        assert set(np.unique(phi)) == {0.0, math.pi / 2}
        assert 0.45 < np.mean(phi == 0.0) < 0.55

    def test_r_one(self):
        states = sample_ghz("VanishingOne", 50, 4, r_is_one=True)
        assert all(p.r == 1.0 for p in states)

    def test_unknown_tag(self):
        with pytest.raises(UnsupportedCase):
            sample_ghz("Nope", 1, 0)


class TestEstimators:
    def test_full_box_all_hits(self):
        est = mc_box(lambda y: np.ones(len(y), bool), [0, 0], [0.5, 2.0], 10_000, 0)
        assert est.value == 1.0 and est.stderr == 0.0

    def test_deterministic_and_worker_independent(self):
        p = GhzParams(0.22, 0.26, 0.32, 0.1, 2.68)
        a = mc_volume(p, ACCESSIBLE, 300_000, 5, workers=1)
        b = mc_volume(p, ACCESSIBLE, 300_000, 5, workers=3)
        assert a == b

    def test_w_state_source_empty(self):
        est = mc_volume(W_STATE, SOURCE, 10_000, 0)
        assert est.value == 0.0

    def test_example_state(self):
        p = GhzParams(0.22, 0.26, 0.32, 0.1, 2.68)
        a = mc_volume(p, ACCESSIBLE, 1_000_000, 11)
        assert abs(z_score(a.value, 0.28 * 0.24 * 0.18, a.stderr)) <= 3
        s = mc_volume(p, SOURCE, 1_000_000, 11)
        from locc_volumes.volumes import volumes
        assert abs(z_score(s.value, volumes(p).Vs, s.stderr)) <= 3

    def test_bad_side(self):
        with pytest.raises(UnsupportedCase):
            mc_volume(W_STATE, "sideways", 1000, 0)

    def test_threads_env(self, monkeypatch):
        monkeypatch.setenv("LOCC_VOLUMES_THREADS", "3")
        assert worker_count() == 3

    def test_z_score(self):
        assert z_score(1.0, 1.0, 0.0) == 0.0
        assert z_score(1.0, 0.5, 0.0) == math.inf
        assert z_score(1.1, 1.0, 0.05) == pytest.approx(2.0)

    def test_z_score_no_hits_uses_closed_rate(self):
        # p0 = 1e-4 on a unit box, n = 1e4: sigma = sqrt(p0 (1 - p0) / n)
        z = z_score(0.0, 1e-4, 0.0, box=1.0, n=10_000)
        assert z == pytest.approx(-1e-4 / math.sqrt(1e-4 * (1 - 1e-4) / 1e4))


class TestVerify:
    def test_small_run_passes_and_is_reproducible(self):
        kw = dict(n_per_case=2, n=20_000, seed=3, cases=["w", "ghz-generic", "bipartite-3"])
        a, b = verify_all(**kw), verify_all(**kw)
        assert a.passed and a.to_dict() == b.to_dict()

    def test_unknown_case(self):
        with pytest.raises(UnsupportedCase):
            verify_all(cases=["nope"])

    def test_case_states(self):
        assert len(case_states("ghz-mes", 4, 0)) == 4
