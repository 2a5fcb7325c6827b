import numpy as np
import pytest

from signedbalance.graph import planted_faction_network, switch_nodes
from signedbalance.measures import (
    BalanceConfig,
    all_measures,
    b_eb,
    b_sa,
    b_strong,
    b_weak,
    imbalance,
    resolve_shift,
)
from signedbalance.oracles import truncated_b_weak, truncated_b_strong

from conftest import random_signed_net


class TestConfig:
    def test_alpha_must_exceed_one(self):
        with pytest.raises(ValueError):
            BalanceConfig("weak", 1.0)

    def test_unknown_metric(self):
        with pytest.raises(ValueError):
            BalanceConfig("frustration")

    def test_decay_length(self):
        cfg = BalanceConfig("weak", 2.0)
        assert cfg.decay_length == pytest.approx(1 / np.log(2))

    def test_fixed_shift_respected(self, triangle_one_negative):
        cfg = BalanceConfig("weak", 2.0, shift=5.0)
        assert resolve_shift(triangle_one_negative, cfg) == 5.0


class TestWeak:
    def test_all_positive_is_zero(self, triangle_all_positive):
        assert b_weak(triangle_all_positive) == 0.0

    def test_triangle_one_negative(self, triangle_one_negative):
        want = 1.0 / (12 * np.sqrt(2))
        assert b_weak(triangle_one_negative) == pytest.approx(want, abs=1e-10)

    def test_triangle_two_negative(self, triangle_one_negative):
        net = triangle_one_negative.with_signs([1, -1, -1])
        # the positive part leaves the negative endpoints disconnected
        assert b_weak(net) == 0.0

    def test_empty_positive_part(self, triangle_one_negative):
        net = triangle_one_negative.with_signs([-1, -1, -1])
        assert b_weak(net) == 0.0

    def test_monotone_in_alpha(self):
        for seed in range(4):
            net = random_signed_net(12, 0.5, 0.3, seed)
            vals = [b_weak(net, BalanceConfig("weak", a)) for a in (1.3, 1.7, 2.0, 3.0, 5.0)]
            assert all(x >= y - 1e-14 for x, y in zip(vals, vals[1:]))


class TestStrong:
    def test_triangle_value(self, triangle_one_negative):
        want = 0.25 * np.log(54 / 50)
        assert b_strong(triangle_one_negative) == pytest.approx(want, abs=1e-10)

    def test_all_positive_is_zero(self, triangle_all_positive):
        assert b_strong(triangle_all_positive) == 0.0

    def test_two_faction_complete_is_zero(self):
        net = planted_faction_network(14, 2, 1.0, 0.0, 0)
        assert b_strong(net) <= 1e-10

    def test_three_faction_weak_but_not_strong(self):
        net = planted_faction_network(12, 3, 1.0, 0.0, 0)
        assert b_weak(net) == 0.0
        assert b_strong(net) > 0.0


class TestEb:
    def test_all_positive(self, triangle_all_positive):
        assert b_eb(triangle_all_positive) == pytest.approx(0.0, abs=1e-14)

    def test_triangle_value(self, triangle_one_negative):
        k = (np.exp(-2) + 2 * np.e) / (np.exp(2) + 2 / np.e)
        assert b_eb(triangle_one_negative) == pytest.approx((1 - k) / (1 + k), abs=1e-10)
        assert b_eb(triangle_one_negative) == pytest.approx(0.18640, abs=1e-4)

    def test_two_faction_balanced(self):
        net = planted_faction_network(12, 2, 1.0, 0.0, 1)
        assert abs(b_eb(net)) <= 1e-12

    def test_range(self):
        for seed in range(5):
            net = random_signed_net(12, 0.5, 0.5, seed)
            val = b_eb(net)
            assert 0.0 <= val < 1.0


class TestSa:
    def test_all_positive_is_exactly_one(self, triangle_all_positive):
        assert b_sa(triangle_all_positive) == 1.0

    def test_triangle_value(self, triangle_one_negative):
        assert b_sa(triangle_one_negative) == pytest.approx(25 / 27, abs=1e-10)
        assert b_sa(triangle_one_negative) == pytest.approx(0.92593, abs=1e-4)

    def test_two_faction_balanced(self):
        net = planted_faction_network(12, 2, 1.0, 0.0, 2)
        assert b_sa(net) >= 1.0 - 1e-10

    def test_range(self):
        for seed in range(5):
            net = random_signed_net(12, 0.5, 0.5, seed)
            val = b_sa(net)
            assert -1.0 < val <= 1.0


class TestImbalanceOrientation:
    def test_all_positive_all_metrics_zero(self, triangle_all_positive):
        for metric in ("weak", "strong", "eb", "sa"):
            assert imbalance(triangle_all_positive, BalanceConfig(metric)) == pytest.approx(0.0, abs=1e-14)

    def test_sa_mapping(self, triangle_one_negative):
        val = imbalance(triangle_one_negative, BalanceConfig("sa"))
        assert val == pytest.approx((1 - 25 / 27) / 2, abs=1e-10)
        assert val == pytest.approx(0.037037, abs=1e-5)

    def test_strong_passthrough(self, triangle_one_negative):
        assert imbalance(triangle_one_negative, BalanceConfig("strong")) == pytest.approx(
            0.019240, abs=1e-5
        )

    def test_nonnegative_everywhere(self):
        for seed in range(5):
            net = random_signed_net(10, 0.5, 0.5, seed)
            for metric in ("weak", "strong", "eb", "sa"):
                assert imbalance(net, BalanceConfig(metric)) >= 0.0


class TestSwitchingInvariance:
    def test_strong_eb_sa_invariant(self):
        rng = np.random.default_rng(0)
        for seed in range(3):
            net = random_signed_net(14, 0.5, 0.4, seed)
            base = all_measures(net)
            for _ in range(10):
                subset = np.nonzero(rng.random(net.n) < 0.5)[0]
                sw = all_measures(switch_nodes(net, subset))
                assert abs(sw["strong"] - base["strong"]) <= 1e-10
                assert abs(sw["eb"] - base["eb"]) <= 1e-10
                assert abs(sw["sa"] - base["sa"]) <= 1e-10

    def test_weak_is_not_switching_invariant(self):
        # unlike the spectral metrics, the weak count depends on the gauge:
        # some switch of some seeded network must change it
        rng = np.random.default_rng(99)
        best_gap = 0.0
        for seed in range(3):
            net = random_signed_net(10, 0.5, 0.3, seed)
            before = b_weak(net)
            for _ in range(5):
                subset = np.nonzero(rng.random(net.n) < 0.5)[0]
                after = b_weak(switch_nodes(net, subset))
                best_gap = max(best_gap, abs(after - before))
        assert best_gap > 1e-6


class TestSeriesConsistency:
    def test_weak_matches_truncated_sum(self):
        for seed in range(6):
            net = random_signed_net(12, 0.5, 0.3, seed)
            closed = b_weak(net)
            series = truncated_b_weak(net, 2.0, 60)
            if closed > 0:
                assert abs(closed - series) / closed <= 1e-6
            else:
                assert abs(series) <= 1e-12

    def test_strong_matches_truncated_sum(self):
        for seed in range(6):
            net = random_signed_net(12, 0.5, 0.3, seed)
            closed = b_strong(net)
            series = truncated_b_strong(net, 2.0, 60)
            if closed > 0:
                assert abs(closed - series) / closed <= 1e-6
            else:
                assert abs(series) <= 1e-12
