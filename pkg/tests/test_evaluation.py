import numpy as np
import pytest

from signedbalance.evaluation import ConfusionCounts, accuracy, all_positive_baseline, nmi


class TestAccuracy:
    def test_identical(self):
        assert accuracy([1, -1, 1], [1, -1, 1]) == 1.0

    def test_inverted(self):
        assert accuracy([1, -1, 1], [-1, 1, -1]) == 0.0

    def test_half(self):
        assert accuracy([1, 1, -1, -1], [1, -1, -1, 1]) == 0.5

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            accuracy([1, 1], [1])

    def test_empty(self):
        with pytest.raises(ValueError):
            accuracy([], [])

    def test_complement_identity(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            t = rng.choice([-1, 1], size=20)
            p = rng.choice([-1, 1], size=20)
            assert accuracy(t, p) + np.mean(t != p) == pytest.approx(1.0)


class TestNmi:
    def test_identical_both_classes(self):
        assert nmi([1, -1, 1, -1], [1, -1, 1, -1]) == 1.0

    def test_global_flip_is_still_one(self):
        assert nmi([1, -1, 1, -1], [-1, 1, -1, 1]) == 1.0

    def test_constant_prediction_is_zero(self):
        # denominator positive (truth mixed), information zero
        assert nmi([1, -1, 1, -1], [1, 1, 1, 1]) == 0.0

    def test_degenerate_both_constant(self):
        assert nmi([1, 1, 1], [1, 1, 1]) == 1.0
        assert nmi([1, 1, 1], [-1, -1, -1]) == 1.0

    def test_symmetric_in_arguments(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            t = rng.choice([-1, 1], size=15)
            p = rng.choice([-1, 1], size=15)
            assert nmi(t, p) == pytest.approx(nmi(p, t), abs=1e-12)

    def test_flip_invariance_of_either_argument(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            t = rng.choice([-1, 1], size=15)
            p = rng.choice([-1, 1], size=15)
            base = nmi(t, p)
            assert nmi(-t, p) == pytest.approx(base, abs=1e-12)
            assert nmi(t, -p) == pytest.approx(base, abs=1e-12)

    def test_bounds(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            t = rng.choice([-1, 1], size=12)
            p = rng.choice([-1, 1], size=12)
            val = nmi(t, p)
            assert 0.0 <= val <= 1.0

    def test_against_direct_formula(self):
        # independent hand evaluation for a small asymmetric table
        t = [1, 1, 1, -1, -1, 1]
        p = [1, -1, 1, -1, 1, 1]
        joint = np.array([[3, 1], [1, 1]]) / 6
        pt = joint.sum(axis=1)
        pp = joint.sum(axis=0)
        info = sum(
            joint[a, b] * np.log(joint[a, b] / (pt[a] * pp[b]))
            for a in range(2)
            for b in range(2)
        )
        h = lambda q: -sum(x * np.log(x) for x in q if x > 0)
        want = info / (0.5 * (h(pt) + h(pp)))
        assert nmi(t, p) == pytest.approx(want, abs=1e-12)


class TestBaseline:
    def test_ninety_percent_positive(self):
        truth = [1] * 9 + [-1]
        acc, base_nmi = all_positive_baseline(truth)
        assert acc == pytest.approx(0.9)
        assert base_nmi == 0.0

    def test_all_negative(self):
        acc, base_nmi = all_positive_baseline([-1, -1, -1])
        assert acc == 0.0
        assert base_nmi == 0.0

    def test_nmi_always_zero(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            t = rng.choice([-1, 1], size=10)
            assert all_positive_baseline(t)[1] == 0.0


class TestConfusionCounts:
    def test_counts_sum_to_total(self):
        rng = np.random.default_rng(5)
        t = rng.choice([-1, 1], size=30)
        p = rng.choice([-1, 1], size=30)
        c = ConfusionCounts.from_vectors(t, p)
        assert c.total == 30
        assert c.pos_pos == int(np.sum((t > 0) & (p > 0)))
