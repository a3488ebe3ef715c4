import pytest

from reactlab import ModelParams, ParameterError, Region, ScanConfig, classify_point, scan
from reactlab.scanner import region_counts


class TestClassifyPoint:
    def test_baseline_point(self, baseline):
        row = classify_point(0.0433, 0.806, baseline)
        assert row.region is Region.STABLE_REACTIVE
        assert row.k2_selected == pytest.approx(0.7811720, abs=1e-6)
        assert row.chi_star == pytest.approx(1.5995327, abs=1e-6)
        assert row.log_inv_h == pytest.approx(5.6105061, abs=1e-6)
        assert row.flag_chi and row.flag_h

    def test_unstable_point(self, baseline):
        row = classify_point(0.0433, 0.9, baseline)
        assert row.region is Region.TURING_UNSTABLE
        assert row.k2_selected is None
        assert row.chi_star is None

    def test_nonreactive_point(self, baseline):
        row = classify_point(0.0433, 0.05, baseline)
        assert row.region is Region.STABLE_NONREACTIVE
        assert row.k2_selected is None

    def test_threshold_flags(self, baseline):
        strict = classify_point(0.0433, 0.806, baseline, chi_threshold=2.0)
        assert not strict.flag_chi
        loose = classify_point(0.0433, 0.806, baseline, log_inv_h_threshold=10.0)
        assert not loose.flag_h


class TestScan:
    @pytest.fixture
    def config(self, baseline):
        return ScanConfig(
            q_min=0.02,
            q_max=0.09,
            q_steps=5,
            beta_min=0.3,
            beta_max=1.3,
            beta_steps=5,
            fixed=baseline,
        )

    def test_row_major_grid(self, config):
        rows = scan(config)
        assert len(rows) == 25
        qs = [row.q for row in rows[:5]]
        assert qs == [rows[0].q] * 5  # q varies slowest
        betas = [row.beta for row in rows[:5]]
        assert betas == sorted(betas)

    def test_worker_count_invariance(self, config):
        serial = scan(config, workers=1)
        parallel = scan(config, workers=3)
        assert serial == parallel  # dataclass equality, bitwise floats

    def test_region_counts(self, config):
        rows = scan(config)
        counts = region_counts(rows)
        assert sum(counts.values()) == 25
        assert set(counts) == {
            "TuringUnstable",
            "StableReactive",
            "StableNonReactive",
        }

    def test_rows_match_pointwise_classification(self, config, baseline):
        rows = scan(config)
        probe = rows[7]
        again = classify_point(probe.q, probe.beta, baseline)
        assert probe == again

    def test_log_spacing(self, baseline):
        cfg = ScanConfig(
            q_min=0.01,
            q_max=0.1,
            q_steps=3,
            beta_min=0.1,
            beta_max=1.0,
            beta_steps=3,
            fixed=baseline,
            spacing="log",
        )
        grid = cfg.q_grid()
        assert grid[1] == pytest.approx((0.01 * 0.1) ** 0.5)


class TestScanConfigValidation:
    def test_bad_steps(self, baseline):
        with pytest.raises(ParameterError):
            ScanConfig(0.01, 0.1, 1, 0.1, 1.0, 3, fixed=baseline)

    def test_bad_range(self, baseline):
        with pytest.raises(ParameterError):
            ScanConfig(0.1, 0.01, 3, 0.1, 1.0, 3, fixed=baseline)

    def test_bad_spacing(self, baseline):
        with pytest.raises(ParameterError):
            ScanConfig(0.01, 0.1, 3, 0.1, 1.0, 3, fixed=baseline, spacing="cubic")

    def test_log_requires_positive(self, baseline):
        cfg = ScanConfig(
            -0.01, 0.1, 3, 0.1, 1.0, 3, fixed=baseline, spacing="log"
        )
        with pytest.raises(ParameterError):
            cfg.q_grid()
