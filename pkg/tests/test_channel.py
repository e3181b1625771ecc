"""Channel model tests: exact maps at zero noise, moments, reproducibility."""

import math

import numpy as np
import pytest

from twrc_ldpc import (
    ChannelConfig,
    TrialRng,
    awgn_broadcast,
    bpsk_modulate,
    complex_mac,
    real_mac,
    sigma2_from_ebno,
)

Q_OF_1 = 0.15865525393145705  # Gaussian tail at one standard deviation


class TestBpsk:
    def test_mapping(self):
        assert np.array_equal(bpsk_modulate([0, 1, 0]), [-1.0, 1.0, -1.0])

    def test_all_zero(self):
        assert np.all(bpsk_modulate(np.zeros(16, dtype=np.uint8)) == -1.0)

    def test_inverse(self):
        rng = np.random.default_rng(0)
        bits = rng.integers(0, 2, 64, dtype=np.uint8)
        x = bpsk_modulate(bits)
        assert np.array_equal(((x + 1) / 2).astype(np.uint8), bits)

    def test_rejects_non_bits(self):
        with pytest.raises(ValueError):
            bpsk_modulate([0, 2, 1])


class TestSigma2FromEbno:
    def test_reference_points(self):
        assert sigma2_from_ebno(0.0, 0.5) == pytest.approx(1.0, abs=1e-15)
        assert sigma2_from_ebno(10 * math.log10(2), 0.5) == pytest.approx(0.5, rel=1e-12)
        assert sigma2_from_ebno(0.0, 1.0) == pytest.approx(0.5, abs=1e-15)

    def test_rejects_bad_rate(self):
        with pytest.raises(ValueError):
            sigma2_from_ebno(0.0, 0.0)


class TestTrialRng:
    def test_reproducible(self):
        a = TrialRng(7, 3).normal(100, 1.0)
        b = TrialRng(7, 3).normal(100, 1.0)
        assert np.array_equal(a, b)

    def test_distinct_streams(self):
        a = TrialRng(7, 3).normal(100, 1.0)
        b = TrialRng(7, 4).normal(100, 1.0)
        c = TrialRng(8, 3).normal(100, 1.0)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_order_independent(self):
        # constructing other streams in between must not perturb a stream
        first = TrialRng(1, 0).normal(10, 1.0)
        TrialRng(1, 1).normal(1000, 1.0)
        again = TrialRng(1, 0).normal(10, 1.0)
        assert np.array_equal(first, again)

    def test_path_streams(self):
        a = TrialRng(5, 1, 2).normal(8, 1.0)
        b = TrialRng(5, 2, 1).normal(8, 1.0)
        assert not np.array_equal(a, b)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            TrialRng(-1, 0)
        with pytest.raises(ValueError):
            TrialRng(0, -2)


class TestRealMac:
    def test_noiseless_superposition(self):
        x = np.ones(8)
        y = real_mac(x, x, 0.0, TrialRng(0, 0))
        assert np.array_equal(y, 2.0 * np.ones(8))

    def test_noiseless_cancellation(self):
        x = np.ones(8)
        assert np.array_equal(real_mac(x, -x, 0.0, TrialRng(0, 0)), np.zeros(8))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            real_mac(np.ones(4), np.ones(5), 1.0, TrialRng(0, 0))

    def test_noise_moments(self):
        n = 1_000_000
        x = np.zeros(n)
        y = real_mac(x, x, 1.0, TrialRng(12, 0))
        assert abs(y.mean()) < 0.01
        assert abs(y.var() - 1.0) < 0.01

    def test_moment_bounds_scaled(self):
        n = 1_000_000
        sigma2 = 0.37
        w = real_mac(np.zeros(n), np.zeros(n), sigma2, TrialRng(13, 0))
        assert abs(w.mean()) < 4.0 * math.sqrt(sigma2) / math.sqrt(n)
        assert abs(w.var() - sigma2) < 5.0 * sigma2 * math.sqrt(2.0 / n)


class TestComplexMac:
    def test_reduces_to_real_when_noiseless(self):
        cfg = ChannelConfig(sigma2=0.0)
        rng = np.random.default_rng(3)
        x_a = 2.0 * rng.integers(0, 2, 32) - 1.0
        x_b = 2.0 * rng.integers(0, 2, 32) - 1.0
        y = complex_mac(x_a, x_b, cfg, TrialRng(0, 0))
        assert np.max(np.abs(y.imag)) == 0.0
        assert np.array_equal(y.real, real_mac(x_a, x_b, 0.0, TrialRng(0, 0)))

    def test_gain_rotation(self):
        cfg = ChannelConfig(sigma2=0.0, h_a=1.0, h_b=np.exp(1j * math.pi / 4))
        y = complex_mac(np.ones(4), np.ones(4), cfg, TrialRng(0, 0))
        expect = 1.0 + np.exp(1j * math.pi / 4)
        assert np.allclose(y, expect, atol=1e-15)

    def test_quasi_static_gains(self):
        # alternating inputs: every sample must see the identical gain pair
        cfg = ChannelConfig(sigma2=0.0, h_a=0.8 * np.exp(1j * 0.3), h_b=1.1 * np.exp(1j * 1.2))
        x_a = np.where(np.arange(64) % 2 == 0, 1.0, -1.0)
        x_b = np.where(np.arange(64) % 3 == 0, 1.0, -1.0)
        y = complex_mac(x_a, x_b, cfg, TrialRng(0, 0))
        assert np.allclose(y, cfg.h_a * x_a + cfg.h_b * x_b, atol=0)

    def test_noise_power(self):
        n = 1_000_000
        cfg = ChannelConfig(sigma2=1.0)
        y = complex_mac(np.zeros(n), np.zeros(n), cfg, TrialRng(14, 0))
        assert abs(np.mean(np.abs(y) ** 2) - 2.0) < 0.02

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            complex_mac(np.ones(4), np.ones(5), ChannelConfig(sigma2=1.0), TrialRng(0, 0))


class TestAwgnBroadcast:
    def test_noiseless_passthrough(self):
        x = np.linspace(-1, 1, 9)
        assert np.array_equal(awgn_broadcast(x, 0.0, TrialRng(0, 0)), x)

    def test_sign_detection_error_rate(self):
        n = 1_000_000
        x = np.ones(n)
        y = awgn_broadcast(x, 1.0, TrialRng(15, 0))
        ber = np.count_nonzero(y <= 0) / n
        assert abs(ber - Q_OF_1) < 0.005

    def test_deterministic(self):
        a = awgn_broadcast(np.ones(64), 0.5, TrialRng(9, 4))
        b = awgn_broadcast(np.ones(64), 0.5, TrialRng(9, 4))
        assert np.array_equal(a, b)


class TestChannelConfig:
    def test_from_ebno_consistency(self):
        cfg = ChannelConfig.from_ebno(2.0, 0.5)
        assert cfg.sigma2 == pytest.approx(sigma2_from_ebno(2.0, 0.5))
        assert cfg.ebno_db == 2.0

    def test_inconsistent_pair_rejected(self):
        with pytest.raises(ValueError):
            ChannelConfig(sigma2=1.0, ebno_db=2.0, code_rate=0.5)

    def test_equal_power_offset(self):
        cfg = ChannelConfig.equal_power(1.0, 0.5, math.pi / 4)
        assert abs(cfg.h_a) == pytest.approx(1.0)
        assert abs(cfg.h_b) == pytest.approx(1.0)
        assert cmath_phase_diff(cfg.h_b, cfg.h_a) == pytest.approx(math.pi / 4)

    def test_rejects_zero_gain(self):
        with pytest.raises(ValueError):
            ChannelConfig(sigma2=1.0, h_a=0.0)

    def test_rejects_negative_sigma2(self):
        with pytest.raises(ValueError):
            ChannelConfig(sigma2=-0.1)


def cmath_phase_diff(a, b):
    return math.atan2((a * np.conj(b)).imag, (a * np.conj(b)).real)
