"""Demapper tests: every closed-form LLR is checked against a density-ratio oracle."""

import math

import numpy as np
import pytest

from twrc_ldpc import (
    XorSignalSet,
    llr_bpsk_awgn,
    llr_joint_complex,
    llr_joint_real,
    llr_single_user,
    logcosh,
    pdf_equiv_complex,
    pdf_equiv_real,
)

# frozen high-precision reference values
LOGCOSH_2 = 1.32500274735786443
LSU_1_1 = 0.67499725264213557
LSU_2_1 = 2.12445232590524205
LJR_2_1 = -1.30718822581295046
PDF_REAL_0_X1 = 0.39894228040143268
PDF_REAL_0_X0 = 0.05399096651318805

REAL_GRID = np.arange(-4.0, 4.0 + 1e-9, 0.1)
SIGMA2_GRID = (0.25, 0.5, 1.0, 2.0)


def oracle_llr_single(y, sigma2, swap_roles=False):
    """Four-term marginalization of the pair posterior under equal priors.

    The target bit's +1/-1 signal combines with the interfering bit's two
    signs; swapping which node is "target" permutes identical terms.
    """
    def w(mean):
        return math.exp(-((y - mean) ** 2) / (2.0 * sigma2))

    if not swap_roles:
        num = w(2.0) + w(0.0)
        den = w(0.0) + w(-2.0)
    else:
        num = w(0.0) + w(2.0)
        den = w(-2.0) + w(0.0)
    return math.log(num / den)


class TestLogcosh:
    def test_zero(self):
        assert logcosh(0.0) == 0.0

    def test_reference_point(self):
        assert logcosh(2.0) == pytest.approx(LOGCOSH_2, abs=1e-14)

    def test_large_argument_no_overflow(self):
        assert logcosh(1000.0) == pytest.approx(1000.0 - math.log(2.0), abs=1e-12)
        assert np.isfinite(logcosh(1e8))

    def test_matches_direct_evaluation(self):
        for x in np.linspace(-20, 20, 101):
            assert logcosh(x) == pytest.approx(math.log(math.cosh(x)), abs=1e-12)

    def test_even(self):
        xs = np.linspace(0, 50, 37)
        assert np.array_equal(logcosh(xs), logcosh(-xs))


class TestSingleUser:
    def test_zero_observation(self):
        assert llr_single_user(0.0, 1.0) == pytest.approx(0.0, abs=1e-15)

    def test_reference_points(self):
        assert llr_single_user(1.0, 1.0) == pytest.approx(LSU_1_1, abs=1e-12)
        assert llr_single_user(2.0, 1.0) == pytest.approx(LSU_2_1, abs=1e-12)

    @pytest.mark.parametrize("sigma2", SIGMA2_GRID)
    def test_oracle_equivalence(self, sigma2):
        for y in REAL_GRID:
            assert llr_single_user(y, sigma2) == pytest.approx(
                oracle_llr_single(y, sigma2), abs=1e-9
            )

    def test_odd_symmetry(self):
        for y in REAL_GRID:
            assert llr_single_user(-y, 1.0) == pytest.approx(
                -llr_single_user(y, 1.0), abs=1e-12
            )

    def test_nodes_indistinguishable(self):
        # the marginalization with the roles of the two nodes swapped is the
        # same function, which is why decoding either node alone cannot work
        for sigma2 in SIGMA2_GRID:
            for y in REAL_GRID:
                assert oracle_llr_single(y, sigma2) == oracle_llr_single(
                    y, sigma2, swap_roles=True
                )

    def test_rejects_bad_sigma2(self):
        with pytest.raises(ValueError):
            llr_single_user(1.0, 0.0)
        with pytest.raises(ValueError):
            llr_single_user(1.0, -1.0)

    def test_vectorized(self):
        out = llr_single_user(REAL_GRID, 0.5)
        assert out.shape == REAL_GRID.shape


class TestJointReal:
    def test_zero_observation_exact(self):
        assert llr_joint_real(0.0, 1.0) == 2.0

    def test_reference_points(self):
        assert llr_joint_real(1.0, 1.0) == pytest.approx(LSU_1_1, abs=1e-12)
        assert llr_joint_real(2.0, 1.0) == pytest.approx(LJR_2_1, abs=1e-12)

    @pytest.mark.parametrize("sigma2", SIGMA2_GRID)
    def test_oracle_equivalence(self, sigma2):
        for y in REAL_GRID:
            ratio = math.log(
                pdf_equiv_real(y, 1, sigma2) / pdf_equiv_real(y, 0, sigma2)
            )
            assert llr_joint_real(y, sigma2) == pytest.approx(ratio, abs=1e-9)

    def test_even_exact(self):
        ys = np.linspace(0.0, 6.0, 61)
        assert np.array_equal(llr_joint_real(ys, 0.7), llr_joint_real(-ys, 0.7))

    def test_rejects_bad_sigma2(self):
        with pytest.raises(ValueError):
            llr_joint_real(0.0, 0.0)


class TestPdfEquivReal:
    def test_reference_densities(self):
        assert pdf_equiv_real(0.0, 1, 1.0) == pytest.approx(PDF_REAL_0_X1, abs=1e-14)
        assert pdf_equiv_real(0.0, 0, 1.0) == pytest.approx(PDF_REAL_0_X0, abs=1e-14)

    def test_log_ratio_at_zero_matches_llr(self):
        ratio = math.log(pdf_equiv_real(0.0, 1, 1.0) / pdf_equiv_real(0.0, 0, 1.0))
        assert ratio == pytest.approx(2.0, abs=1e-12)
        assert llr_joint_real(0.0, 1.0) == pytest.approx(ratio, abs=1e-12)

    @pytest.mark.parametrize("sigma2", SIGMA2_GRID)
    @pytest.mark.parametrize("x_bit", (0, 1))
    def test_integrates_to_one(self, sigma2, x_bit):
        ys = np.linspace(-12.0, 12.0, 4801)
        total = np.trapezoid(pdf_equiv_real(ys, x_bit, sigma2), ys)
        assert total == pytest.approx(1.0, abs=1e-7)

    def test_rejects_bad_bit(self):
        with pytest.raises(ValueError):
            pdf_equiv_real(0.0, 2, 1.0)


class TestJointComplex:
    def test_reduces_to_real(self):
        sig = XorSignalSet.from_gains(1.0, 1.0)
        rng = np.random.default_rng(4)
        ys = rng.uniform(-4, 4, 1000)
        for sigma2 in (0.3, 1.0):
            a = llr_joint_complex(ys.astype(complex), sig, sigma2)
            b = llr_joint_real(ys, sigma2)
            assert np.max(np.abs(a - b)) <= 1e-12

    def test_quarter_turn_offset_spot_value(self):
        sig = XorSignalSet.from_gains(1.0, complex(math.cos(math.pi / 4), math.sin(math.pi / 4)))
        assert abs(sig.xi0) ** 2 == pytest.approx(2.0 + math.sqrt(2.0), abs=1e-12)
        assert abs(sig.xi1) ** 2 == pytest.approx(2.0 - math.sqrt(2.0), abs=1e-12)
        assert llr_joint_complex(0.0 + 0.0j, sig, 1.0) == pytest.approx(
            math.sqrt(2.0), abs=1e-12
        )

    def test_swap_negates(self):
        sig = XorSignalSet.from_gains(1.2, 0.8 * np.exp(1j * 0.9))
        rng = np.random.default_rng(11)
        for _ in range(100):
            y = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
            assert llr_joint_complex(y, sig.swapped(), 0.8) == pytest.approx(
                -llr_joint_complex(y, sig, 0.8), abs=1e-12
            )

    def test_oracle_equivalence_random_gains(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            h_a = rng.uniform(0.5, 2.0) * np.exp(1j * rng.uniform(0, 2 * math.pi))
            h_b = rng.uniform(0.5, 2.0) * np.exp(1j * rng.uniform(0, 2 * math.pi))
            sig = XorSignalSet.from_gains(h_a, h_b)
            sigma2 = rng.uniform(0.3, 2.0)
            for _ in range(50):
                y = complex(rng.uniform(-6, 6), rng.uniform(-6, 6))
                ratio = math.log(
                    pdf_equiv_complex(y, 1, sig, sigma2)
                    / pdf_equiv_complex(y, 0, sig, sigma2)
                )
                assert llr_joint_complex(y, sig, sigma2) == pytest.approx(ratio, abs=1e-9)

    def test_signal_set_identities(self):
        sig = XorSignalSet.from_gains(1.5 + 0.5j, 0.7 - 0.2j)
        assert sig.xi0 + sig.xi1 == pytest.approx(2 * (1.5 + 0.5j))
        assert sig.xi0 - sig.xi1 == pytest.approx(2 * (0.7 - 0.2j))


class TestPdfEquivComplex:
    def test_symmetric_magnitudes_give_zero_llr(self):
        # |xi0| = |xi1| and y = 0 leaves nothing to distinguish the bits
        sig = XorSignalSet(xi0=2.0 + 0.0j, xi1=0.0 + 2.0j)
        assert pdf_equiv_complex(0j, 1, sig, 1.0) == pytest.approx(
            pdf_equiv_complex(0j, 0, sig, 1.0), abs=1e-15
        )
        assert llr_joint_complex(0j, sig, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_degenerate_signal_reduces_to_real_pair(self):
        # xi1 = 0 with xi0 = 2 reproduces the real-channel density pair
        sig = XorSignalSet(xi0=2.0 + 0.0j, xi1=0.0 + 0.0j)
        for y in np.linspace(-3, 3, 31):
            # complex density at a real point integrates over two dimensions;
            # the ratio against the real pair is the 1-D Gaussian in Im(y)=0
            num = pdf_equiv_complex(complex(y, 0.0), 1, sig, 1.0)
            den = pdf_equiv_complex(complex(y, 0.0), 0, sig, 1.0)
            assert math.log(num / den) == pytest.approx(
                math.log(pdf_equiv_real(y, 1, 1.0) / pdf_equiv_real(y, 0, 1.0)),
                abs=1e-12,
            )

    @pytest.mark.parametrize("x_bit", (0, 1))
    def test_integrates_to_one(self, x_bit):
        sig = XorSignalSet.from_gains(1.0, np.exp(1j * math.pi / 4))
        axis = np.linspace(-8.0, 8.0, 321)
        re, im = np.meshgrid(axis, axis)
        vals = pdf_equiv_complex(re + 1j * im, x_bit, sig, 0.7)
        step = axis[1] - axis[0]
        assert vals.sum() * step * step == pytest.approx(1.0, abs=1e-6)


class TestBpskAwgn:
    def test_spot_values(self):
        assert llr_bpsk_awgn(1.0, 1.0) == 2.0
        assert llr_bpsk_awgn(0.0, 0.37) == 0.0
        assert llr_bpsk_awgn(-0.5, 0.5) == -2.0

    def test_rejects_bad_sigma2(self):
        with pytest.raises(ValueError):
            llr_bpsk_awgn(1.0, 0.0)
