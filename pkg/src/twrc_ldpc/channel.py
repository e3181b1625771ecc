"""BPSK mapping, reproducible noise streams, and the MAC/broadcast channels.

Noise variance convention: sigma2 is the per-real-dimension variance, and
sigma2 = (2 * R_c * 10**(ebno_db/10))**-1 ties it to E_b/N_0 for a rate-R_c
code.  Complex noise has independent real and imaginary parts of variance
sigma2 each (total power 2*sigma2).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .codec import as_bits

__all__ = [
    "ChannelConfig",
    "TrialRng",
    "bpsk_modulate",
    "sigma2_from_ebno",
    "real_mac",
    "complex_mac",
    "awgn_broadcast",
]


class TrialRng:
    """Per-trial random stream derived from a master seed and a stream path.

    Distinct (master_seed, *stream) tuples yield independent, reproducible
    streams regardless of construction order or worker count.  Instances are
    single-owner: never share one across concurrent trials.
    """

    def __init__(self, master_seed: int, *stream: int):
        if master_seed < 0:
            raise ValueError("master_seed must be non-negative")
        if any(s < 0 for s in stream):
            raise ValueError("stream indices must be non-negative")
        self.master_seed = int(master_seed)
        self.stream = tuple(int(s) for s in stream)
        seq = np.random.SeedSequence(entropy=self.master_seed, spawn_key=self.stream)
        self.generator = np.random.Generator(np.random.PCG64(seq))

    def normal(self, size, sigma2):
        """Zero-mean real Gaussian samples with variance sigma2."""
        if sigma2 < 0:
            raise ValueError("sigma2 must be non-negative")
        if sigma2 == 0.0:
            return np.zeros(size)
        return math.sqrt(sigma2) * self.generator.standard_normal(size)

    def complex_normal(self, size, sigma2_per_dim):
        """Complex Gaussian samples; real and imaginary variance sigma2_per_dim each."""
        re = self.normal(size, sigma2_per_dim)
        im = self.normal(size, sigma2_per_dim)
        return re + 1j * im

    def random_bits(self, size):
        return self.generator.integers(0, 2, size=size, dtype=np.uint8)


def sigma2_from_ebno(ebno_db: float, code_rate: float) -> float:
    """Per-dimension noise variance for a given E_b/N_0 in dB and code rate."""
    if not code_rate > 0.0:
        raise ValueError(f"code_rate must be positive, got {code_rate}")
    return 1.0 / (2.0 * code_rate * 10.0 ** (ebno_db / 10.0))


@dataclass(frozen=True)
class ChannelConfig:
    """Channel parameters for one codeword transmission.

    Gains are fixed for a whole codeword (quasi-static).  When built from an
    E_b/N_0 point, sigma2 and ebno_db are kept mutually consistent.
    """

    sigma2: float
    h_a: complex = 1.0 + 0.0j
    h_b: complex = 1.0 + 0.0j
    code_rate: float = 0.5
    ebno_db: float | None = None

    def __post_init__(self):
        if self.sigma2 < 0.0:
            raise ValueError(f"sigma2 must be non-negative, got {self.sigma2}")
        if abs(self.h_a) == 0.0 or abs(self.h_b) == 0.0:
            raise ValueError("channel gains must be nonzero")
        if not 0.0 < self.code_rate <= 1.0:
            raise ValueError(f"code_rate must lie in (0, 1], got {self.code_rate}")
        if self.ebno_db is not None:
            expect = sigma2_from_ebno(self.ebno_db, self.code_rate)
            if not math.isclose(self.sigma2, expect, rel_tol=1e-9):
                raise ValueError(
                    f"sigma2={self.sigma2} inconsistent with ebno_db={self.ebno_db} "
                    f"at rate {self.code_rate} (expected {expect})"
                )

    @classmethod
    def from_ebno(cls, ebno_db, code_rate, h_a=1.0 + 0.0j, h_b=1.0 + 0.0j):
        return cls(
            sigma2=sigma2_from_ebno(ebno_db, code_rate),
            h_a=complex(h_a),
            h_b=complex(h_b),
            code_rate=code_rate,
            ebno_db=float(ebno_db),
        )

    @classmethod
    def equal_power(cls, ebno_db, code_rate, delta_theta):
        """Unit-magnitude gains with carrier offset delta_theta = theta_b - theta_a."""
        return cls.from_ebno(ebno_db, code_rate, 1.0 + 0.0j, cmath.exp(1j * delta_theta))


def bpsk_modulate(bits) -> np.ndarray:
    """x = 2c - 1, mapping {0,1} to {-1,+1}."""
    c = as_bits(bits)
    return 2.0 * c.astype(np.float64) - 1.0


def real_mac(x_a, x_b, sigma2, rng: TrialRng) -> np.ndarray:
    """Superimpose two real signals with additive white Gaussian noise."""
    x_a = np.asarray(x_a, dtype=np.float64)
    x_b = np.asarray(x_b, dtype=np.float64)
    if x_a.shape != x_b.shape:
        raise ValueError(f"length mismatch: {x_a.shape} vs {x_b.shape}")
    return x_a + x_b + rng.normal(x_a.shape[0], sigma2)


def complex_mac(x_a, x_b, cfg: ChannelConfig, rng: TrialRng) -> np.ndarray:
    """Superimpose two signals under quasi-static complex gains plus complex noise."""
    x_a = np.asarray(x_a, dtype=np.float64)
    x_b = np.asarray(x_b, dtype=np.float64)
    if x_a.shape != x_b.shape:
        raise ValueError(f"length mismatch: {x_a.shape} vs {x_b.shape}")
    z = rng.complex_normal(x_a.shape[0], cfg.sigma2)
    return cfg.h_a * x_a + cfg.h_b * x_b + z


def awgn_broadcast(x, sigma2, rng: TrialRng) -> np.ndarray:
    """Point-to-point AWGN leg used in the broadcast phase."""
    x = np.asarray(x, dtype=np.float64)
    return x + rng.normal(x.shape[0], sigma2)
