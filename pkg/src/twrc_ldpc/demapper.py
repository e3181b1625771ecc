"""Channel LLR computation for the relay and the point-to-point legs.

All LLRs follow the convention L = log P(c=1)/P(c=0): positive values favor
bit 1.  Functions accept scalars or numpy arrays and are pure; nothing here
clips — clipping happens at the decoder boundary.

The superimposed BPSK pair seen by the relay collapses, per XOR bit, to a
two-point signal set: the XOR bit 0 maps to +/-(h_a + h_b) and the XOR bit 1
to +/-(h_a - h_b).  For unit real gains that is {+/-2} versus {0}, which makes
the channel from the XOR word to the observation asymmetric: a two-Gaussian
mixture against a single Gaussian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "XorSignalSet",
    "logcosh",
    "llr_single_user",
    "llr_joint_real",
    "llr_joint_complex",
    "pdf_equiv_real",
    "pdf_equiv_complex",
    "llr_bpsk_awgn",
]

_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class XorSignalSet:
    """Two-point signal set of the XOR-bit channel: xi0 = h_a + h_b, xi1 = h_a - h_b."""

    xi0: complex
    xi1: complex

    @classmethod
    def from_gains(cls, h_a, h_b):
        return cls(xi0=complex(h_a) + complex(h_b), xi1=complex(h_a) - complex(h_b))

    def swapped(self):
        return XorSignalSet(xi0=self.xi1, xi1=self.xi0)


def _check_sigma2(sigma2):
    if not sigma2 > 0.0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")


def logcosh(x):
    """log(cosh(x)), evaluated as |x| - log 2 + log1p(exp(-2|x|)) to avoid overflow."""
    ax = np.abs(np.asarray(x, dtype=np.float64))
    out = ax - _LOG2 + np.log1p(np.exp(-2.0 * ax))
    return out if out.ndim else float(out)


def llr_single_user(y, sigma2):
    """LLR of one node's bit when the other node's signal is treated as interference.

    The marginalization over the interfering bit is symmetric in the two
    nodes, so this same function describes node A and node B: the relay
    cannot tell the two apart from the superimposed observation.
    """
    _check_sigma2(sigma2)
    lc = 2.0 / sigma2
    y = np.asarray(y, dtype=np.float64)
    out = lc * y + logcosh(0.5 * lc * (y - 1.0)) - logcosh(0.5 * lc * (y + 1.0))
    return out if isinstance(out, np.ndarray) and out.ndim else float(out)


def llr_joint_real(y, sigma2):
    """LLR of the XOR bit from a real superimposed observation; even in y."""
    _check_sigma2(sigma2)
    y = np.asarray(y, dtype=np.float64)
    out = 2.0 / sigma2 - logcosh(2.0 * y / sigma2)
    return out if isinstance(out, np.ndarray) and out.ndim else float(out)


def llr_joint_complex(y, signal_set: XorSignalSet, sigma2):
    """LLR of the XOR bit from a complex observation under gains (h_a, h_b)."""
    _check_sigma2(sigma2)
    y = np.asarray(y, dtype=np.complex128)
    xi0 = complex(signal_set.xi0)
    xi1 = complex(signal_set.xi1)
    out = (
        logcosh((y * np.conj(xi1)).real / sigma2)
        - logcosh((y * np.conj(xi0)).real / sigma2)
        - (abs(xi1) ** 2 - abs(xi0) ** 2) / (2.0 * sigma2)
    )
    out = np.asarray(out)
    return out if out.ndim else float(out)


def pdf_equiv_real(y, x_bit, sigma2):
    """Observation density of the real XOR-bit channel.

    Bit 1 is a single zero-mean Gaussian; bit 0 an equal mixture of
    Gaussians at +/-2.  Standard normalizers, so each density integrates
    to one.
    """
    _check_sigma2(sigma2)
    if x_bit not in (0, 1):
        raise ValueError(f"x_bit must be 0 or 1, got {x_bit}")
    y = np.asarray(y, dtype=np.float64)
    norm = 1.0 / math.sqrt(2.0 * math.pi * sigma2)
    if x_bit == 1:
        out = norm * np.exp(-(y**2) / (2.0 * sigma2))
    else:
        out = (
            0.5
            * norm
            * (np.exp(-((y - 2.0) ** 2) / (2.0 * sigma2)) + np.exp(-((y + 2.0) ** 2) / (2.0 * sigma2)))
        )
    out = np.asarray(out)
    return out if out.ndim else float(out)


def pdf_equiv_complex(y, x_bit, signal_set: XorSignalSet, sigma2):
    """Observation density of the complex XOR-bit channel (mixture over +/-xi)."""
    _check_sigma2(sigma2)
    if x_bit not in (0, 1):
        raise ValueError(f"x_bit must be 0 or 1, got {x_bit}")
    y = np.asarray(y, dtype=np.complex128)
    xi = complex(signal_set.xi1) if x_bit == 1 else complex(signal_set.xi0)
    norm = 1.0 / (2.0 * math.pi * sigma2)
    out = (
        0.5
        * norm
        * (
            np.exp(-(np.abs(y - xi) ** 2) / (2.0 * sigma2))
            + np.exp(-(np.abs(y + xi) ** 2) / (2.0 * sigma2))
        )
    )
    out = np.asarray(out)
    return out if out.ndim else float(out)


def llr_bpsk_awgn(y, sigma2):
    """Point-to-point BPSK-over-AWGN LLR: (2/sigma2) * y."""
    _check_sigma2(sigma2)
    y = np.asarray(y, dtype=np.float64)
    out = (2.0 / sigma2) * y
    return out if out.ndim else float(out)
