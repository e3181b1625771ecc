"""Denoise-and-forward relay pipeline and its reference strategies.

The relay never tries to recover the two source words separately; it decodes
their XOR directly (both nodes use the same code, so the XOR of two codewords
is again a codeword).  A deliberately faithful single-user baseline and an
exhaustive joint-search oracle are provided for comparison runs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .channel import ChannelConfig, TrialRng, awgn_broadcast, bpsk_modulate
from .codec import GeneratorRealization, ParityCheckMatrix, as_bits, encode, nmsa_decode
from .demapper import (
    XorSignalSet,
    llr_bpsk_awgn,
    llr_joint_complex,
    llr_joint_real,
    llr_single_user,
)

__all__ = [
    "LLR_CLIP",
    "MLSE_MAX_K",
    "RelayStrategy",
    "RelayOutcome",
    "xor_map",
    "relay_joint_decode",
    "relay_single_user_decode",
    "relay_mlse_oracle",
    "end_node_recover",
    "broadcast_phase",
]

# channel LLRs are clipped to this magnitude at the decoder boundary only
LLR_CLIP = 30.0
# exhaustive search visits 2^k * 2^k codeword pairs
MLSE_MAX_K = 12


class RelayStrategy(enum.Enum):
    JOINT_XOR = "joint-xor"
    SINGLE_USER = "single-user"
    MLSE_ORACLE = "mlse-oracle"

    @classmethod
    def from_name(cls, name: str) -> "RelayStrategy":
        for member in cls:
            if member.value == name:
                return member
        raise ValueError(
            f"unknown strategy {name!r}; expected one of {[m.value for m in cls]}"
        )


@dataclass(frozen=True)
class RelayOutcome:
    """Relay-side estimate of the XOR codeword."""

    c_r_hat: np.ndarray
    converged: bool
    iterations: int
    strategy: RelayStrategy


def xor_map(c_a, c_b) -> np.ndarray:
    """Elementwise XOR, the network-coding map applied by the relay."""
    a = as_bits(c_a)
    b = as_bits(c_b, a.shape[0])
    return np.bitwise_xor(a, b)


def _require_unit_gains(cfg: ChannelConfig):
    if cfg.h_a != 1.0 + 0.0j or cfg.h_b != 1.0 + 0.0j:
        raise ValueError("real MAC demapping assumes unit channel gains")


def relay_joint_decode(y, cfg: ChannelConfig, h: ParityCheckMatrix, max_iter, scale) -> RelayOutcome:
    """Demap the superimposed observation to XOR-bit LLRs and decode them."""
    y = np.asarray(y)
    if y.shape != (h.n_cols,):
        raise ValueError(f"observation length {y.shape} does not match code length {h.n_cols}")
    if np.iscomplexobj(y):
        sig = XorSignalSet.from_gains(cfg.h_a, cfg.h_b)
        llr = llr_joint_complex(y, sig, cfg.sigma2)
    else:
        _require_unit_gains(cfg)
        llr = llr_joint_real(y, cfg.sigma2)
    out = nmsa_decode(h, np.clip(llr, -LLR_CLIP, LLR_CLIP), max_iter, scale)
    return RelayOutcome(
        c_r_hat=out.decoded,
        converged=out.converged,
        iterations=out.iterations_used,
        strategy=RelayStrategy.JOINT_XOR,
    )


def relay_single_user_decode(y, cfg: ChannelConfig, h: ParityCheckMatrix, max_iter, scale) -> RelayOutcome:
    """Decode each node's word separately, treating the other as interference.

    The per-node LLRs are the same function of the observation for A and B,
    so both decodes run on identical inputs and return identical words; the
    forwarded XOR is structurally all-zero.  Kept as the failing baseline.
    """
    y = np.asarray(y)
    if np.iscomplexobj(y):
        raise ValueError("single-user demapping is defined for the real MAC only")
    if y.shape != (h.n_cols,):
        raise ValueError(f"observation length {y.shape} does not match code length {h.n_cols}")
    _require_unit_gains(cfg)
    llr = np.clip(llr_single_user(y, cfg.sigma2), -LLR_CLIP, LLR_CLIP)
    out_a = nmsa_decode(h, llr, max_iter, scale)
    out_b = nmsa_decode(h, llr, max_iter, scale)
    return RelayOutcome(
        c_r_hat=xor_map(out_a.decoded, out_b.decoded),
        converged=out_a.converged and out_b.converged,
        iterations=max(out_a.iterations_used, out_b.iterations_used),
        strategy=RelayStrategy.SINGLE_USER,
    )


def _all_codewords(g: GeneratorRealization) -> np.ndarray:
    """All 2^k codewords, row i encoding the k-bit big-endian expansion of i."""
    k = g.k
    msgs = ((np.arange(2**k)[:, None] >> np.arange(k - 1, -1, -1)[None, :]) & 1).astype(np.uint8)
    return np.stack([encode(g, m) for m in msgs])


def relay_mlse_oracle(y, cfg: ChannelConfig, g: GeneratorRealization) -> RelayOutcome:
    """Exhaustive joint search over codeword pairs, forwarded as their XOR.

    Minimizes the Euclidean distance between the observation and every
    superimposed pair; ties resolve to the lexicographically smallest
    (message_a, message_b).  Bounded to k <= 12.
    """
    if g.k > MLSE_MAX_K:
        raise ValueError(f"exhaustive search bounded to k <= {MLSE_MAX_K}, got k = {g.k}")
    y = np.asarray(y)
    n = g.h.n_cols
    if y.shape != (n,):
        raise ValueError(f"observation length {y.shape} does not match code length {n}")
    words = _all_codewords(g)
    x = 2.0 * words.astype(np.float64) - 1.0
    if np.iscomplexobj(y):
        s_a = cfg.h_a * x
        s_b = cfg.h_b * x
        yc = y.astype(np.complex128)
    else:
        _require_unit_gains(cfg)
        s_a = x
        s_b = x
        yc = y.astype(np.float64)
    best = np.inf
    best_pair = (0, 0)
    for i_a in range(x.shape[0]):
        diff = (yc - s_a[i_a])[None, :] - s_b
        dist = np.abs(diff) ** 2 if np.iscomplexobj(diff) else diff**2
        dist = dist.sum(axis=1)
        i_b = int(np.argmin(dist))
        if dist[i_b] < best:
            best = float(dist[i_b])
            best_pair = (i_a, i_b)
    c_r = xor_map(words[best_pair[0]], words[best_pair[1]])
    return RelayOutcome(
        c_r_hat=c_r, converged=True, iterations=0, strategy=RelayStrategy.MLSE_ORACLE
    )


def end_node_recover(c_r_hat, own_codeword) -> np.ndarray:
    """XOR the relay's broadcast word with the node's own codeword."""
    return xor_map(c_r_hat, own_codeword)


def broadcast_phase(c_r_hat, sigma2, h: ParityCheckMatrix, max_iter, scale, rng: TrialRng) -> np.ndarray:
    """Transmit the relay word over the AWGN leg and decode it at an end node."""
    c_r = as_bits(c_r_hat, h.n_cols)
    x = bpsk_modulate(c_r)
    y = awgn_broadcast(x, sigma2, rng)
    if sigma2 == 0.0:
        return (y > 0.0).astype(np.uint8)
    llr = np.clip(llr_bpsk_awgn(y, sigma2), -LLR_CLIP, LLR_CLIP)
    return nmsa_decode(h, llr, max_iter, scale).decoded
