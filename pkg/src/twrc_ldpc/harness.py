"""Configuration-driven Monte-Carlo BER/WER sweeps with deterministic parallelism.

Trials are scheduled in fixed blocks of trial indices, and every trial's
randomness is keyed by (master_seed, E_b/N_0 point index, trial index), so a
sweep executes the identical trial set and produces identical records for any
worker count.  Stopping is checked at block boundaries only.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from functools import lru_cache
from multiprocessing import get_context
from typing import NamedTuple

import numpy as np

from .channel import (
    ChannelConfig,
    TrialRng,
    awgn_broadcast,
    bpsk_modulate,
    complex_mac,
    real_mac,
    sigma2_from_ebno,
)
from .codec import (
    GeneratorRealization,
    ParityCheckMatrix,
    build_generator,
    encode,
    load_alist,
    nmsa_decode,
    peg_construct,
)
from .demapper import llr_bpsk_awgn
from .relay import (
    LLR_CLIP,
    MLSE_MAX_K,
    RelayStrategy,
    relay_joint_decode,
    relay_mlse_oracle,
    relay_single_user_decode,
    xor_map,
)

__all__ = [
    "ConfigError",
    "SimConfig",
    "SimContext",
    "BerRecord",
    "TrialResult",
    "CHANNELS",
    "WORKERS_ENV",
    "parse_config",
    "read_config",
    "format_config",
    "build_context",
    "run_trial",
    "run_sweep",
    "write_csv",
]

CHANNELS = ("real-mac", "complex-mac", "bpsk-awgn")
STRATEGIES = tuple(m.value for m in RelayStrategy)
WORKERS_ENV = "TWRC_LDPC_WORKERS"
# stopping is evaluated every BLOCK trials so the executed trial set depends
# only on the configuration, never on worker scheduling
BLOCK = 32

_DEFAULT_GRID = tuple(x / 2.0 for x in range(0, 17))


class ConfigError(ValueError):
    """Configuration file or parameter-combination error."""


@dataclass(frozen=True)
class SimConfig:
    """One sweep's full parameter set; defaults reproduce the reference setup.

    The code comes either from an alist file or from PEG construction
    parameters.  delta_theta and the gain magnitudes apply to the complex
    MAC only; the real MAC requires unit gains.
    """

    alist: str | None = None
    peg_n: int = 4096
    peg_dv: int = 3
    peg_dc: int = 6
    peg_seed: int = 1
    channel: str = "real-mac"
    delta_theta: float = math.pi / 4.0
    gain_a: float = 1.0
    gain_b: float = 1.0
    ebno_db_list: tuple = _DEFAULT_GRID
    strategy: str = "joint-xor"
    max_iter: int = 60
    nmsa_scale: float = 0.85
    min_word_errors: int = 100
    max_trials: int = 1_000_000
    master_seed: int = 1
    workers: int = 1

    def validate(self):
        if self.channel not in CHANNELS:
            raise ConfigError(f"channel must be one of {CHANNELS}, got {self.channel!r}")
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if not self.ebno_db_list:
            raise ConfigError("ebno_db_list must be nonempty")
        if any(b <= a for a, b in zip(self.ebno_db_list, self.ebno_db_list[1:])):
            raise ConfigError("ebno_db_list must be strictly increasing")
        if self.min_word_errors < 1:
            raise ConfigError("min_word_errors must be >= 1")
        if self.max_trials < 1:
            raise ConfigError("max_trials must be >= 1")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be >= 1")
        if not 0.0 < self.nmsa_scale <= 1.0:
            raise ConfigError("nmsa_scale must lie in (0, 1]")
        if self.master_seed < 0:
            raise ConfigError("master_seed must be non-negative")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.gain_a <= 0.0 or self.gain_b <= 0.0:
            raise ConfigError("gain magnitudes must be positive")
        if self.channel == "real-mac" and (self.gain_a != 1.0 or self.gain_b != 1.0):
            raise ConfigError("real-mac requires unit gains; use complex-mac for other gains")
        if self.channel == "complex-mac" and self.strategy == "single-user":
            raise ConfigError("single-user strategy is defined for the real MAC only")

    def gains(self):
        """Complex gain pair: phase reference at node A, offset delta_theta at node B."""
        return (
            complex(self.gain_a),
            self.gain_b * complex(math.cos(self.delta_theta), math.sin(self.delta_theta)),
        )


_INT_KEYS = {
    "peg_n", "peg_dv", "peg_dc", "peg_seed", "max_iter",
    "min_word_errors", "max_trials", "master_seed", "workers",
}
_FLOAT_KEYS = {"delta_theta", "gain_a", "gain_b", "nmsa_scale"}
_STR_KEYS = {"alist", "channel", "strategy"}
_PEG_KEYS = {"peg_n", "peg_dv", "peg_dc", "peg_seed"}


def parse_config(text: str) -> SimConfig:
    """Parse line-oriented ``key = value`` text; '#' starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        known = _INT_KEYS | _FLOAT_KEYS | _STR_KEYS | {"ebno_db_list"}
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            if key in _INT_KEYS:
                values[key] = int(val)
            elif key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key == "ebno_db_list":
                values[key] = tuple(float(tok) for tok in val.replace(",", " ").split())
            else:
                values[key] = val
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {val!r}") from None
    if "alist" in values and values.keys() & _PEG_KEYS:
        raise ConfigError("give either 'alist' or peg_* parameters, not both")
    cfg = SimConfig(**values)
    cfg.validate()
    return cfg


def read_config(path) -> SimConfig:
    with open(path, "r", encoding="utf-8") as f:
        return parse_config(f.read())


def format_config(cfg: SimConfig) -> str:
    """Canonical ``key = value`` rendering of the fully resolved configuration."""
    lines = []
    for f in fields(SimConfig):
        value = getattr(cfg, f.name)
        if f.name == "alist":
            if value is None:
                continue
        elif f.name == "ebno_db_list":
            value = ", ".join(f"{v:g}" for v in value)
        elif isinstance(value, float):
            value = f"{value:.17g}"
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Code context
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimContext:
    """Code artifacts shared by every trial of a sweep."""

    h: ParityCheckMatrix
    g: GeneratorRealization


@lru_cache(maxsize=8)
def _cached_context(code_key) -> SimContext:
    kind = code_key[0]
    if kind == "alist":
        h = load_alist(code_key[1])
    else:
        h = peg_construct(*code_key[1:])
    return SimContext(h=h, g=build_generator(h))


def build_context(cfg: SimConfig) -> SimContext:
    """Build (or reuse) the code realization and check strategy feasibility."""
    cfg.validate()
    if cfg.alist is not None:
        key = ("alist", os.path.abspath(cfg.alist))
    else:
        key = ("peg", cfg.peg_n, cfg.peg_dv, cfg.peg_dc, cfg.peg_seed)
    ctx = _cached_context(key)
    if cfg.strategy == "mlse-oracle" and ctx.g.k > MLSE_MAX_K:
        raise ConfigError(
            f"mlse-oracle needs a code with k <= {MLSE_MAX_K}, got k = {ctx.g.k}"
        )
    return ctx


# ---------------------------------------------------------------------------
# Trials
# ---------------------------------------------------------------------------

class TrialResult(NamedTuple):
    bit_errors: int
    word_error: bool
    iterations: int
    converged: bool


def run_trial(cfg: SimConfig, ebno_db: float, trial_index: int, ctx: SimContext | None = None) -> TrialResult:
    """Run one trial; fully determined by (master_seed, point index, trial index)."""
    if ctx is None:
        ctx = build_context(cfg)
    try:
        point = cfg.ebno_db_list.index(ebno_db)
    except ValueError:
        raise ConfigError(f"ebno_db {ebno_db} is not on the configured grid") from None
    rng = TrialRng(cfg.master_seed, point, trial_index)
    g = ctx.g
    sigma2 = sigma2_from_ebno(ebno_db, g.rate)

    if cfg.channel == "bpsk-awgn":
        c = encode(g, rng.random_bits(g.k))
        y = awgn_broadcast(bpsk_modulate(c), sigma2, rng)
        llr = np.clip(llr_bpsk_awgn(y, sigma2), -LLR_CLIP, LLR_CLIP)
        out = nmsa_decode(ctx.h, llr, cfg.max_iter, cfg.nmsa_scale)
        errors = int(np.count_nonzero(out.decoded ^ c))
        return TrialResult(errors, errors > 0, out.iterations_used, out.converged)

    # the equivalent XOR-bit channel is asymmetric, so trials must draw two
    # independent random messages; an all-zero-codeword shortcut would bias BER
    c_a = encode(g, rng.random_bits(g.k))
    c_b = encode(g, rng.random_bits(g.k))
    c_r = xor_map(c_a, c_b)
    x_a = bpsk_modulate(c_a)
    x_b = bpsk_modulate(c_b)

    if cfg.channel == "real-mac":
        chan = ChannelConfig.from_ebno(ebno_db, g.rate)
        y = real_mac(x_a, x_b, chan.sigma2, rng)
    else:
        h_a, h_b = cfg.gains()
        chan = ChannelConfig.from_ebno(ebno_db, g.rate, h_a, h_b)
        y = complex_mac(x_a, x_b, chan, rng)

    if cfg.strategy == "joint-xor":
        out = relay_joint_decode(y, chan, ctx.h, cfg.max_iter, cfg.nmsa_scale)
    elif cfg.strategy == "single-user":
        out = relay_single_user_decode(y, chan, ctx.h, cfg.max_iter, cfg.nmsa_scale)
    else:
        out = relay_mlse_oracle(y, chan, g)
    errors = int(np.count_nonzero(out.c_r_hat ^ c_r))
    return TrialResult(errors, errors > 0, out.iterations, out.converged)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BerRecord:
    """Accumulated counts and rates for one E_b/N_0 point."""

    ebno_db: float
    trials: int
    bit_errors: int
    word_errors: int
    ber: float
    wer: float
    avg_iterations: float
    converged_fraction: float


_FORK_STATE: dict = {}


def _run_block_worker(args):
    ebno_db, indices = args
    cfg = _FORK_STATE["cfg"]
    ctx = _FORK_STATE["ctx"]
    return [run_trial(cfg, ebno_db, t, ctx) for t in indices]


def _resolved_workers(cfg: SimConfig) -> int:
    override = os.environ.get(WORKERS_ENV)
    if override is not None:
        try:
            workers = int(override)
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {override!r}") from None
        if workers < 1:
            raise ConfigError(f"{WORKERS_ENV} must be >= 1")
        return workers
    return cfg.workers


def run_sweep(cfg: SimConfig) -> list[BerRecord]:
    """Run every E_b/N_0 point until min_word_errors or max_trials is reached."""
    cfg.validate()
    ctx = build_context(cfg)
    workers = _resolved_workers(cfg)
    n = ctx.h.n_cols

    pool = None
    if workers > 1:
        _FORK_STATE["cfg"] = cfg
        _FORK_STATE["ctx"] = ctx
        pool = ProcessPoolExecutor(max_workers=workers, mp_context=get_context("fork"))
    try:
        records = []
        for ebno_db in cfg.ebno_db_list:
            trials = 0
            bit_errors = 0
            word_errors = 0
            iteration_sum = 0
            converged_count = 0
            while trials < cfg.max_trials and word_errors < cfg.min_word_errors:
                stop = min(trials + BLOCK, cfg.max_trials)
                indices = range(trials, stop)
                if pool is None:
                    results = [run_trial(cfg, ebno_db, t, ctx) for t in indices]
                else:
                    per_worker = max(1, math.ceil(len(indices) / workers))
                    chunks = [
                        (ebno_db, list(indices[i : i + per_worker]))
                        for i in range(0, len(indices), per_worker)
                    ]
                    results = [r for batch in pool.map(_run_block_worker, chunks) for r in batch]
                for res in results:
                    bit_errors += res.bit_errors
                    word_errors += int(res.word_error)
                    iteration_sum += res.iterations
                    converged_count += int(res.converged)
                trials = stop
            records.append(
                BerRecord(
                    ebno_db=ebno_db,
                    trials=trials,
                    bit_errors=bit_errors,
                    word_errors=word_errors,
                    ber=bit_errors / (trials * n),
                    wer=word_errors / trials,
                    avg_iterations=iteration_sum / trials,
                    converged_fraction=converged_count / trials,
                )
            )
        return records
    finally:
        if pool is not None:
            pool.shutdown()


CSV_HEADER = "ebno_db,trials,bit_errors,word_errors,ber,wer,avg_iterations,converged_fraction"


def write_csv(records, path) -> None:
    """Write records as CSV; floats carry six significant digits."""
    records = list(records)
    if not records:
        raise ValueError("no records to write")
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            f"{r.ebno_db:.6g},{r.trials},{r.bit_errors},{r.word_errors},"
            f"{r.ber:.6g},{r.wer:.6g},{r.avg_iterations:.6g},{r.converged_fraction:.6g}"
        )
    with open(path, "w", encoding="ascii", newline="") as f:
        f.write("\n".join(lines) + "\n")
