"""Joint network and LDPC coding over the two-way relay channel.

The relay observes the superposition of two BPSK codewords, demaps it
directly to LLRs of the XOR codeword (which is itself a codeword when both
nodes use the same code), decodes, and broadcasts the result.  The package
bundles the code constructor, channels, demappers, relay pipeline, and a
deterministic Monte-Carlo BER harness.
"""

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
    AlistFormatError,
    DecodeOutcome,
    GeneratorRealization,
    ParityCheckMatrix,
    build_generator,
    encode,
    from_alist,
    has_girth_at_least_6,
    load_alist,
    nmsa_decode,
    peg_construct,
    save_alist,
    syndrome,
    to_alist,
)
from .curves import BER_FLOOR, emit_curve
from .demapper import (
    XorSignalSet,
    llr_bpsk_awgn,
    llr_joint_complex,
    llr_joint_real,
    llr_single_user,
    logcosh,
    pdf_equiv_complex,
    pdf_equiv_real,
)
from .harness import (
    BerRecord,
    ConfigError,
    SimConfig,
    SimContext,
    TrialResult,
    build_context,
    format_config,
    parse_config,
    read_config,
    run_sweep,
    run_trial,
    write_csv,
)
from .relay import (
    LLR_CLIP,
    RelayOutcome,
    RelayStrategy,
    broadcast_phase,
    end_node_recover,
    relay_joint_decode,
    relay_mlse_oracle,
    relay_single_user_decode,
    xor_map,
)

__version__ = "0.1.0"
