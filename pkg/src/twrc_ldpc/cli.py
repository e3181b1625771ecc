"""Command-line front end: code construction, BER sweeps, LLR tables, oracle runs."""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .channel import ChannelConfig, TrialRng, bpsk_modulate, real_mac, sigma2_from_ebno
from .codec import build_generator, encode, peg_construct, save_alist
from .curves import emit_curve
from .demapper import (
    XorSignalSet,
    llr_bpsk_awgn,
    llr_joint_complex,
    llr_joint_real,
    llr_single_user,
    pdf_equiv_complex,
    pdf_equiv_real,
)
from .harness import (
    ConfigError,
    build_context,
    format_config,
    read_config,
    run_sweep,
    write_csv,
)
from .relay import relay_joint_decode, relay_mlse_oracle, xor_map

__all__ = ["main"]


def _cmd_peg(args) -> int:
    h = peg_construct(args.n, args.dv, args.dc, args.seed)
    save_alist(h, args.out)
    print(f"wrote {args.out}: {h.n_rows} x {h.n_cols}, {h.n_edges} edges")
    return 0


def _cmd_ber(args) -> int:
    cfg = read_config(args.config)
    if args.workers is not None:
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        cfg = type(cfg)(**{**cfg.__dict__, "workers": args.workers})
        cfg.validate()
    if args.print_config:
        sys.stdout.write(format_config(cfg))
        return 0
    records = run_sweep(cfg)
    for r in records:
        print(
            f"ebno={r.ebno_db:g} dB  trials={r.trials}  ber={r.ber:.6g}  "
            f"wer={r.wer:.6g}  avg_iter={r.avg_iterations:.6g}"
        )
    if args.csv:
        write_csv(records, args.csv)
        print(f"wrote {args.csv}")
    if args.curve:
        emit_curve({cfg.strategy: records}, args.curve)
        print(f"wrote {args.curve}")
    return 0


def _table_sigma2(args) -> float:
    if args.sigma2 is not None:
        if args.sigma2 <= 0:
            raise ConfigError("--sigma2 must be positive")
        return args.sigma2
    return sigma2_from_ebno(args.ebno_db, args.code_rate)


def _cmd_llr_table(args) -> int:
    sigma2 = _table_sigma2(args)
    ys = np.arange(args.y_min, args.y_max + args.y_step / 2, args.y_step)
    rows = []
    if args.channel == "joint-complex":
        h_a = complex(args.gain_a)
        h_b = args.gain_b * complex(math.cos(args.delta_theta), math.sin(args.delta_theta))
        sig = XorSignalSet.from_gains(h_a, h_b)
        rows.append("y_re,y_im,llr,llr_from_pdfs")
        for y in ys:
            yc = complex(y, args.y_imag)
            llr = llr_joint_complex(yc, sig, sigma2)
            ratio = math.log(
                pdf_equiv_complex(yc, 1, sig, sigma2) / pdf_equiv_complex(yc, 0, sig, sigma2)
            )
            rows.append(f"{y:.6g},{args.y_imag:.6g},{llr:.12g},{ratio:.12g}")
    elif args.channel == "joint-real":
        rows.append("y,llr,llr_from_pdfs")
        for y in ys:
            llr = llr_joint_real(y, sigma2)
            ratio = math.log(
                pdf_equiv_real(y, 1, sigma2) / pdf_equiv_real(y, 0, sigma2)
            )
            rows.append(f"{y:.6g},{llr:.12g},{ratio:.12g}")
    else:
        fn = llr_single_user if args.channel == "single-user" else llr_bpsk_awgn
        rows.append("y,llr")
        for y in ys:
            rows.append(f"{y:.6g},{fn(y, sigma2):.12g}")
    text = "\n".join(rows) + "\n"
    if args.out:
        with open(args.out, "w", encoding="ascii", newline="") as f:
            f.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_oracle(args) -> int:
    h = peg_construct(args.n, args.dv, args.dc, args.seed)
    g = build_generator(h)
    if g.k > 12:
        raise ConfigError(f"oracle comparison needs k <= 12, got k = {g.k}")
    sigma2 = sigma2_from_ebno(args.ebno_db, g.rate)
    cfg = ChannelConfig.from_ebno(args.ebno_db, g.rate)
    mlse_errors = 0
    joint_errors = 0
    discordant = 0
    for t in range(args.trials):
        rng = TrialRng(args.master_seed, t)
        c_a = encode(g, rng.random_bits(g.k))
        c_b = encode(g, rng.random_bits(g.k))
        c_r = xor_map(c_a, c_b)
        y = real_mac(bpsk_modulate(c_a), bpsk_modulate(c_b), sigma2, rng)
        mlse_bad = bool(np.any(relay_mlse_oracle(y, cfg, g).c_r_hat != c_r))
        joint_bad = bool(np.any(relay_joint_decode(y, cfg, h, args.max_iter, args.scale).c_r_hat != c_r))
        mlse_errors += mlse_bad
        joint_errors += joint_bad
        discordant += mlse_bad != joint_bad
    margin = 3.0 * math.sqrt(max(discordant, 1))
    print(f"code: {h.n_rows} x {h.n_cols}, k = {g.k}, ebno = {args.ebno_db:g} dB, trials = {args.trials}")
    print(f"mlse word errors : {mlse_errors}")
    print(f"joint word errors: {joint_errors}")
    print(f"paired margin 3*sqrt(discordant) = {margin:.2f}")
    ok = mlse_errors <= joint_errors + margin
    print("oracle dominates within margin" if ok else "oracle dominance VIOLATED")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twrc-ldpc",
        description="Two-way relay channel simulator with joint network and LDPC coding.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_peg = sub.add_parser("peg", help="construct a regular code and write it as alist")
    p_peg.add_argument("--n", type=int, required=True, help="codeword length")
    p_peg.add_argument("--dv", type=int, default=3, help="variable-node degree")
    p_peg.add_argument("--dc", type=int, default=6, help="check-node degree")
    p_peg.add_argument("--seed", type=int, default=1, help="construction seed")
    p_peg.add_argument("--out", required=True, help="output alist path")
    p_peg.set_defaults(func=_cmd_peg)

    p_ber = sub.add_parser("ber", help="run a Monte-Carlo sweep from a config file")
    p_ber.add_argument("--config", required=True, help="key = value config file")
    p_ber.add_argument("--csv", help="write per-point records to this CSV file")
    p_ber.add_argument("--curve", help="write an SVG curve to this path")
    p_ber.add_argument("--workers", type=int, help="override the configured worker count")
    p_ber.add_argument(
        "--print-config",
        action="store_true",
        help="print the fully resolved configuration and exit",
    )
    p_ber.set_defaults(func=_cmd_ber)

    p_tab = sub.add_parser("llr-table", help="dump demapper values on an observation grid")
    p_tab.add_argument(
        "--channel",
        choices=("joint-real", "joint-complex", "single-user", "bpsk-awgn"),
        default="joint-real",
    )
    p_tab.add_argument("--sigma2", type=float, help="noise variance (overrides --ebno-db)")
    p_tab.add_argument("--ebno-db", type=float, default=2.0)
    p_tab.add_argument("--code-rate", type=float, default=0.5)
    p_tab.add_argument("--y-min", type=float, default=-4.0)
    p_tab.add_argument("--y-max", type=float, default=4.0)
    p_tab.add_argument("--y-step", type=float, default=0.1)
    p_tab.add_argument("--y-imag", type=float, default=0.0, help="imaginary part of the grid")
    p_tab.add_argument("--delta-theta", type=float, default=math.pi / 4)
    p_tab.add_argument("--gain-a", type=float, default=1.0)
    p_tab.add_argument("--gain-b", type=float, default=1.0)
    p_tab.add_argument("--out", help="write the table here instead of stdout")
    p_tab.set_defaults(func=_cmd_llr_table)

    p_or = sub.add_parser("oracle", help="compare the joint decoder against exhaustive search")
    p_or.add_argument("--n", type=int, default=12)
    p_or.add_argument("--dv", type=int, default=3)
    p_or.add_argument("--dc", type=int, default=6)
    p_or.add_argument("--seed", type=int, default=1)
    p_or.add_argument("--ebno-db", type=float, default=2.0)
    p_or.add_argument("--trials", type=int, default=10000)
    p_or.add_argument("--max-iter", type=int, default=60)
    p_or.add_argument("--scale", type=float, default=0.85)
    p_or.add_argument("--master-seed", type=int, default=1)
    p_or.set_defaults(func=_cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
