"""Batch experiment runner: protocol demos, decoder benchmarks, Knill EC
Monte Carlo, chain scenarios, and rate tables.

Runs are reproducible: the same subcommand, flags, and --seed produce
byte-identical data rows (wall-time columns excluded). Trials use
counter-based per-trial random streams, so --threads never changes the
output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from qnetcode import codes, ratecalc
from qnetcode.decoders import BpDecoder, LookupDecoder, MatchingDecoder, logical_failure
from qnetcode.ftec import KnillNoise, knill_ec_round
from qnetcode.netchain import ChainConfig, compare_latency, run_chain
from qnetcode.noise import NoiseModel, sample_error, werner
from qnetcode.pauli import PauliOperator
from qnetcode.protocols import superdense, swap_chain, teleport
from qnetcode.rng import stream


class UsageError(Exception):
    pass


def random_regular_check_matrix(r: int, n: int, row_weight: int, seed: int) -> np.ndarray:
    """Random sparse classical parity checks with full column coverage."""
    g = stream(seed, 777)
    for _ in range(1000):
        h = np.zeros((r, n), dtype=np.uint8)
        for i in range(r):
            h[i, g.choice(n, row_weight, replace=False)] = 1
        if h.sum(axis=0).min() > 0:
            return h
    raise RuntimeError("failed to draw a column-covering check matrix")


def parse_code(code_id: str) -> codes.CssCode:
    """rep3 | shor9 | surface:<d> | hgp:<seed>:<r>:<n>:<w>"""
    parts = code_id.split(":")
    name = parts[0]
    try:
        if name == "rep3":
            return codes.rep3()
        if name == "shor9":
            return codes.shor9()
        if name == "surface":
            return codes.rotated_surface(int(parts[1]))
        if name == "hgp":
            seed, r, n, w = (int(p) for p in parts[1:5])
            h = random_regular_check_matrix(r, n, w, seed)
            return codes.hypergraph_product(h, h, name=code_id)
    except (IndexError, ValueError) as e:
        raise UsageError(f"malformed code id {code_id!r}: {e}") from None
    raise UsageError(f"unknown code id {code_id!r}")


def parse_rate_code(code_id: str) -> tuple[str, int, int]:
    """Rate subcommand also accepts custom:<n>:<k> (parameters only)."""
    if code_id.startswith("custom:"):
        try:
            _, n, k = code_id.split(":")
            return code_id, int(n), int(k)
        except ValueError:
            raise UsageError(f"malformed code id {code_id!r}") from None
    code = parse_code(code_id)
    return code_id, code.n, code.k


def build_decoder(kind: str, code: codes.CssCode, p: float):
    if kind == "lookup":
        return LookupDecoder(code)
    if kind == "mwpm":
        return MatchingDecoder(code, p)
    if kind == "bp":
        return BpDecoder(code, p if 0 < p < 0.5 else 0.01)
    raise UsageError(f"unknown decoder {kind!r}")


def write_rows(rows: list[dict], out, fmt: str):
    if fmt == "json":
        out.write(json.dumps(rows, indent=2, default=str))
        out.write("\n")
        return
    if not rows:
        return
    writer = csv.DictWriter(out, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    writer.writerows(rows)


def _map_trials(fn, trials: int, threads: int) -> list:
    if threads <= 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(trials)))


# --- subcommands -------------------------------------------------------------


def cmd_rate(args) -> list[dict]:
    rows = []
    reports = []
    for code_id in args.code:
        cid, n, k = parse_rate_code(code_id)
        cfg = ratecalc.RateConfig(args.qubits, n, k, args.cycle, args.pc, args.pg)
        rep = ratecalc.epr_rate(cfg)
        reports.append(rep)
        rows.append(
            {
                "code_id": cid,
                "n": n,
                "k": k,
                "Q": args.qubits,
                "blocks": rep.blocks,
                "rate_per_T": str(Fraction(rep.epr_units_per_T)),
                "rate_decimal": float(rep.epr_units_per_T),
                "p_eff": rep.p_eff,
            }
        )
    if len(reports) >= 2 and reports[0].epr_units_per_T > 0:
        ratio = reports[-1].epr_units_per_T / reports[0].epr_units_per_T
        print(
            f"rate ratio (last/first): {ratio} = {float(ratio):.4f} "
            f"({ratecalc.fold_description(ratio)})",
            file=sys.stderr,
        )
    return rows


def cmd_protocol(args) -> list[dict]:
    noise = NoiseModel.from_spec(args.noise)
    rows = []

    def run_one(t: int) -> dict:
        rng = stream(args.seed, t)
        if args.name == "teleport":
            out = teleport([("H", 0)], noise, rng)
            return {
                "trial_id": t,
                "protocol": "teleport",
                "outcome_bits": f"{out.classical_bits[0][0]}{out.classical_bits[0][1]}",
                "success": int(bool(out.verified)),
                "residual_frame": str(out.residual_frame),
            }
        if args.name == "superdense":
            bits = (t % 2, (t // 2) % 2)
            got = superdense(bits, noise, rng)
            return {
                "trial_id": t,
                "protocol": "superdense",
                "outcome_bits": f"{got[0]}{got[1]}",
                "success": int(got == bits),
                "residual_frame": "I",
            }
        if args.name == "swap":
            out = swap_chain(args.links, noise, rng)
            bits = "".join(f"{a}{b}" for a, b in out.classical_bits)
            return {
                "trial_id": t,
                "protocol": "swap",
                "outcome_bits": bits,
                "success": int(out.residual_frame.is_identity()),
                "residual_frame": str(out.residual_frame),
            }
        raise UsageError(f"unknown protocol {args.name!r}")

    rows = _map_trials(run_one, args.trials, args.threads)
    return rows


def cmd_decode(args) -> list[dict]:
    code = parse_code(args.code)
    decoder = build_decoder(args.decoder, code, args.p)
    noise = NoiseModel.independent_xz(args.p, args.p)
    failures = 0
    iter_total = 0
    t0 = time.perf_counter()

    def run_one(t: int):
        rng = stream(args.seed, t)
        err = sample_error(noise, code.n, rng)
        result = decoder.decode(codes.syndrome(code, err))
        iters = result.iterations or 0
        return logical_failure(code, err, result.correction), iters

    results = _map_trials(run_one, args.trials, args.threads)
    failures = sum(f for f, _ in results)
    iter_total = sum(i for _, i in results)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    return [
        {
            "code_id": args.code,
            "n": code.n,
            "k": code.k,
            "d": code.d,
            "p": args.p,
            "trials": args.trials,
            "logical_failures": failures,
            "avg_iterations": iter_total / max(args.trials, 1),
            "wall_time_ms": round(wall_ms, 3),
        }
    ]


def cmd_knill(args) -> list[dict]:
    code = parse_code(args.code)
    decoder = build_decoder(args.decoder, code, 0.01)
    if args.pc or args.pg:
        data_noise = NoiseModel.depolarizing(min(args.pc + 5 * args.pg, 1.0))
    else:
        data_noise = NoiseModel.from_spec(args.noise)
    noise = KnillNoise(
        epr_error=NoiseModel.from_spec(args.epr_noise),
        meas_flip=NoiseModel.from_spec(args.meas_flip),
        data_noise=data_noise,
    )
    identity = PauliOperator.identity(code.n)
    t0 = time.perf_counter()

    def run_one(t: int) -> bool:
        return knill_ec_round(code, decoder, identity, noise, stream(args.seed, t)).logical_failure

    failures = sum(_map_trials(run_one, args.trials, args.threads))
    seconds = time.perf_counter() - t0
    return [
        {
            "code_id": args.code,
            "p_c": args.pc,
            "p_g": args.pg,
            "p_eff": min(args.pc + 5 * args.pg, 1.0) if (args.pc or args.pg) else data_noise.p,
            "meas_flip_p": NoiseModel.from_spec(args.meas_flip).flip_probability(),
            "trials": args.trials,
            "logical_failures": failures,
            "failure_rate": failures / max(args.trials, 1),
            "seconds": round(seconds, 3),
        }
    ]


def cmd_chain(args) -> list[dict]:
    file_cfg = {}
    if args.config:
        with open(args.config) as fh:
            file_cfg = json.load(fh)

    def pick(flag_value, key, default):
        if flag_value is not None:
            return flag_value
        return file_cfg.get(key, default)

    mode = pick(args.mode, "mode", "physical")
    m = int(pick(args.links, "links", 4))
    fidelity = float(pick(args.fidelity, "fidelity", 0.95))
    rounds = int(pick(args.rounds, "rounds", 2))
    schedule = pick(args.schedule, "schedule", "nested")
    delay = float(pick(args.delay, "delay", 10.0))
    code_id = pick(args.code, "code_id", None)
    kwargs = {}
    if mode != "physical":
        if not code_id:
            raise UsageError("encoded chain modes require --code")
        code = parse_code(code_id)
        kwargs["code"] = code
        kwargs["decoder"] = build_decoder(args.decoder, code, 0.01)
        kwargs["p_g"] = float(pick(args.pg, "p_g", 0.001))
        kwargs["p_c"] = float(pick(args.pc, "p_c", 0.05))
    cfg = ChainConfig(
        num_links=m,
        link_state=werner(fidelity),
        purify_rounds=rounds,
        swap_schedule=schedule,
        hop_delay_D=delay,
        mode=mode,
        seed=args.seed,
        **kwargs,
    )
    report = run_chain(cfg)
    two_way, one_way = compare_latency(cfg)
    return [
        {
            "mode": mode,
            "m": m,
            "F_end": report.end_state.fidelity,
            "survival": report.survival,
            "latency_T": report.latency,
            "two_way_T": two_way,
            "one_way_T": one_way,
        }
    ]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qnetcode", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=1000)
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("rate", help="EPR generation rate table")
    common(p)
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--code", action="append", required=True, help="repeatable; custom:<n>:<k> allowed")
    p.add_argument("--cycle", type=int, default=4)
    p.add_argument("--pc", type=float, default=0.0)
    p.add_argument("--pg", type=float, default=0.0)

    p = sub.add_parser("protocol", help="protocol trial logs")
    common(p)
    p.add_argument("--name", choices=("teleport", "superdense", "swap"), required=True)
    p.add_argument("--noise", default="none")
    p.add_argument("--links", type=int, default=3)

    p = sub.add_parser("decode", help="decoder benchmark")
    common(p)
    p.add_argument("--code", required=True)
    p.add_argument("--decoder", choices=("lookup", "mwpm", "bp"), required=True)
    p.add_argument("--p", type=float, default=0.01)

    p = sub.add_parser("knill", help="Knill EC Monte Carlo")
    common(p)
    p.add_argument("--code", required=True)
    p.add_argument("--decoder", choices=("lookup", "mwpm", "bp"), default="lookup")
    p.add_argument("--noise", default="none", help="data noise spec, e.g. depolarizing:0.001")
    p.add_argument("--epr-noise", default="none")
    p.add_argument("--meas-flip", default="none")
    p.add_argument("--pc", type=float, default=0.0)
    p.add_argument("--pg", type=float, default=0.0)

    p = sub.add_parser("chain", help="repeater chain scenario")
    common(p)
    p.add_argument("--config", default=None, help="JSON scenario file; flags win on conflict")
    p.add_argument("--mode", choices=("physical", "encoded_teleport", "encoded_direct"), default=None)
    p.add_argument("--links", type=int, default=None)
    p.add_argument("--fidelity", type=float, default=None)
    p.add_argument("--rounds", type=int, default=None)
    p.add_argument("--schedule", choices=("sequential", "nested"), default=None)
    p.add_argument("--delay", type=float, default=None)
    p.add_argument("--code", default=None)
    p.add_argument("--decoder", choices=("lookup", "mwpm", "bp"), default="lookup")
    p.add_argument("--pc", type=float, default=None)
    p.add_argument("--pg", type=float, default=None)
    return parser


_COMMANDS = {
    "rate": cmd_rate,
    "protocol": cmd_protocol,
    "decode": cmd_decode,
    "knill": cmd_knill,
    "chain": cmd_chain,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0
    try:
        rows = _COMMANDS[args.command](args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # runtime failure
        print(f"runtime failure: {e}", file=sys.stderr)
        return 2
    buf = io.StringIO()
    write_rows(rows, buf, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
