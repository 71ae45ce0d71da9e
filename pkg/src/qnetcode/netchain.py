"""Repeater-chain simulation: link purification, swap folding, latency
accounting, and encoded-channel modes.

The primary engine evolves Bell-diagonal label distributions exactly;
tableau sampling (sample_chain) is the independent cross-check for small
chains. Latency is counted in units of the gate time T, with D the
classical one-hop delay. run_chain reports classical-communication
latency only (acknowledgments and correction frames):

    physical (two-way purification):  2*D*rounds + (m-1)*D swap corrections
    encoded modes (one-way):          D*m

compare_latency additionally counts the initial one-way distribution
(D per hop) in both modes, so the two totals are directly comparable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from qnetcode import gf2
from qnetcode.codes import CssCode
from qnetcode.noise import BellDiagonalState, LABEL_XZ, NoiseModel, effective_error_rate
from qnetcode.pauli import PauliOperator
from qnetcode.protocols import purify_pair_dist
from qnetcode.rng import stream
from qnetcode.stabsim import StabilizerState, prepare_bell

MODES = ("physical", "encoded_teleport", "encoded_direct")
SCHEDULES = ("sequential", "nested")


def compose_swap(a: BellDiagonalState, b: BellDiagonalState) -> BellDiagonalState:
    """Label convolution of two pair-error distributions under swapping."""
    label_of = {xz: i for i, xz in enumerate(LABEL_XZ)}
    out = np.zeros(4, dtype=np.float64)
    for i, (xi, zi) in enumerate(LABEL_XZ):
        for j, (xj, zj) in enumerate(LABEL_XZ):
            out[label_of[(xi ^ xj, zi ^ zj)]] += a.probs[i] * b.probs[j]
    return BellDiagonalState(out)


def default_purify_schedule(rounds: int) -> tuple[str, ...]:
    """Alternating bitflip/phaseflip rounds."""
    return tuple("bitflip" if i % 2 == 0 else "phaseflip" for i in range(rounds))


@dataclass
class ChainConfig:
    num_links: int
    link_state: BellDiagonalState
    purify_rounds: int = 0
    purify_schedule: Optional[tuple[str, ...]] = None
    swap_schedule: str = "sequential"
    hop_delay_D: float = 10.0
    mode: str = "physical"
    code: Optional[CssCode] = None
    decoder: object = None
    p_g: float = 0.0
    p_c: float = 0.0
    mc_trials: int = 400
    seed: int = 0

    def __post_init__(self):
        if self.num_links < 1:
            raise ValueError("num_links must be >= 1")
        if self.hop_delay_D < 0:
            raise ValueError("hop delay must be >= 0")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.swap_schedule not in SCHEDULES:
            raise ValueError(f"swap_schedule must be one of {SCHEDULES}")
        if self.mode != "physical" and (self.code is None or self.decoder is None):
            raise ValueError("encoded modes require a code and a decoder")
        if self.purify_schedule is None:
            self.purify_schedule = default_purify_schedule(self.purify_rounds)
        elif len(self.purify_schedule) != self.purify_rounds:
            raise ValueError("purify_schedule length must equal purify_rounds")


@dataclass
class ChainReport:
    end_state: BellDiagonalState
    pairs_per_attempt: float
    survival: float
    latency: float
    per_stage_log: list = field(default_factory=list)


def _purify_link(state: BellDiagonalState, schedule: tuple[str, ...], log: list):
    """Returns (purified state, survival probability of the whole tree).

    A schedule of R rounds consumes 2^R raw pairs; round r performs
    2^(R-r-1) independent comparisons, every one of which must succeed
    for the link to yield its output pair.
    """
    survival = 1.0
    rounds = len(schedule)
    for r, basis in enumerate(schedule):
        sp, state = purify_pair_dist(state, state, basis)
        survival *= sp ** (2 ** (rounds - r - 1))
        log.append({"stage": "purify", "basis": basis, "success_prob": sp, "fidelity": state.fidelity})
    return state, survival


def _fold(states: list[BellDiagonalState], schedule: str) -> BellDiagonalState:
    # compose_swap is associative/commutative; schedule affects latency only
    if schedule == "sequential":
        acc = states[0]
        for s in states[1:]:
            acc = compose_swap(acc, s)
        return acc
    while len(states) > 1:
        nxt = [compose_swap(states[i], states[i + 1]) for i in range(0, len(states) - 1, 2)]
        if len(states) % 2:
            nxt.append(states[-1])
        states = nxt
    return states[0]


def _bell_from_xz(p_x: float, p_z: float) -> BellDiagonalState:
    """Independent X/Z flip probabilities as a Bell-diagonal distribution."""
    return BellDiagonalState(
        np.array(
            [
                (1 - p_x) * (1 - p_z),
                p_x * (1 - p_z),
                p_x * p_z,
                (1 - p_x) * p_z,
            ]
        )
    )


def _logical_channel(config: ChainConfig, epr_model: NoiseModel, data_model: NoiseModel, hop: int) -> BellDiagonalState:
    """Per-hop logical error distribution from a seeded knill Monte Carlo."""
    from qnetcode.ftec import KnillNoise, knill_ec_round

    code = config.code
    counts = np.zeros(4, dtype=np.int64)
    noise = KnillNoise(
        epr_error=epr_model,
        meas_flip=NoiseModel.bit_flip(config.p_g) if config.p_g else NoiseModel.none(),
        data_noise=data_model,
    )
    label_of = {xz: i for i, xz in enumerate(LABEL_XZ)}
    identity = PauliOperator.identity(code.n)
    for t in range(config.mc_trials):
        rep = knill_ec_round(code, config.decoder, identity, noise, stream(config.seed, 900 + hop, t))
        x_bad = int(rep.residual_logical_x.any())
        z_bad = int(rep.residual_logical_z.any())
        counts[label_of[(x_bad, z_bad)]] += 1
    return BellDiagonalState(counts / counts.sum())


def run_chain(config: ChainConfig) -> ChainReport:
    m = config.num_links
    log: list = []
    if config.mode == "physical":
        link, survival_link = _purify_link(config.link_state, config.purify_schedule, log)
        end = _fold([link] * m, config.swap_schedule)
        # two-way purification acks plus one-way forwarding of swap frames
        latency = 2.0 * config.hop_delay_D * config.purify_rounds + (m - 1) * config.hop_delay_D
        raw_pairs = 2 ** config.purify_rounds
        survival = survival_link ** m
        log.append({"stage": "swap", "links": m, "fidelity": end.fidelity})
        return ChainReport(end, survival_link / raw_pairs, survival, latency, log)

    # encoded modes: purified (or raw) links feed a logical channel per hop
    if config.mode == "encoded_teleport":
        link, survival_link = _purify_link(config.link_state, config.purify_schedule, log)
        p_x = float(link.probs[1] + link.probs[2])
        p_z = float(link.probs[3] + link.probs[2])
        epr_model = NoiseModel.independent_xz(p_x, p_z)
        data_model = NoiseModel.none()
        raw_pairs = 2 ** config.purify_rounds
    else:  # encoded_direct: no purification stage, effective rate per hop
        survival_link = 1.0
        raw_pairs = 1
        p_eff = effective_error_rate(config.p_c, config.p_g)
        epr_model = NoiseModel.none()
        data_model = NoiseModel.depolarizing(p_eff)
    hops = []
    for hop in range(m):
        dist = _logical_channel(config, epr_model, data_model, hop)
        hops.append(dist)
        log.append({"stage": "hop", "hop": hop, "logical_fidelity": dist.fidelity})
    end = _fold(hops, config.swap_schedule)
    latency = config.hop_delay_D * m  # one-way classical communication only
    return ChainReport(end, survival_link / raw_pairs, survival_link ** m, latency, log)


def compare_latency(config: ChainConfig) -> tuple[float, float]:
    """(two_way_T, one_way_T) for the same chain geometry: the physical
    purification path vs the encoded one-way path."""
    m = config.num_links
    two_way = config.hop_delay_D * m + 2.0 * config.hop_delay_D * config.purify_rounds
    one_way = config.hop_delay_D * m
    return two_way, one_way


# --- tableau cross-check -----------------------------------------------------


def sample_chain_trial(config: ChainConfig, rng: np.random.Generator):
    """One full tableau trial of the physical mode.

    Returns (success, end_label_index or None). A trial fails when any
    purification comparison disagrees.
    """
    if config.mode != "physical":
        raise ValueError("sampling cross-check covers the physical mode only")
    m = config.num_links
    per_link = 2 ** config.purify_rounds
    n = m * per_link * 2
    state = StabilizerState(n)

    def pair_qubits(link: int, j: int) -> tuple[int, int]:
        base = (link * per_link + j) * 2
        return base, base + 1

    for link in range(m):
        for j in range(per_link):
            a, b = pair_qubits(link, j)
            prepare_bell(state, a, b)
            xl, zl = LABEL_XZ[config.link_state.sample_label(rng)]
            x = np.zeros(n, dtype=np.uint8)
            z = np.zeros(n, dtype=np.uint8)
            x[a], z[a] = xl, zl
            state.apply_pauli(PauliOperator(n, x, z))

    for link in range(m):
        alive = list(range(per_link))
        for basis in config.purify_schedule:
            nxt = []
            for i in range(0, len(alive), 2):
                keep, meas = alive[i], alive[i + 1]
                ka, kb = pair_qubits(link, keep)
                ma, mb = pair_qubits(link, meas)
                if basis == "phaseflip":
                    for q in (ka, kb, ma, mb):
                        state.h(q)
                state.cnot(ka, ma)
                state.cnot(kb, mb)
                bit_a = state.measure_z(ma, rng)
                bit_b = state.measure_z(mb, rng)
                if basis == "phaseflip":
                    state.h(ka)
                    state.h(kb)
                if bit_a != bit_b:
                    return False, None
                nxt.append(keep)
            alive = nxt

    # swap the kept pairs sequentially and read the end-to-end label
    frame_x = frame_z = 0
    for link in range(1, m):
        _, left_b = pair_qubits(link - 1, 0)
        right_a, _ = pair_qubits(link, 0)
        xx, zz = state.bell_measure(left_b, right_a, rng)
        frame_x ^= zz
        frame_z ^= xx
    first_a, first_b = pair_qubits(0, 0)
    _, last_b = pair_qubits(m - 1, 0)
    end_q = last_b if m > 1 else first_b
    if frame_x:
        state.x_gate(end_q)
    if frame_z:
        state.z_gate(end_q)
    xx, zz = state.bell_measure(first_a, end_q, rng)
    label_of = {xz: i for i, xz in enumerate(LABEL_XZ)}
    return True, label_of[(zz, xx)]
