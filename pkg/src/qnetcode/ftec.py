"""Knill teleportation-based error correction.

One round teleports the data block through an encoded EPR pair via a
transversal Bell measurement; the outcome bits carry both the error
syndromes and the logical teleportation frame, so a single measurement
round suffices (single-shot decoding).

Block layout inside the simulator: data block [0, n), EPR half A
[n, 2n) (consumed by the Bell measurement), EPR half B [2n, 3n)
(the output block). One round costs 4 time units: ancilla preparation,
two CNOT steps, one measurement step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from qnetcode import gf2
from qnetcode.codes import CssCode
from qnetcode.decoders import DecodeResult, UndecodableError
from qnetcode.noise import NoiseModel
from qnetcode.pauli import PauliOperator
from qnetcode.stabsim import StabilizerState

ROUND_COST_T = 4


@dataclass
class BellOutcomeBlock:
    """Transversal Bell-measurement outcomes.

    u: X-basis outcomes of the data block (measured after the H layer);
    v: Z-basis outcomes of the ancilla block A.
    """

    u: np.ndarray
    v: np.ndarray


@dataclass
class KnillReport:
    s_x_checks: np.ndarray
    s_z_checks: np.ndarray
    logical_xx: np.ndarray
    logical_zz: np.ndarray
    decode: Optional[DecodeResult]
    logical_failure: bool
    # k-bit indicators: residual acts as logical X_i / Z_i on the output
    residual_logical_x: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.uint8))
    residual_logical_z: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.uint8))
    cost_T: int = ROUND_COST_T


@dataclass(frozen=True)
class KnillNoise:
    """Noise hooks for one EC round."""

    epr_error: NoiseModel = field(default_factory=NoiseModel.none)
    meas_flip: NoiseModel = field(default_factory=NoiseModel.none)
    data_noise: NoiseModel = field(default_factory=NoiseModel.none)


def _block_pauli(n_total: int, offset: int, x: np.ndarray, z: np.ndarray) -> PauliOperator:
    xs = np.zeros(n_total, dtype=np.uint8)
    zs = np.zeros(n_total, dtype=np.uint8)
    xs[offset : offset + len(x)] = x
    zs[offset : offset + len(z)] = z
    return PauliOperator(n_total, xs, zs)


def _row_pauli(n_total: int, offset: int, support: np.ndarray, kind: str) -> PauliOperator:
    zero = np.zeros(len(support), dtype=np.uint8)
    if kind == "X":
        return _block_pauli(n_total, offset, support, zero)
    return _block_pauli(n_total, offset, zero, support)


def prepare_logical_zero(state: StabilizerState, code: CssCode, offset: int, rng: np.random.Generator):
    """Project an all-zeros block into logical |0> of the code.

    |0...0> already satisfies the Z checks and logical Z; measuring each
    X check and applying a Z fixup solving h_x f = outcomes forces the
    +1 eigenspace.
    """
    n_total = state.num_qubits
    outcomes = np.array(
        [state.measure_pauli(_row_pauli(n_total, offset, row, "X"), rng) for row in code.h_x],
        dtype=np.uint8,
    )
    if code.r_x and outcomes.any():
        fix = gf2.solve(code.h_x, outcomes)
        if fix is None:
            raise AssertionError("X-check outcomes inconsistent with h_x row space")
        state.apply_pauli(_block_pauli(n_total, offset, np.zeros(code.n, dtype=np.uint8), fix))


def prepare_logical_epr(
    state: StabilizerState, code: CssCode, off_a: int, off_b: int, rng: np.random.Generator
):
    """Entangle two logical-|0> blocks into a logical EPR pair.

    Measures XbarXbar for each logical qubit and fixes a -1 outcome by a
    logical Z on block A.
    """
    n_total = state.num_qubits
    prepare_logical_zero(state, code, off_a, rng)
    prepare_logical_zero(state, code, off_b, rng)
    for i in range(code.k):
        lx = code.logical_x[i]
        x = np.zeros(n_total, dtype=np.uint8)
        x[off_a : off_a + code.n] = lx
        x[off_b : off_b + code.n] = lx
        pair = PauliOperator(n_total, x, np.zeros(n_total, dtype=np.uint8))
        if state.measure_pauli(pair, rng):
            state.apply_pauli(_row_pauli(n_total, off_a, code.logical_z[i], "Z"))


def _sample_flips(model: NoiseModel, n: int, rng: np.random.Generator) -> np.ndarray:
    p = model.flip_probability()
    if p == 0.0:
        return np.zeros(n, dtype=np.uint8)
    return (rng.random(n) < p).astype(np.uint8)


def _run_round(
    code: CssCode,
    data_error: PauliOperator,
    epr_error: PauliOperator,
    meas_flip: NoiseModel,
    rng: np.random.Generator,
    logical_twirl: Optional[tuple[np.ndarray, np.ndarray]] = None,
):
    """Full tableau execution of one encoded Bell measurement.

    Returns (outcomes, state, flips_u, flips_v); the post-state holds the
    (uncorrected) output block at offset 2n.
    """
    n = code.n
    if data_error.num_qubits != n:
        raise ValueError("data error must act on n qubits")
    if epr_error.num_qubits != 2 * n:
        raise ValueError("EPR error must span the 2n EPR qubits")
    state = StabilizerState(3 * n)
    prepare_logical_zero(state, code, 0, rng)
    if logical_twirl is not None:
        a_bits, b_bits = logical_twirl
        for i in range(code.k):
            if a_bits[i]:
                state.apply_pauli(_row_pauli(3 * n, 0, code.logical_x[i], "X"))
            if b_bits[i]:
                state.apply_pauli(_row_pauli(3 * n, 0, code.logical_z[i], "Z"))
    prepare_logical_epr(state, code, n, 2 * n, rng)
    state.apply_pauli(_block_pauli(3 * n, 0, data_error.x_bits, data_error.z_bits))
    state.apply_pauli(_block_pauli(3 * n, n, epr_error.x_bits, epr_error.z_bits))
    for i in range(n):
        state.cnot(i, n + i)
    for i in range(n):
        state.h(i)
    u = np.array([state.measure_z(i, rng) for i in range(n)], dtype=np.uint8)
    v = np.array([state.measure_z(n + i, rng) for i in range(n)], dtype=np.uint8)
    flips_u = _sample_flips(meas_flip, n, rng)
    flips_v = _sample_flips(meas_flip, n, rng)
    return BellOutcomeBlock(u=u ^ flips_u, v=v ^ flips_v), state, flips_u, flips_v


def encoded_bell_measure(
    code: CssCode,
    data_error: PauliOperator,
    epr_error: PauliOperator,
    meas_flip: NoiseModel,
    rng: np.random.Generator,
    logical_twirl: Optional[tuple[np.ndarray, np.ndarray]] = None,
) -> BellOutcomeBlock:
    """Transversal Bell measurement of the data block against an encoded
    EPR pair, with the given errors injected."""
    outcomes, _, _, _ = _run_round(code, data_error, epr_error, meas_flip, rng, logical_twirl)
    return outcomes


def extract(outcomes: BellOutcomeBlock, code: CssCode):
    """(s_x_checks, s_z_checks, logical_xx, logical_zz) from the raw bits.

    Assignment validated against the tableau oracle: the X-basis data
    outcomes u feed the phase checks and logical XX; the Z-basis ancilla
    outcomes v feed the bit checks and logical ZZ.
    """
    u = np.asarray(outcomes.u, dtype=np.uint8)
    v = np.asarray(outcomes.v, dtype=np.uint8)
    if u.shape != (code.n,) or v.shape != (code.n,):
        raise ValueError("outcome block length does not match code.n")
    s_x = gf2.matvec(code.h_x, u) if code.r_x else np.zeros(0, dtype=np.uint8)
    s_z = gf2.matvec(code.h_z, v) if code.r_z else np.zeros(0, dtype=np.uint8)
    logical_xx = gf2.matvec(code.logical_x, u)
    logical_zz = gf2.matvec(code.logical_z, v)
    return s_x, s_z, logical_xx, logical_zz


def apply_output_corrections(
    state: StabilizerState,
    code: CssCode,
    correction: PauliOperator,
    logical_xx: np.ndarray,
    logical_zz: np.ndarray,
):
    """Apply the decoded correction plus the teleportation frame to the
    output block (offset 2n). Frame convention: Xbar^zz then Zbar^xx."""
    n = code.n
    state.apply_pauli(_block_pauli(3 * n, 2 * n, correction.x_bits, correction.z_bits))
    for i in range(code.k):
        if logical_zz[i]:
            state.apply_pauli(_row_pauli(3 * n, 2 * n, code.logical_x[i], "X"))
        if logical_xx[i]:
            state.apply_pauli(_row_pauli(3 * n, 2 * n, code.logical_z[i], "Z"))


def verify_output(
    state: StabilizerState,
    code: CssCode,
    logical_z_bits: Optional[np.ndarray] = None,
) -> bool:
    """Output block is syndrome-clean and (optionally) holds the expected
    logical Z eigenvalues."""
    n = code.n
    for row in code.h_x:
        if state.expectation(_row_pauli(3 * n, 2 * n, row, "X")) != 1:
            return False
    for row in code.h_z:
        if state.expectation(_row_pauli(3 * n, 2 * n, row, "Z")) != 1:
            return False
    if logical_z_bits is not None:
        for i in range(code.k):
            want = -1 if logical_z_bits[i] else 1
            if state.expectation(_row_pauli(3 * n, 2 * n, code.logical_z[i], "Z")) != want:
                return False
    return True


def knill_ec_round(
    code: CssCode,
    decoder,
    data_error: PauliOperator,
    noise: KnillNoise,
    rng: np.random.Generator,
) -> KnillReport:
    """One single-shot EC round: encoded Bell measurement, extraction,
    one decode, corrections on the output block, failure accounting.

    logical_failure compares the frame plus correction against the known
    injected errors; an undecodable syndrome is recorded as a failure.
    """
    from qnetcode.noise import sample_error

    n = code.n
    data = data_error
    if noise.data_noise.variant != "none":
        extra = sample_error(noise.data_noise, n, rng)
        data = PauliOperator(n, data.x_bits ^ extra.x_bits, data.z_bits ^ extra.z_bits)
    epr = sample_error(noise.epr_error, 2 * n, rng)
    outcomes, state, _, _ = _run_round(code, data, epr, NoiseModel.none(), rng)
    # meas flips are sampled here so they stay known to the failure account
    flips_u = _sample_flips(noise.meas_flip, n, rng)
    flips_v = _sample_flips(noise.meas_flip, n, rng)
    outcomes = BellOutcomeBlock(u=outcomes.u ^ flips_u, v=outcomes.v ^ flips_v)
    s_x, s_z, logical_xx, logical_zz = extract(outcomes, code)

    epr_a_x, epr_b_x = epr.x_bits[:n], epr.x_bits[n:]
    epr_a_z, epr_b_z = epr.z_bits[:n], epr.z_bits[n:]
    # outcome-flip vectors implied by the injected errors (linear model)
    e_u = data.z_bits ^ epr_a_z ^ flips_u
    e_v = data.x_bits ^ epr_a_x ^ flips_v
    if code.r_x and not np.array_equal(s_x, gf2.matvec(code.h_x, e_u)):
        raise AssertionError("tableau syndrome disagrees with the linear error model")
    if code.r_z and not np.array_equal(s_z, gf2.matvec(code.h_z, e_v)):
        raise AssertionError("tableau syndrome disagrees with the linear error model")

    try:
        result = decoder.decode((s_x, s_z))
    except UndecodableError:
        ones = np.ones(code.k, dtype=np.uint8)
        return KnillReport(
            s_x, s_z, logical_xx, logical_zz, None, logical_failure=True,
            residual_logical_x=ones, residual_logical_z=ones,
        )
    apply_output_corrections(state, code, result.correction, logical_xx, logical_zz)

    residual_x = e_v ^ result.correction.x_bits ^ epr_b_x
    residual_z = e_u ^ result.correction.z_bits ^ epr_b_z
    acts_as_x = gf2.matvec(code.logical_z, residual_x) if code.k else np.zeros(0, dtype=np.uint8)
    acts_as_z = gf2.matvec(code.logical_x, residual_z) if code.k else np.zeros(0, dtype=np.uint8)
    failure = bool(acts_as_x.any() or acts_as_z.any())
    return KnillReport(
        s_x, s_z, logical_xx, logical_zz, result, logical_failure=failure,
        residual_logical_x=acts_as_x, residual_logical_z=acts_as_z,
    )
