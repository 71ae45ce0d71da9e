"""LOCC protocols: teleportation, superdense coding, entanglement swapping,
and recurrence-style entanglement purification.

Pauli-correction conventions are fixed once by the noiseless identity
tests and pinned in the test fixtures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from qnetcode.noise import BellDiagonalState, LABEL_XZ, NoiseModel, sample_error
from qnetcode.pauli import PauliOperator
from qnetcode.stabsim import StabilizerState, prepare_bell

Gate = tuple


@dataclass
class ProtocolOutcome:
    """Classical record of one protocol run."""

    classical_bits: list[tuple[int, int]]
    residual_frame: Optional[PauliOperator] = None
    success: Optional[bool] = None
    verified: Optional[bool] = None


def _apply_prep(state: StabilizerState, prep: Sequence[Gate], qubit: int):
    """Run a 1-qubit Clifford prep circuit, remapped onto ``qubit``."""
    for gate in prep:
        name = gate[0].upper()
        if name not in ("H", "X", "Y", "Z") or any(q != 0 for q in gate[1:]):
            raise ValueError(f"prep circuit must act on qubit 0 with 1-qubit gates, got {gate!r}")
        state.apply_gate((name, qubit))


def _unapply_prep(state: StabilizerState, prep: Sequence[Gate], qubit: int):
    # H and Paulis are involutions, so the inverse is the reversed list
    for gate in reversed(prep):
        state.apply_gate((gate[0].upper(), qubit))


def teleport(
    input_prep: Sequence[Gate],
    epr_noise: NoiseModel,
    rng: np.random.Generator,
) -> ProtocolOutcome:
    """Teleport the state prepared by ``input_prep`` through a (noisy) EPR pair.

    Qubit 0 is the payload, qubit 1 Alice's EPR half, qubit 2 Bob's.
    Bob applies X^zz then Z^xx. Verification un-prepares Bob's qubit and
    checks it is exactly |0>.
    """
    state = StabilizerState(3)
    prepare_bell(state, 1, 2)
    epr_error = sample_error(epr_noise, 2, rng)
    state.apply_pauli(
        PauliOperator(
            3,
            np.concatenate([[0], epr_error.x_bits]),
            np.concatenate([[0], epr_error.z_bits]),
        )
    )
    _apply_prep(state, input_prep, 0)
    xx, zz = state.bell_measure(0, 1, rng)
    if zz:
        state.x_gate(2)
    if xx:
        state.z_gate(2)
    # injected EPR errors commute through to a fixed frame on the output
    residual = PauliOperator(
        1,
        [epr_error.x_bits[0] ^ epr_error.x_bits[1]],
        [epr_error.z_bits[0] ^ epr_error.z_bits[1]],
    )
    _unapply_prep(state, input_prep, 2)
    z_out = PauliOperator.single(3, 2, "Z")
    verified = state.expectation(z_out) == 1
    return ProtocolOutcome(classical_bits=[(xx, zz)], residual_frame=residual, verified=verified)


def superdense(
    bits: tuple[int, int],
    channel_noise: NoiseModel,
    rng: np.random.Generator,
) -> tuple[int, int]:
    """Send two classical bits over one qubit plus a shared EPR pair.

    Alice applies Z^a X^b to her half; Bob decodes (a', b') from the
    (XX, ZZ) Bell outcomes.
    """
    a, b = bits
    state = StabilizerState(2)
    prepare_bell(state, 0, 1)
    if b:
        state.x_gate(0)
    if a:
        state.z_gate(0)
    err = sample_error(channel_noise, 1, rng)
    state.apply_pauli(PauliOperator(2, np.concatenate([err.x_bits, [0]]), np.concatenate([err.z_bits, [0]])))
    xx, zz = state.bell_measure(0, 1, rng)
    return xx, zz


def swap_chain(
    num_links: int,
    link_noise: NoiseModel,
    rng: np.random.Generator,
) -> ProtocolOutcome:
    """Fuse m noisy link pairs into one end-to-end pair via m-1 swaps.

    Returns the swap outcome record plus the end pair's measured error
    frame from a final verification Bell measurement.
    """
    if num_links < 1:
        raise ValueError("num_links must be >= 1")
    m = num_links
    state = StabilizerState(2 * m)
    for i in range(m):
        prepare_bell(state, 2 * i, 2 * i + 1)
        err = sample_error(link_noise, 2, rng)
        x = np.zeros(2 * m, dtype=np.uint8)
        z = np.zeros(2 * m, dtype=np.uint8)
        x[2 * i : 2 * i + 2] = err.x_bits
        z[2 * i : 2 * i + 2] = err.z_bits
        state.apply_pauli(PauliOperator(2 * m, x, z))
    outcomes = []
    frame_x = frame_z = 0
    for j in range(1, m):
        xx, zz = state.bell_measure(2 * j - 1, 2 * j, rng)
        outcomes.append((xx, zz))
        frame_x ^= zz
        frame_z ^= xx
    if frame_x:
        state.x_gate(2 * m - 1)
    if frame_z:
        state.z_gate(2 * m - 1)
    fx, fz = state.bell_measure(0, 2 * m - 1, rng)
    outcomes.append((fx, fz))
    residual = PauliOperator(1, [fz], [fx])
    return ProtocolOutcome(classical_bits=outcomes, residual_frame=residual)


_BASES = ("bitflip", "phaseflip")


def purify_pair_dist(
    a: BellDiagonalState,
    b: BellDiagonalState,
    basis: str = "bitflip",
) -> tuple[float, BellDiagonalState]:
    """One exact recurrence round: bilateral CNOT from pair a onto pair b,
    measure pair b, keep pair a iff the two outcome bits agree.

    Enumerates all 16 joint error labels. In bitflip mode agreement means
    equal X components and the kept pair's Z components combine; the
    phaseflip mode is the H-conjugate.
    """
    if basis not in _BASES:
        raise ValueError(f"basis must be one of {_BASES}")
    out = np.zeros(4, dtype=np.float64)
    success = 0.0
    label_of = {xz: i for i, xz in enumerate(LABEL_XZ)}
    for ia, (xa, za) in enumerate(LABEL_XZ):
        pa = a.probs[ia]
        for ib, (xb, zb) in enumerate(LABEL_XZ):
            p = pa * b.probs[ib]
            if basis == "bitflip":
                keep = (xa ^ xb) == 0
                kept = (xa, za ^ zb)
            else:
                keep = (za ^ zb) == 0
                kept = (xa ^ xb, za)
            if keep:
                success += p
                out[label_of[kept]] += p
    if success <= 0.0:
        return 0.0, BellDiagonalState(np.array([1.0, 0.0, 0.0, 0.0]))
    return float(success), BellDiagonalState(out / success)


def purify_pair_sampled(
    a: BellDiagonalState,
    b: BellDiagonalState,
    basis: str,
    rng: np.random.Generator,
) -> ProtocolOutcome:
    """Monte Carlo twin of purify_pair_dist, executed on the tableau simulator.

    residual_frame carries the kept pair's measured error label when the
    round succeeds (pair a is consumed by the final readout).
    """
    if basis not in _BASES:
        raise ValueError(f"basis must be one of {_BASES}")
    state = StabilizerState(4)
    prepare_bell(state, 0, 1)  # pair a: (A1, B1)
    prepare_bell(state, 2, 3)  # pair b: (A2, B2)
    for qubit, pair_state in ((0, a), (2, b)):
        xa, za = LABEL_XZ[pair_state.sample_label(rng)]
        x = np.zeros(4, dtype=np.uint8)
        z = np.zeros(4, dtype=np.uint8)
        x[qubit], z[qubit] = xa, za
        state.apply_pauli(PauliOperator(4, x, z))
    if basis == "phaseflip":
        for q in range(4):
            state.h(q)
    state.cnot(0, 2)
    state.cnot(1, 3)
    m_a = state.measure_z(2, rng)
    m_b = state.measure_z(3, rng)
    success = m_a == m_b
    residual = None
    if success:
        if basis == "phaseflip":
            state.h(0)
            state.h(1)
        xx, zz = state.bell_measure(0, 1, rng)
        residual = PauliOperator(1, [zz], [xx])
    return ProtocolOutcome(classical_bits=[(m_a, m_b)], residual_frame=residual, success=success)
