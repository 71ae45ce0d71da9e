"""Exact Clifford-circuit simulation with a sign-tracking stabilizer tableau.

The tableau holds n destabilizer rows followed by n stabilizer rows; each
row is an (x_bits, z_bits, sign) triple. Updates follow the standard
conjugation rules, O(n^2) per measurement.
"""

from __future__ import annotations

import numpy as np

from qnetcode.pauli import PauliOperator


class StabilizerState:
    """All-zeros computational basis state on n qubits."""

    def __init__(self, num_qubits: int):
        if num_qubits < 1:
            raise ValueError("num_qubits must be >= 1")
        n = num_qubits
        self.num_qubits = n
        self.x = np.zeros((2 * n, n), dtype=np.uint8)
        self.z = np.zeros((2 * n, n), dtype=np.uint8)
        self.r = np.zeros(2 * n, dtype=np.uint8)
        self.x[np.arange(n), np.arange(n)] = 1          # destabilizers X_i
        self.z[n + np.arange(n), np.arange(n)] = 1      # stabilizers Z_i

    def _check_qubit(self, *qs: int):
        for q in qs:
            if not 0 <= q < self.num_qubits:
                raise IndexError(f"qubit {q} out of range for n={self.num_qubits}")

    # --- gates -----------------------------------------------------------

    def h(self, q: int):
        self._check_qubit(q)
        self.r ^= self.x[:, q] & self.z[:, q]
        self.x[:, q], self.z[:, q] = self.z[:, q].copy(), self.x[:, q].copy()

    def cnot(self, c: int, t: int):
        self._check_qubit(c, t)
        if c == t:
            raise ValueError("control and target must differ")
        self.r ^= self.x[:, c] & self.z[:, t] & (self.x[:, t] ^ self.z[:, c] ^ 1)
        self.x[:, t] ^= self.x[:, c]
        self.z[:, c] ^= self.z[:, t]

    def apply_pauli(self, p: PauliOperator):
        """Conjugation by a Pauli only flips signs of anticommuting rows."""
        if p.num_qubits != self.num_qubits:
            raise ValueError("Pauli length does not match state size")
        comm = (self.x @ p.z_bits.astype(np.int64) + self.z @ p.x_bits.astype(np.int64)) % 2
        self.r ^= comm.astype(np.uint8)

    def x_gate(self, q: int):
        self.apply_pauli(PauliOperator.single(self.num_qubits, q, "X"))

    def y_gate(self, q: int):
        self.apply_pauli(PauliOperator.single(self.num_qubits, q, "Y"))

    def z_gate(self, q: int):
        self.apply_pauli(PauliOperator.single(self.num_qubits, q, "Z"))

    def apply_gate(self, gate: tuple):
        """Apply ('H', q), ('CNOT', c, t), ('X'|'Y'|'Z', q)."""
        name = gate[0].upper()
        if name == "H":
            self.h(gate[1])
        elif name == "CNOT":
            self.cnot(gate[1], gate[2])
        elif name in ("X", "Y", "Z"):
            self.apply_pauli(PauliOperator.single(self.num_qubits, gate[1], name))
        else:
            raise ValueError(f"unsupported gate {gate!r}")

    # --- row arithmetic ---------------------------------------------------

    def _phase_exponent(self, x1, z1, x2, z2) -> int:
        """Sum over qubits of the i-power from multiplying (x1,z1)*(x2,z2)."""
        x1 = x1.astype(np.int64)
        z1 = z1.astype(np.int64)
        x2 = x2.astype(np.int64)
        z2 = z2.astype(np.int64)
        g = np.where(
            (x1 == 1) & (z1 == 1), z2 - x2,
            np.where(
                (x1 == 1) & (z1 == 0), z2 * (2 * x2 - 1),
                np.where((x1 == 0) & (z1 == 1), x2 * (1 - 2 * z2), 0),
            ),
        )
        return int(g.sum())

    def _rowsum_into(self, xh, zh, rh, i: int):
        """Multiply row i into the scratch row (xh, zh, rh); returns new rh."""
        total = 2 * rh + 2 * int(self.r[i]) + self._phase_exponent(self.x[i], self.z[i], xh, zh)
        xh ^= self.x[i]
        zh ^= self.z[i]
        return (total % 4) // 2

    def _rowsum(self, h: int, i: int):
        self.r[h] = self._rowsum_into(self.x[h], self.z[h], int(self.r[h]), i)

    def _rowsum_many(self, rows: np.ndarray, i: int):
        """Multiply row i into every row in ``rows`` at once."""
        x1 = self.x[i].astype(np.int64)[None, :]
        z1 = self.z[i].astype(np.int64)[None, :]
        x2 = self.x[rows].astype(np.int64)
        z2 = self.z[rows].astype(np.int64)
        g = np.where(
            (x1 == 1) & (z1 == 1), z2 - x2,
            np.where(
                (x1 == 1) & (z1 == 0), z2 * (2 * x2 - 1),
                np.where((x1 == 0) & (z1 == 1), x2 * (1 - 2 * z2), 0),
            ),
        ).sum(axis=1)
        total = 2 * self.r[rows].astype(np.int64) + 2 * int(self.r[i]) + g
        self.r[rows] = ((total % 4) // 2).astype(np.uint8)
        self.x[rows] ^= self.x[i]
        self.z[rows] ^= self.z[i]

    # --- measurement ------------------------------------------------------

    def measure_pauli(self, p: PauliOperator, rng: np.random.Generator) -> int:
        """Measure the Hermitian Pauli +p; returns the outcome bit.

        Outcome 0 projects onto the +1 eigenspace. Deterministic when
        +/-p is in the stabilizer group, else uniformly random with a
        tableau update.
        """
        if p.num_qubits != self.num_qubits:
            raise ValueError("Pauli length does not match state size")
        n = self.num_qubits
        comm = (
            (self.x @ p.z_bits.astype(np.int64) + self.z @ p.x_bits.astype(np.int64)) % 2
        ).astype(np.uint8)
        anti_stab = np.nonzero(comm[n:])[0]
        if anti_stab.size:
            piv = n + int(anti_stab[0])
            others = np.nonzero(comm)[0]
            others = others[others != piv]
            if others.size:
                self._rowsum_many(others, piv)
            outcome = int(rng.integers(2))
            self.x[piv - n] = self.x[piv]
            self.z[piv - n] = self.z[piv]
            self.r[piv - n] = self.r[piv]
            self.x[piv] = p.x_bits
            self.z[piv] = p.z_bits
            self.r[piv] = outcome
            return outcome
        # deterministic: accumulate the stabilizer product equal to +/-p
        xh = np.zeros(n, dtype=np.uint8)
        zh = np.zeros(n, dtype=np.uint8)
        rh = 0
        for i in np.nonzero(comm[:n])[0]:
            rh = self._rowsum_into(xh, zh, rh, n + int(i))
        return rh

    def measure_z(self, q: int, rng: np.random.Generator) -> int:
        self._check_qubit(q)
        return self.measure_pauli(PauliOperator.single(self.num_qubits, q, "Z"), rng)

    def measure_x(self, q: int, rng: np.random.Generator) -> int:
        self._check_qubit(q)
        return self.measure_pauli(PauliOperator.single(self.num_qubits, q, "X"), rng)

    def bell_measure(self, q1: int, q2: int, rng: np.random.Generator) -> tuple[int, int]:
        """Joint XX/ZZ measurement of (q1, q2) via CNOT, H, two Z reads.

        Returns (xx_bit, zz_bit); both qubits end in computational basis
        states (consumed).
        """
        self._check_qubit(q1, q2)
        if q1 == q2:
            raise ValueError("Bell measurement needs two distinct qubits")
        self.cnot(q1, q2)
        self.h(q1)
        xx = self.measure_z(q1, rng)
        zz = self.measure_z(q2, rng)
        return xx, zz

    def expectation(self, p: PauliOperator) -> int:
        """+1/-1 if +/-p stabilizes the state, 0 if the outcome is random."""
        n = self.num_qubits
        comm = (
            (self.x @ p.z_bits.astype(np.int64) + self.z @ p.x_bits.astype(np.int64)) % 2
        ).astype(np.uint8)
        if comm[n:].any():
            return 0
        xh = np.zeros(n, dtype=np.uint8)
        zh = np.zeros(n, dtype=np.uint8)
        rh = 0
        for i in np.nonzero(comm[:n])[0]:
            rh = self._rowsum_into(xh, zh, rh, n + int(i))
        if not (np.array_equal(xh, p.x_bits) and np.array_equal(zh, p.z_bits)):
            raise AssertionError("destabilizer bookkeeping out of sync")
        return 1 if rh == 0 else -1

    def tableau_ok(self) -> bool:
        """Debug invariant: full rank and canonical commutation structure."""
        n = self.num_qubits
        sym = (
            self.x.astype(np.int64) @ self.z.astype(np.int64).T
            + self.z.astype(np.int64) @ self.x.astype(np.int64).T
        ) % 2
        want = np.zeros((2 * n, 2 * n), dtype=np.int64)
        want[:n, n:] = np.eye(n, dtype=np.int64)
        want[n:, :n] = np.eye(n, dtype=np.int64)
        return bool(np.array_equal(sym, want))


def new_state(n: int) -> StabilizerState:
    return StabilizerState(n)


def prepare_bell(state: StabilizerState, q1: int, q2: int):
    """Turn |00> on (q1, q2) into the +XX/+ZZ Bell pair."""
    state.h(q1)
    state.cnot(q1, q2)
