"""Pauli error models, Bell-diagonal pair states, and effective-rate arithmetic."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qnetcode.pauli import PauliOperator

_VARIANTS = ("none", "bit_flip", "phase_flip", "depolarizing", "independent_xz")

SIMPLEX_TOL = 1e-12


def _check_prob(p: float, name: str = "probability"):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {p}")


@dataclass(frozen=True)
class NoiseModel:
    """Per-qubit i.i.d. Pauli error channel.

    Variants: none; bit_flip(p); phase_flip(p); depolarizing(p) with p/3
    on each of X, Y, Z; independent_xz(p_x, p_z).
    """

    variant: str
    p: float = 0.0
    p_z: float = 0.0

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ValueError(f"unknown noise variant {self.variant!r}")
        _check_prob(self.p)
        _check_prob(self.p_z)

    @classmethod
    def none(cls) -> "NoiseModel":
        return cls("none")

    @classmethod
    def bit_flip(cls, p: float) -> "NoiseModel":
        return cls("bit_flip", p)

    @classmethod
    def phase_flip(cls, p: float) -> "NoiseModel":
        return cls("phase_flip", p)

    @classmethod
    def depolarizing(cls, p: float) -> "NoiseModel":
        return cls("depolarizing", p)

    @classmethod
    def independent_xz(cls, p_x: float, p_z: float) -> "NoiseModel":
        return cls("independent_xz", p_x, p_z)

    @classmethod
    def from_spec(cls, spec: str) -> "NoiseModel":
        """Parse config strings like ``depolarizing:0.055``,
        ``independent_xz:0.01,0.01``, or ``none``."""
        name, _, args = spec.partition(":")
        name = name.strip()
        if name == "none":
            return cls.none()
        vals = [float(v) for v in args.split(",")] if args else []
        if name in ("bit_flip", "phase_flip", "depolarizing"):
            if len(vals) != 1:
                raise ValueError(f"{name} takes one probability, got {spec!r}")
            return cls(name, vals[0])
        if name == "independent_xz":
            if len(vals) != 2:
                raise ValueError(f"independent_xz takes two probabilities, got {spec!r}")
            return cls(name, vals[0], vals[1])
        raise ValueError(f"unknown noise spec {spec!r}")

    def to_spec(self) -> str:
        if self.variant == "none":
            return "none"
        if self.variant == "independent_xz":
            return f"independent_xz:{self.p},{self.p_z}"
        return f"{self.variant}:{self.p}"

    def flip_probability(self) -> float:
        """Marginal probability that the X component is set on a qubit.

        Used for classical bit/measurement flips driven by this model.
        """
        if self.variant in ("none", "phase_flip"):
            return 0.0
        if self.variant == "depolarizing":
            return 2.0 * self.p / 3.0
        return self.p  # bit_flip, independent_xz


def sample_error(model: NoiseModel, n: int, rng: np.random.Generator) -> PauliOperator:
    """Draw an n-qubit Pauli with independent per-qubit errors."""
    if n < 1:
        raise ValueError("n must be >= 1")
    x = np.zeros(n, dtype=np.uint8)
    z = np.zeros(n, dtype=np.uint8)
    if model.variant == "none":
        pass
    elif model.variant == "bit_flip":
        x = (rng.random(n) < model.p).astype(np.uint8)
    elif model.variant == "phase_flip":
        z = (rng.random(n) < model.p).astype(np.uint8)
    elif model.variant == "independent_xz":
        x = (rng.random(n) < model.p).astype(np.uint8)
        z = (rng.random(n) < model.p_z).astype(np.uint8)
    else:  # depolarizing
        u = rng.random(n)
        third = model.p / 3.0
        x = (u < 2 * third).astype(np.uint8)
        z = ((u >= third) & (u < 3 * third)).astype(np.uint8)
    return PauliOperator(n, x, z)


def effective_error_rate(p_c: float, p_g: float) -> float:
    """First-order effective data error rate p_c + 5 p_g, clamped at 1.

    Five fault locations feed each Bell-measurement outcome bit (two
    ancilla preparations, two CNOTs, one measurement) on top of the EPR
    communication error.
    """
    _check_prob(p_c, "p_c")
    _check_prob(p_g, "p_g")
    return min(p_c + 5.0 * p_g, 1.0)


# Bell-diagonal label order: I, X, Y, Z. Label l means the pair state
# (sigma_l x I)|Phi+>; fidelity is the I probability.
LABELS = ("I", "X", "Y", "Z")
LABEL_XZ = ((0, 0), (1, 0), (1, 1), (0, 1))


@dataclass(frozen=True)
class BellDiagonalState:
    """Probability vector over {I, X, Y, Z} error labels of an EPR pair."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if p.shape != (4,):
            raise ValueError("probs must have exactly 4 entries")
        if (p < -SIMPLEX_TOL).any() or abs(p.sum() - 1.0) > SIMPLEX_TOL:
            raise ValueError(f"probs is not a simplex vector: {p}")
        p = np.clip(p, 0.0, None)
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    @classmethod
    def perfect(cls) -> "BellDiagonalState":
        return cls(np.array([1.0, 0.0, 0.0, 0.0]))

    @property
    def fidelity(self) -> float:
        return float(self.probs[0])

    def sample_label(self, rng: np.random.Generator) -> int:
        """Index into LABELS, drawn from the label distribution."""
        return int(rng.choice(4, p=self.probs / self.probs.sum()))


def werner(F: float) -> BellDiagonalState:
    """Werner pair: the non-identity labels share (1-F)/3 each."""
    _check_prob(F, "fidelity")
    r = (1.0 - F) / 3.0
    return BellDiagonalState(np.array([F, r, r, r]))
