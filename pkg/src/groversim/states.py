"""Dense state-vector primitives: pure states, one-qubit gates, ensembles.

Basis labels are read with qubit 0 as the most significant bit, so for
n = 2 the label 2 = 0b10 means qubit 0 in |1> and qubit 1 in |0>.
Amplitudes are complex128. Objects are immutable after construction and
every operation returns a new object; nothing mutates in place.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

MAX_QUBITS = 20
NORM_ATOL = 1e-10


def _frozen_complex(values: np.ndarray | Sequence[complex]) -> np.ndarray:
    out = np.array(values, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over the 2**n computational basis states.

    Raises ValueError if the squared amplitudes do not sum to 1 within
    1e-10; no silent re-normalization is applied.
    """

    n: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"qubit count must be an int in [1, {MAX_QUBITS}], got {self.n!r}")
        amps = _frozen_complex(self.amplitudes)
        if amps.shape != (2**self.n,):
            raise ValueError(f"expected {2**self.n} amplitudes for n={self.n}, got shape {amps.shape}")
        norm_sq = float(np.real(np.vdot(amps, amps)))
        if abs(norm_sq - 1.0) > NORM_ATOL:
            raise ValueError(f"state is not normalized: sum |a_x|^2 = {norm_sq!r}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dimension(self) -> int:
        return self.amplitudes.shape[0]


@dataclass(frozen=True, eq=False)
class SingleQubitGate:
    """A 2x2 unitary, checked entrywise to 1e-10 at construction."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = _frozen_complex(self.matrix)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        defect = np.abs(m @ m.conj().T - np.eye(2)).max()
        if defect > NORM_ATOL:
            raise ValueError(f"matrix is not unitary: max |U U+ - I| = {defect:.3e}")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class StateMixture:
    """Finite ensemble of pure states with weights summing to 1.

    components is a sequence of (weight, state) pairs; all states must
    share the same qubit count and every weight lies in (0, 1].
    """

    components: tuple[tuple[float, PureState], ...]

    def __post_init__(self) -> None:
        comps = tuple((float(w), s) for w, s in self.components)
        if not comps:
            raise ValueError("a mixture needs at least one component")
        for w, s in comps:
            if not isinstance(s, PureState):
                raise ValueError(f"mixture component is not a PureState: {s!r}")
            if not 0.0 < w <= 1.0:
                raise ValueError(f"weight {w!r} outside (0, 1]")
        if len({s.n for _, s in comps}) != 1:
            raise ValueError("all mixture components must have the same qubit count")
        total = math.fsum(w for w, _ in comps)
        if abs(total - 1.0) > NORM_ATOL:
            raise ValueError(f"weights sum to {total!r}, expected 1")
        object.__setattr__(self, "components", comps)

    @property
    def n(self) -> int:
        return self.components[0][1].n

    @property
    def dimension(self) -> int:
        return 2**self.n


def basis_state(n: int, index: int = 0) -> PureState:
    """The computational basis state |index> on n qubits."""
    if not isinstance(n, int) or not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be an int in [1, {MAX_QUBITS}], got {n!r}")
    if not 0 <= index < 2**n:
        raise ValueError(f"basis index {index} out of range for n={n}")
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[index] = 1.0
    return PureState(n, amps)


def equal_superposition(n: int) -> PureState:
    """The uniform superposition |eta> with every amplitude 1/sqrt(2**n)."""
    if not isinstance(n, int) or not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be an int in [1, {MAX_QUBITS}], got {n!r}")
    dim = 2**n
    return PureState(n, np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128))


def apply_product_unitary(state: PureState, gate: SingleQubitGate) -> PureState:
    """Apply the same one-qubit gate to every qubit (the product U^{x n})."""
    v = state.amplitudes.reshape((2,) * state.n)
    m = gate.matrix
    for axis in range(state.n):
        v = np.moveaxis(np.tensordot(m, v, axes=([1], [axis])), 0, axis)
    return PureState(state.n, v.reshape(-1))


def fidelity_with(state: PureState, reference: PureState) -> float:
    """|<reference|state>|^2; both states must share a dimension."""
    if state.dimension != reference.dimension:
        raise ValueError(
            f"dimension mismatch: {state.dimension} vs {reference.dimension}"
        )
    return float(abs(np.vdot(reference.amplitudes, state.amplitudes)) ** 2)


def success_mass(state: PureState, marked) -> float:
    """Total probability carried by the marked basis indices.

    `marked` is anything with an `indices` attribute or a plain sequence
    of ints. Out-of-range indices raise ValueError.
    """
    idx = np.asarray(getattr(marked, "indices", marked), dtype=np.intp)
    if idx.size == 0:
        return 0.0
    if idx.min() < 0 or idx.max() >= state.dimension:
        raise ValueError(f"marked index out of range for dimension {state.dimension}")
    picked = state.amplitudes[idx]
    return float(np.real(np.vdot(picked, picked)))
