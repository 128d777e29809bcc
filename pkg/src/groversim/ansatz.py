"""Product initial states from one parameterized single-qubit gate.

U(alpha, beta, theta) applied to every qubit of |0...0> prepares a
product state whose coherence fraction has a closed form; two slices of
that closed form (theta = pi/4 over the phases, zero phases over theta)
give the idealized optimal success probability for a single marked item,
since for r = 1 the optimum equals the coherence fraction itself.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .states import MAX_QUBITS, PureState, SingleQubitGate

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class LocalGateParams:
    """Phases alpha, beta (any reals) and mixing angle theta in [0, pi/2]."""

    alpha: float
    beta: float
    theta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "theta", float(self.theta))
        if not 0.0 <= self.theta <= math.pi / 2.0:
            raise ValueError(f"mixing angle must lie in [0, pi/2], got {self.theta!r}")

    def phases_mod_2pi(self) -> tuple[float, float]:
        """Phases folded into [0, 2pi), for reporting; computations use the raw values."""
        return (self.alpha % _TWO_PI, self.beta % _TWO_PI)


def build_gate(p: LocalGateParams) -> SingleQubitGate:
    """The 2x2 unitary [[e^{ia} cos t, e^{-ib} sin t], [e^{ib} sin t, -e^{-ia} cos t]].

    (0, 0, pi/4) is the Hadamard gate; (0, 0, 0) is diag(1, -1).
    """
    ea = cmath.exp(1j * p.alpha)
    eb = cmath.exp(1j * p.beta)
    c = math.cos(p.theta)
    s = math.sin(p.theta)
    return SingleQubitGate(
        np.array(
            [[ea * c, eb.conjugate() * s], [eb * s, -ea.conjugate() * c]],
            dtype=np.complex128,
        )
    )


def prepare_ansatz_state(n: int, p: LocalGateParams) -> PureState:
    """The product state U(p)^{x n} |0...0>, built from the closed form.

    The amplitude on basis label j is (e^{ia} cos t)^{z_j} (e^{ib} sin t)^{n-z_j}
    with z_j the number of zero bits in j; the circuit route through
    apply_product_unitary reproduces this to round-off.
    """
    if not isinstance(n, int) or not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be an int in [1, {MAX_QUBITS}], got {n!r}")
    zero_amp = cmath.exp(1j * p.alpha) * math.cos(p.theta)
    one_amp = cmath.exp(1j * p.beta) * math.sin(p.theta)
    zero_pows = np.array([zero_amp**k for k in range(n + 1)], dtype=np.complex128)
    one_pows = np.array([one_amp**k for k in range(n + 1)], dtype=np.complex128)
    labels = np.arange(2**n, dtype=np.uint32)
    ones = np.array([int(j).bit_count() for j in labels], dtype=np.intp)
    amps = zero_pows[n - ones] * one_pows[ones]
    return PureState(n, amps)


def ansatz_coherence_fraction(n: int, p: LocalGateParams) -> float:
    """f_c of the ansatz state: |(e^{ia} cos t + e^{ib} sin t)^n|^2 / 2^n."""
    if not isinstance(n, int) or not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be an int in [1, {MAX_QUBITS}], got {n!r}")
    base = cmath.exp(1j * p.alpha) * math.cos(p.theta) + cmath.exp(1j * p.beta) * math.sin(p.theta)
    return abs(base**n) ** 2 / 2**n


def optimal_success_vs_phases(n: int, alpha: float, beta: float) -> float:
    """Idealized optimal success for one marked item at theta = pi/4.

    Equals |(e^{ia} + e^{ib})^n|^2 / 4^n; reaches 1 exactly when the
    phases agree mod 2pi and 0 when they differ by pi.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"qubit count must be a positive int, got {n!r}")
    return abs((cmath.exp(1j * alpha) + cmath.exp(1j * beta)) ** n) ** 2 / 4**n


def optimal_success_vs_mixing(n: int, theta: float) -> float:
    """Idealized optimal success for one marked item at zero phases.

    Equals (cos t + sin t)^{2n} / 2^n; maximized at theta = pi/4 where it
    is exactly 1, and 2^{-n} at both endpoints of [0, pi/2].
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"qubit count must be a positive int, got {n!r}")
    if not 0.0 <= theta <= math.pi / 2.0:
        raise ValueError(f"mixing angle must lie in [0, pi/2], got {theta!r}")
    return (math.cos(theta) + math.sin(theta)) ** (2 * n) / 2**n
