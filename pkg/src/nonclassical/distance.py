"""Fidelity, Bures distance and the nonclassical distance of a qubit.

Within span{|0>, |1>} the vacuum is the only classical state, so the distance
needs no minimisation over reference states.
"""

from __future__ import annotations

import math

import numpy as np

from nonclassical.state import VACUUM, QubitState, purity


def fidelity_qubit(a: QubitState, b: QubitState) -> float:
    """F = Tr(rho sigma) + sqrt((1 - Tr rho^2)(1 - Tr sigma^2)), valid for qubits."""
    overlap = float(np.real(np.trace(a.matrix @ b.matrix)))
    mixedness = max(0.0, 1.0 - purity(a)) * max(0.0, 1.0 - purity(b))
    return min(1.0, max(0.0, overlap + math.sqrt(mixedness)))


def bures_distance_sq(a: QubitState, b: QubitState) -> float:
    return 2.0 * (1.0 - math.sqrt(fidelity_qubit(a, b)))


def nonclassical_distance(state: QubitState) -> float:
    """D = 1 - F(rho, |0><0|), which equals p for every state."""
    return 1.0 - fidelity_qubit(state, VACUUM)


def half_bures_sq_to_vacuum(state: QubitState) -> float:
    """1 - sqrt(F(rho, |0><0|)) = 1 - sqrt(1 - p).

    Diagnostic only. This is half the squared Bures distance to the vacuum and
    does *not* equal :func:`nonclassical_distance`.
    """
    return 0.5 * bures_distance_sq(state, VACUUM)
