"""Two-mode beam splitter acting on the single-excitation sector.

Basis order is |00>, |01>, |10>, |11> with the first label the input mode and
the second the vacuum port.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from nonclassical.state import QubitState


@dataclass(frozen=True)
class BsParams:
    """Interaction time ``t`` of exp(-i H t), H = (a^dag b + a b^dag)/2."""

    t: float = math.pi / 2

    @property
    def transmittance(self) -> float:
        return math.cos(self.t / 2) ** 2

    @property
    def reflectance(self) -> float:
        return math.sin(self.t / 2) ** 2


BALANCED = BsParams(math.pi / 2)


def bs_unitary(params: BsParams = BALANCED) -> np.ndarray:
    c = math.cos(params.t / 2)
    s = math.sin(params.t / 2)
    u = np.eye(4, dtype=complex)
    u[1, 1] = u[2, 2] = c
    u[1, 2] = u[2, 1] = -1j * s
    return u


def _embed(p, x):
    """rho (x) |0><0| for arrays of p and x, shape (..., 4, 4)."""
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=complex)
    out = np.zeros(p.shape + (4, 4), dtype=complex)
    out[..., 0, 0] = 1.0 - p
    out[..., 0, 2] = x
    out[..., 2, 0] = np.conj(x)
    out[..., 2, 2] = p
    return out


def bs_output_many(p, x, params: BsParams = BALANCED) -> np.ndarray:
    """Stack of output states U (rho (x) |0><0|) U^dag for arrays of inputs."""
    u = bs_unitary(params)
    return u @ _embed(p, x) @ u.conj().T


def bs_output(state: QubitState, params: BsParams = BALANCED) -> np.ndarray:
    """Two-mode state after mixing ``state`` with vacuum on the splitter."""
    return bs_output_many(state.p, state.x, params)


def bs_output_pure(p: float) -> np.ndarray:
    """Output amplitudes (c00, c01, c10, c11) for the pure input sqrt(1-p)|0> + sqrt(p)|1>."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    h = math.sqrt(p / 2)
    return np.array([math.sqrt(1.0 - p), -1j * h, h, 0.0], dtype=complex)


def is_two_qubit_state(rho, atol: float = 1e-12) -> bool:
    """Hermitian, unit trace, and no eigenvalue below -atol."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        return False
    if not np.allclose(rho, rho.conj().T, atol=atol):
        return False
    if abs(np.trace(rho) - 1.0) > atol:
        return False
    return bool(np.linalg.eigvalsh(rho).min() >= -atol)
