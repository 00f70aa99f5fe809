"""Single-qubit states spanned by the vacuum and the single-photon Fock state.

A state is stored through its two free parameters::

    rho(p, x) = [[1 - p, x      ],
                 [conj(x), p    ]]

with ``p = <1|rho|1>`` and ``x = <0|rho|1>``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

PSD_SLACK = 1e-12
DEFAULT_PLUS_EPS = 1e-6


class InvalidStateError(ValueError):
    """Parameters do not describe a physical single-qubit density matrix."""


@dataclass(frozen=True)
class QubitState:
    """Density matrix of a qubit in the {|0>, |1>} Fock basis.

    Construction validates positivity: ``|x|**2 <= p (1 - p)``. Coherences that
    overshoot the bound by less than ``PSD_SLACK`` are pulled back onto it
    (phase kept), anything beyond raises :class:`InvalidStateError`.
    """

    p: float
    x: complex = 0j

    def __post_init__(self):
        p = float(self.p)
        x = complex(self.x)
        if not (math.isfinite(p) and cmath.isfinite(x)):
            raise InvalidStateError(f"non-finite state parameters p={p!r}, x={x!r}")
        if not 0.0 <= p <= 1.0:
            raise InvalidStateError(f"population p={p} outside [0, 1]")
        bound = p * (1.0 - p)
        ax2 = abs(x) ** 2
        if ax2 > bound + PSD_SLACK:
            raise InvalidStateError(
                f"|x|^2={ax2:.6g} exceeds p(1-p)={bound:.6g}: matrix is not positive semidefinite"
            )
        if ax2 > bound:
            x = cmath.rect(math.sqrt(bound), cmath.phase(x)) if x else 0j
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "x", x)

    @property
    def abs_x(self) -> float:
        return abs(self.x)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[1.0 - self.p, self.x], [self.x.conjugate(), self.p]], dtype=complex)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def with_phase(self, phase: float) -> "QubitState":
        """Same populations, coherence rotated to ``|x| e^{i phase}``."""
        return QubitState(self.p, cmath.rect(self.abs_x, phase))

    def __str__(self):
        return f"rho(p={self.p:.6g}, x={self.x:.6g})"


def make_state(p: float, x: complex = 0j) -> QubitState:
    return QubitState(p, x)


VACUUM = QubitState(0.0, 0j)
SINGLE_PHOTON = QubitState(1.0, 0j)


def purity(s: QubitState) -> float:
    """Tr rho^2 = (1-p)^2 + p^2 + 2|x|^2, in [1/2, 1]."""
    return (1.0 - s.p) ** 2 + s.p**2 + 2.0 * s.abs_x**2


# -- named families -----------------------------------------------------------


@dataclass(frozen=True)
class Pure:
    """sqrt(1-p)|0> + sqrt(p)|1>."""

    p: float


@dataclass(frozen=True)
class Mixed:
    """(1-p)|0><0| + p|1><1|."""

    p: float


@dataclass(frozen=True)
class Opt:
    """The state maximising the negativity potential at fixed depth ``tau``."""

    tau: float


@dataclass(frozen=True)
class Plus:
    """Finite-``eps`` member of the family whose depth tends to ``tau0`` as eps -> 0+."""

    tau0: float
    eps: float = DEFAULT_PLUS_EPS


@dataclass(frozen=True)
class General:
    p: float
    x: complex = 0j


StateFamily = Pure | Mixed | Opt | Plus | General


def plus_coherence(tau0: float, eps: float) -> float:
    """x0(eps) = sqrt((1 + eps - eps/tau0) eps (1 - eps)).

    The state rho(eps, x0) has distance eps and depth
    1 / (1/tau0 - (1/tau0 - 1) eps), which tends to ``tau0`` as ``eps -> 0``.
    """
    if not 0.0 < tau0 <= 1.0:
        raise InvalidStateError(f"tau0={tau0} outside (0, 1]")
    if not 0.0 < eps <= 1.0:
        raise InvalidStateError(f"eps={eps} outside (0, 1]")
    radicand = (1.0 + eps - eps / tau0) * eps * (1.0 - eps)
    if radicand < -PSD_SLACK:
        raise InvalidStateError(
            f"eps={eps} too large for tau0={tau0}: x0^2={radicand:.3g} is negative"
        )
    return math.sqrt(max(radicand, 0.0))


def family_state(f: StateFamily) -> QubitState:
    if isinstance(f, Pure):
        return QubitState(f.p, math.sqrt(f.p * (1.0 - f.p)))
    if isinstance(f, Mixed):
        return QubitState(f.p, 0j)
    if isinstance(f, Plus):
        return QubitState(f.eps, plus_coherence(f.tau0, f.eps))
    if isinstance(f, General):
        return QubitState(f.p, f.x)
    if isinstance(f, Opt):
        from nonclassical.boundary import optimal_state

        return optimal_state(f.tau)
    raise TypeError(f"unknown state family {f!r}")


def from_measures_d_tau(D: float, tau: float) -> QubitState:
    """Invert (distance, depth) -> state with real nonnegative coherence.

    Uses D = p and tau = p^2/(p - x^2), so x = sqrt(D - D^2/tau).
    """
    if not 0.0 < tau <= 1.0:
        raise InvalidStateError(f"depth tau={tau} outside (0, 1]")
    if not 0.0 <= D <= tau + PSD_SLACK:
        raise InvalidStateError(f"no state with D={D} and tau={tau}; need 0 <= D <= tau")
    D = min(D, tau)
    return QubitState(D, math.sqrt(max(D - D * D / tau, 0.0)))


# -- measure bundle ------------------------------------------------------------


@dataclass(frozen=True)
class MeasureReport:
    state: QubitState
    tau: float
    distance: float
    concurrence_potential: float
    negativity_potential: float
    cross_check_residuals: dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "p": self.state.p,
            "x_re": self.state.x.real,
            "x_im": self.state.x.imag,
            "tau": self.tau,
            "distance": self.distance,
            "concurrence_potential": self.concurrence_potential,
            "negativity_potential": self.negativity_potential,
            "cross_check_residuals": dict(self.cross_check_residuals),
        }
