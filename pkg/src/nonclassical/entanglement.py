"""Two-qubit negativity and concurrence, and the entanglement potentials built on them.

The potentials of a single-qubit state are the negativity (NP) and the
concurrence (CP) of its balanced beam-splitter output. Negativity has three
independent routes: the partial-transpose spectrum, a quartic in the moments
of the partial transpose, and a closed form in (p, |x|).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from nonclassical.beamsplitter import BALANCED, bs_output, bs_output_many
from nonclassical.state import QubitState

log = logging.getLogger(__name__)

CLAMP = 1e-10
ROOT_WINDOW = 1e-9
MOMENT_DPS = 50

SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]])
_YY = np.kron(SIGMA_Y, SIGMA_Y)


class NumericFailure(ArithmeticError):
    """A numeric route produced no admissible answer (not a physics condition)."""


def _clamp_unit(v: float) -> float:
    if -CLAMP < v < 0.0:
        return 0.0
    return v


@dataclass(frozen=True)
class NegativityResult:
    value: float
    method: str
    min_eigenvalue: float | None = None
    pi2: float | None = None
    pi3: float | None = None


@dataclass(frozen=True)
class ConcurrenceResult:
    value: float
    lambdas: tuple[float, float, float, float]


def partial_transpose(rho) -> np.ndarray:
    """Transpose on the second qubit; accepts stacks of shape (..., 4, 4)."""
    rho = np.asarray(rho)
    lead = rho.shape[:-2]
    t = rho.reshape(lead + (2, 2, 2, 2))
    return np.swapaxes(t, -3, -1).reshape(lead + (4, 4))


def negativity_spectral(rho) -> NegativityResult:
    lam = float(np.linalg.eigvalsh(partial_transpose(rho))[0])
    return NegativityResult(max(0.0, -2.0 * lam), "spectral", min_eigenvalue=lam)


def negativity_spectral_many(rho) -> np.ndarray:
    lam = np.linalg.eigvalsh(partial_transpose(rho))[..., 0]
    return np.maximum(0.0, -2.0 * lam)


def _moments(gamma: np.ndarray):
    """Pi_2, Pi_3 and det of the partial transpose, at MOMENT_DPS digits.

    Double precision loses the determinant when three eigenvalues are tiny;
    float entries convert to mpmath exactly, so only the arithmetic is extended.
    """
    with mpmath.workdps(MOMENT_DPS):
        a = mpmath.matrix([[mpmath.mpc(complex(v)) for v in row] for row in gamma])
        a2 = a * a
        a3 = a2 * a
        pi2 = mpmath.re(sum(a2[i, i] for i in range(4)))
        pi3 = mpmath.re(sum(a3[i, i] for i in range(4)))
        det = mpmath.re(mpmath.det(a))
        coeffs = [3, 6, -6 * (pi2 - 1), -4 * (3 * pi2 - 2 * pi3 - 1), 48 * det]
        return float(pi2), float(pi3), [float(c) for c in coeffs]


def _quartic_real_roots(coeffs) -> np.ndarray:
    roots = np.roots(coeffs)
    scale = max(1.0, float(np.abs(roots).max()))
    real = roots[np.abs(roots.imag) <= 1e-6 * scale].real
    d = np.polyder(coeffs)
    polished = []
    for r in real:
        fr = abs(np.polyval(coeffs, r))
        for _ in range(6):
            fp = np.polyval(d, r)
            if fp == 0.0:
                break
            step = np.polyval(coeffs, r) / fp
            # near a double root the derivative vanishes and Newton overshoots
            if abs(step) > 1e-6 * max(1.0, abs(r)):
                break
            fn = abs(np.polyval(coeffs, r - step))
            if fn >= fr:
                break
            r, fr = r - step, fn
        polished.append(r)
    return np.array(polished)


def negativity_moments(rho, reference: float | None = None) -> NegativityResult:
    """Negativity as a root of the moment quartic

    48 det + 3N^4 + 6N^3 - 6N^2 (Pi_2 - 1) - 4N (3 Pi_2 - 2 Pi_3 - 1) = 0.

    Its roots are -2 lambda_i over the partial-transpose spectrum, so the largest
    admissible root is -2 lambda_min. Passing ``reference`` instead picks the
    admissible root nearest to it (validation mode).
    """
    gamma = partial_transpose(rho)
    pi2, pi3, coeffs = _moments(gamma)
    roots = _quartic_real_roots(coeffs)
    ok = roots[(roots >= -ROOT_WINDOW) & (roots <= 1.0 + ROOT_WINDOW)]
    if ok.size == 0:
        raise NumericFailure(f"moment quartic has no real root in [0, 1]: roots={np.roots(coeffs)}")
    if reference is None:
        n = float(ok.max())
    else:
        n = float(ok[np.argmin(np.abs(ok - reference))])
    return NegativityResult(min(max(n, 0.0), 1.0), "moments", pi2=pi2, pi3=pi3)


def concurrence(rho) -> ConcurrenceResult:
    """Wootters concurrence with the spin flip (sigma_y x sigma_y) rho^* (sigma_y x sigma_y).

    The lambdas (square roots of the eigenvalues of rho rho~) are taken as the
    singular values of B^T (sigma_y x sigma_y) B with rho = B B^dag. Square roots
    of tiny eigenvalues of rho rho~ would cost half the digits for rank-deficient
    states such as pure beam-splitter outputs.
    """
    rho = np.asarray(rho, dtype=complex)
    w, v = np.linalg.eigh(rho)
    b = v * np.sqrt(np.clip(w, 0.0, None))
    lam = np.linalg.svd(b.T @ _YY @ b, compute_uv=False)
    c = lam[0] - lam[1] - lam[2] - lam[3]
    return ConcurrenceResult(max(0.0, float(c)), tuple(float(v) for v in lam))


def np_closed_form(p, q):
    """Closed-form negativity potential for populations ``p`` and |x|^2 = ``q``.

    NP = (1/3) [2 Re cbrt(2 sqrt(a1) + 2 a2) + p - 2] with principal branches,
    a2 = 14p^3 - 21p^2 + 15p + 9(p-2)q - 4 and a1 = a2^2 - 2(5(p-1)p + 6q + 2)^3.
    a1 is evaluated in the expanded form below (m = p(1-p)); the textbook form
    cancels to zero at both ends p -> 0 and p -> 1. Works on arrays.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    m = p * (1.0 - p)
    a2 = 14 * p**3 - 21 * p**2 + 15 * p + 9 * (p - 2) * q - 4
    inner = (
        -2 * m**3 + 24 * m**2 * q + m**2 - 14 * m * p * q - 37 * m * q**2
        - 12 * m * q + 9 * p * q**2 + 8 * p * q + 16 * q**3 + 4 * q**2
    )
    a1 = -27.0 * inner
    root = (2.0 * np.sqrt(a1.astype(complex)) + 2.0 * a2) ** (1.0 / 3.0)
    v = (2.0 * root.real + p - 2.0) / 3.0
    return np.where((v < 0.0) & (v > -CLAMP), 0.0, v)


def negativity_potential_closed(state: QubitState) -> float:
    v = float(np_closed_form(state.p, state.abs_x**2))
    if not math.isfinite(v):
        # never observed on the validated (p, |x|) grid
        log.warning("closed-form NP not finite for %s; using spectral value", state)
        return negativity_spectral(bs_output(state)).value
    return v


def negativity_potential(state: QubitState, method: str = "spectral") -> float:
    if method == "spectral":
        return _clamp_unit(negativity_spectral(bs_output(state, BALANCED)).value)
    if method == "moments":
        return _clamp_unit(negativity_moments(bs_output(state, BALANCED)).value)
    if method == "closed_form":
        return negativity_potential_closed(state)
    raise ValueError(f"unknown negativity method {method!r}")


def negativity_potential_many(p, x) -> np.ndarray:
    """Spectral NP for arrays of input parameters."""
    return negativity_spectral_many(bs_output_many(p, x))


def concurrence_potential(state: QubitState) -> float:
    """CP = 1 - <00|rho_out|00> = p."""
    return state.p


def binary_entropy(v: float) -> float:
    if v <= 0.0 or v >= 1.0:
        return 0.0
    return -v * math.log2(v) - (1.0 - v) * math.log2(1.0 - v)


def entanglement_of_formation(C: float) -> float:
    if not 0.0 <= C <= 1.0:
        raise ValueError(f"concurrence C={C} outside [0, 1]")
    return binary_entropy(0.5 * (1.0 + math.sqrt(1.0 - C * C)))
