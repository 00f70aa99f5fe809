"""Cahill-Glauber s-ordered quasiprobability distributions and the nonclassical depth.

Ordering parameter ``s`` runs from -1 (Husimi Q) through 0 (Wigner) to 1
(Glauber-Sudarshan P). The P function of these states is singular and is never
evaluated pointwise; all routines require ``s < 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, signal

from nonclassical.state import QubitState

MAX_FOCK_DIM = 16
S_UPPER = 1.0 - 1e-9
IMAG_RESIDUE_TOL = 1e-10


class DepthSearchError(RuntimeError):
    """The phase-space minimisation behind the numeric depth did not converge."""


def laguerre(n: int, k: int, x):
    """Associated Laguerre polynomial L_n^k(x) by the three-term recurrence.

    (j+1) L_{j+1} = (2j + 1 + k - x) L_j - (j + k) L_{j-1}
    """
    if n < 0:
        raise ValueError(f"degree n={n} must be nonnegative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + k - x
    for j in range(1, n):
        prev, cur = cur, ((2 * j + 1 + k - x) * cur - (j + k) * prev) / (j + 1)
    return cur if cur.ndim else float(cur)


def _scaled_laguerre(n: int, k: int, z, w):
    """z**n * L_n^k(w / z), finite as z -> 0.

    Same recurrence as :func:`laguerre` after multiplying step j by z**j; at
    z = 0 it reduces to (-w)**n / n!, the Husimi limit.
    """
    prev = np.ones_like(w)
    if n == 0:
        return prev
    cur = (1.0 + k) * z - w
    for j in range(1, n):
        prev, cur = cur, (((2 * j + 1 + k) * z - w) * cur - (j + k) * z * z * prev) / (j + 1)
    return cur


def _check_order(s: float):
    if not -1.0 <= s < 1.0:
        raise ValueError(f"ordering parameter s={s} must lie in [-1, 1)")


def _kernel_parts(s: float, alpha):
    """Envelope c, prefactor y, z and w = z * x_alpha for order s."""
    u = 1.0 - s
    a2 = np.abs(alpha) ** 2
    c = np.exp(-2.0 * a2 / u) / np.pi
    y = 2.0 / u
    z = -(1.0 + s) / u
    w = -4.0 * a2 / (u * u)
    return c, y, z, w


def _reduced_general(rho: np.ndarray, s: float, alpha) -> np.ndarray:
    """W^(s)(alpha) / (c y): the Fock double sum without the Gaussian envelope.

    Positive rescaling of the QPD, so it has the same sign everywhere but does
    not underflow far from the origin.
    """
    _, y, z, w = _kernel_parts(s, alpha)
    alpha = np.asarray(alpha, dtype=complex)
    dim = rho.shape[0]
    total = np.zeros(alpha.shape, dtype=complex)
    for n in range(dim):
        for m in range(n, dim):
            k = m - n
            # <n|T|m> for m >= n; the m < n half follows from Hermiticity of T.
            elem = (
                math.sqrt(math.factorial(n) / math.factorial(m))
                * y**k
                * np.conj(alpha) ** k
                * _scaled_laguerre(n, k, z, w)
            )
            total = total + rho[m, n] * elem
            if m != n:
                total = total + rho[n, m] * np.conj(elem)
    scale = np.maximum(1.0, np.abs(total.real))
    if np.any(np.abs(total.imag) > IMAG_RESIDUE_TOL * scale):
        raise ValueError("density matrix is not Hermitian: QPD has an imaginary part")
    return total.real


def qpd_general(rho, s: float, alpha):
    """W^(s)(alpha) of an arbitrary Fock-basis density matrix (dimension <= 16)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"rho must be square, got shape {rho.shape}")
    if rho.shape[0] > MAX_FOCK_DIM:
        raise ValueError(f"Fock dimension {rho.shape[0]} exceeds cap {MAX_FOCK_DIM}")
    _check_order(s)
    c, y, _, _ = _kernel_parts(s, alpha)
    out = c * y * _reduced_general(rho, s, alpha)
    return out if np.ndim(out) else float(out)


def qpd_qubit(state: QubitState, s: float, alpha):
    """Closed-form W^(s)(alpha) for a single-qubit state.

    c y [rho00 + z (1 - x_alpha) rho11 + 2 y Re(alpha rho01)], written with
    z (1 - x_alpha) = z - w so the Husimi end s = -1 needs no special case.
    """
    _check_order(s)
    c, y, z, w = _kernel_parts(s, alpha)
    alpha = np.asarray(alpha, dtype=complex)
    out = c * y * ((1.0 - state.p) + (z - w) * state.p + 2.0 * y * (alpha * state.x).real)
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class GridSpec:
    """Square phase-space grid |Re alpha|, |Im alpha| <= half_width."""

    half_width: float = 4.0
    points_per_axis: int = 81

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")
        if self.points_per_axis < 16:
            raise ValueError("points_per_axis must be at least 16")

    @property
    def axis(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.points_per_axis)

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.points_per_axis - 1)

    def mesh(self) -> np.ndarray:
        """Complex grid, rows indexed by Im alpha and columns by Re alpha."""
        a = self.axis
        return a[None, :] + 1j * a[:, None]


def qpd_grid(state: QubitState, s: float, grid: GridSpec = GridSpec()) -> np.ndarray:
    return qpd_qubit(state, s, grid.mesh())


def convolve_qpd(state: QubitState, s1: float, s2: float, grid: GridSpec = GridSpec()) -> np.ndarray:
    """Predict W^(s2) on ``grid`` by Gaussian smoothing of W^(s1).

    W^(s2)(a) = 2/(pi (s1-s2)) * integral exp(-2|a-b|^2/(s1-s2)) W^(s1)(b) d^2b,
    done as a discrete convolution (rectangle rule on the grid).
    """
    if not s2 < s1:
        raise ValueError(f"need s2 < s1, got s1={s1}, s2={s2}")
    _check_order(s1)
    _check_order(s2)
    n = grid.points_per_axis
    h = grid.spacing
    source = qpd_grid(state, s1, grid)
    offs = (np.arange(2 * n - 1) - (n - 1)) * h
    d2 = offs[None, :] ** 2 + offs[:, None] ** 2
    width = s1 - s2
    kernel = 2.0 / (np.pi * width) * np.exp(-2.0 * d2 / width) * h * h
    full = signal.fftconvolve(source, kernel, mode="full")
    return full[n - 1 : 2 * n - 1, n - 1 : 2 * n - 1]


# -- nonclassical depth --------------------------------------------------------


@dataclass(frozen=True)
class DepthResult:
    tau: float
    s0: float
    method: str
    witness_alpha: complex | None = None


def depth_analytic(state: QubitState) -> DepthResult:
    """tau = p^2 / (p - |x|^2), and 0 for the vacuum."""
    p = state.p
    if p == 0.0:
        return DepthResult(0.0, 1.0, "analytic")
    tau = min(p / (1.0 - state.abs_x**2 / p), 1.0)
    return DepthResult(tau, 1.0 - 2.0 * tau, "analytic")


def _phase_space_min(rho: np.ndarray, s: float, grid: GridSpec, levels: int = 2, zoom: float = 5.0):
    """Global minimum of the envelope-free QPD: coarse grid, zoomed grids, then a local polish."""

    def f(a):
        return _reduced_general(rho, s, a)

    mesh = grid.mesh()
    vals = f(mesh)
    idx = np.unravel_index(np.argmin(vals), vals.shape)
    best_a, best_v = complex(mesh[idx]), float(vals[idx])

    span = grid.spacing
    local = np.linspace(-1.0, 1.0, 21)
    for _ in range(levels):
        sub = best_a + span * (local[None, :] + 1j * local[:, None])
        sv = f(sub)
        j = np.unravel_index(np.argmin(sv), sv.shape)
        if sv[j] < best_v:
            best_a, best_v = complex(sub[j]), float(sv[j])
        span /= zoom

    res = optimize.minimize(
        lambda v: float(f(complex(v[0], v[1]))),
        x0=[best_a.real, best_a.imag],
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000},
    )
    if not np.isfinite(res.fun):
        raise DepthSearchError(f"phase-space minimisation diverged at s={s}")
    if res.fun < best_v:
        best_a, best_v = complex(res.x[0], res.x[1]), float(res.fun)
    return best_v, best_a


def depth_numeric(
    state: QubitState,
    grid: GridSpec = GridSpec(),
    tol: float = 1e-8,
    s_resolution: float = 1e-7,
) -> DepthResult:
    """Nonclassical depth by bisection on the ordering parameter.

    s0 is the largest s for which W^(s) is nonnegative over phase space, tested
    as min W^(s)/(c y) >= -tol (the divisor is positive and equals 1 for the
    vacuum at the origin). Nothing here uses the closed-form depth.
    """
    if not 1e-8 <= tol <= 1e-2:
        raise ValueError(f"tol={tol} outside [1e-8, 1e-2]")
    rho = state.matrix

    def nonneg(s):
        v, a = _phase_space_min(rho, s, grid)
        return v >= -tol, a

    ok, witness = nonneg(S_UPPER)
    if ok:
        return DepthResult(0.0, 1.0, "bisection", witness)
    ok, witness = nonneg(-1.0)
    if not ok:
        raise DepthSearchError("Husimi function came out negative; grid or tolerance misconfigured")
    lo, hi = -1.0, S_UPPER
    while hi - lo > s_resolution:
        mid = 0.5 * (lo + hi)
        ok, a = nonneg(mid)
        if ok:
            lo, witness = mid, a
        else:
            hi = mid
    return DepthResult((1.0 - lo) / 2.0, lo, "bisection", witness)
