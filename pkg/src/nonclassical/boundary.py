"""Boundary states of the measure-pair regions, the critical depth, and the
table and inequality verification suites.

Panels are named ``<ordinate>_vs_<abscissa>``: ``D_vs_tau`` plots the distance
against the depth, ``NP_vs_tau`` the negativity potential against the depth and
``D_vs_NP`` the distance against the negativity potential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from nonclassical.entanglement import np_closed_form, negativity_potential_many
from nonclassical.measures import PANELS, depth_many, measure_report, measures_many, panel_coordinates
from nonclassical.state import (
    DEFAULT_PLUS_EPS,
    InvalidStateError,
    MeasureReport,
    QubitState,
    family_state,
    Mixed,
    Pure,
    plus_coherence,
)

FAMILIES = ("pure", "mixed", "opt", "plus")
MIXED_X_THRESHOLD = 1e-5
TAU0_HINT = 0.3154  # only used to place extra curve samples
CHAIN_SLACK = 1e-9
TABLE_TOL = 1e-9
INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class VerificationError(AssertionError):
    """A verification suite found a counterexample."""


class NonBracketingError(RuntimeError):
    """The search interval for the critical depth does not straddle the transition."""


# -- optimiser for NP at fixed depth ------------------------------------------


def np_at_depth(p, tau):
    """NP along the fixed-depth curve |x|^2 = p - p^2/tau, for 0 <= p <= tau."""
    p = np.asarray(p, dtype=float)
    q = np.maximum(p - p * p / tau, 0.0)
    return np_closed_form(p, q)


def np_mixed(p):
    """sqrt((1-p)^2 + p^2) - (1-p), the NP of the completely mixed state."""
    p = np.asarray(p, dtype=float)
    return np.sqrt((1.0 - p) ** 2 + p**2) - (1.0 - p)


def d_on_mixed_curve(n):
    """Distance of the mixed state whose NP is ``n``: sqrt(2n(1+n)) - n."""
    n = np.asarray(n, dtype=float)
    return np.sqrt(2.0 * n * (1.0 + n)) - n


def golden_section_max(f, a, b, tol: float = 1e-11):
    """Maximise ``f`` on [a, b] by golden-section search.

    ``a``, ``b`` and ``tol`` may be arrays (one independent search per
    element); ``f`` must accept and return arrays of the same shape. Returns the final bracket
    (lo, hi) and the best interior point with its value.
    """
    a = np.array(a, dtype=float, copy=True)
    b = np.array(b, dtype=float, copy=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.max((b - a) / np.asarray(tol, dtype=float)) if a.size else 0.0
    n_iter = int(math.ceil(math.log(ratio) / -math.log(INVPHI))) if ratio > 1.0 else 0
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(n_iter):
        left = fc >= fd  # max lies in [a, d]
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - INVPHI * (b - a)
        new_d = a + INVPHI * (b - a)
        c, d = np.where(left, new_c, d), np.where(left, c, new_d)
        fnew = f(np.where(left, c, d))
        fc, fd = np.where(left, fnew, fd), np.where(left, fc, fnew)
    best = np.where(fc >= fd, c, d)
    return a, b, best, np.maximum(fc, fd)


def _parabolic_step(f, x, h, lo, hi):
    """One quadratic-interpolation step around x; kept only where it improves f."""
    x0, x1, x2 = np.maximum(x - h, lo), x, np.minimum(x + h, hi)
    f0, f1, f2 = f(x0), f(x1), f(x2)
    num = (x1 - x0) ** 2 * (f1 - f2) - (x1 - x2) ** 2 * (f1 - f0)
    den = (x1 - x0) * (f1 - f2) - (x1 - x2) * (f1 - f0)
    with np.errstate(divide="ignore", invalid="ignore"):
        xn = x1 - 0.5 * num / den
    xn = np.where(np.isfinite(xn), np.clip(xn, lo, hi), x1)
    fn = f(xn)
    better = fn > f1
    return np.where(better, xn, x1), np.where(better, fn, f1)


@dataclass(frozen=True)
class OptimumSearch:
    tau: float
    p: float
    x: float
    np_value: float
    mixed_np: float
    multimodal: bool

    @property
    def is_mixed(self) -> bool:
        return self.x < MIXED_X_THRESHOLD

    @property
    def state(self) -> QubitState:
        return QubitState(self.p, self.x)


def optimize_np_at_depth(taus, tol: float = 1e-11, starts: int = 8):
    """Vectorised search for max_p NP(p, sqrt(p - p^2/tau)) over p in (0, tau].

    Golden section on ``starts`` equal sub-intervals, the endpoint p = tau
    (the mixed state) checked explicitly, then one parabolic polish step.
    Returns arrays (p_opt, np_opt, multimodal).
    """
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    if np.any((taus <= 0.0) | (taus > 1.0)):
        raise ValueError("depths must lie in (0, 1]")

    cand_p, cand_v, genuine = [], [], []
    for k in range(starts):
        lo = taus * k / starts
        hi = taus * (k + 1) / starts

        def f(p):
            return np_at_depth(p, taus)

        _, _, best, val = golden_section_max(f, lo, hi, tol * taus)
        cand_p.append(best)
        cand_v.append(val)
        edge = 4.0 * tol * taus
        genuine.append((best - lo > edge) & (hi - best > edge))
    cand_p.append(taus.copy())
    cand_v.append(np_mixed(taus))
    genuine.append(np.ones_like(taus, dtype=bool))

    P = np.stack(cand_p)
    V = np.stack(cand_v)
    G = np.stack(genuine)
    i = np.argmax(V, axis=0)
    cols = np.arange(taus.size)
    p_best = P[i, cols]
    v_best = V[i, cols]

    # a second, distinct local maximum within 1e-7 of the best
    far = np.abs(P - p_best) > 1e-6
    rivals = G & far & (V >= v_best - 1e-7)
    multimodal = rivals.any(axis=0)

    interior = p_best < taus
    h = np.maximum(10.0 * tol * taus, 1e-14)
    pp, vv = _parabolic_step(lambda p: np_at_depth(p, taus), p_best, h, 0.0, taus)
    p_best = np.where(interior, pp, p_best)
    v_best = np.where(interior, vv, v_best)
    return p_best, v_best, multimodal


def search_optimal(tau: float, tol: float = 1e-11) -> OptimumSearch:
    if not 0.0 < tau <= 1.0:
        raise InvalidStateError(f"depth tau={tau} outside (0, 1]")
    p, v, multi = optimize_np_at_depth([tau], tol)
    p = float(p[0])
    x = math.sqrt(max(p - p * p / tau, 0.0))
    return OptimumSearch(tau, p, x, float(v[0]), float(np_mixed(tau)), bool(multi[0]))


def optimal_state(tau: float, tol: float = 1e-11) -> QubitState:
    """The state of depth ``tau`` with the largest negativity potential."""
    if tol > 1e-8:
        raise ValueError(f"tol={tol} must be <= 1e-8")
    return search_optimal(tau, tol).state


@dataclass(frozen=True)
class Tau0Estimate:
    tau0: float
    bracket: tuple[float, float]
    criterion: str


def find_tau0(tol: float = 1e-4, bracket: tuple[float, float] = (0.2, 0.5)) -> Tau0Estimate:
    """Critical depth above which the NP-optimal state is the completely mixed one.

    Bisection on tau for the smallest depth whose optimiser returns |x_opt|
    below MIXED_X_THRESHOLD; the bracket is narrowed to min(tol, 1e-4).
    """
    if not 1e-6 <= tol <= 1e-3:
        raise ValueError(f"tol={tol} outside [1e-6, 1e-3]")
    lo, hi = bracket
    if search_optimal(lo).is_mixed or not search_optimal(hi).is_mixed:
        raise NonBracketingError(f"optimal-state type does not change across {bracket}")
    width = min(tol, 1e-4)
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if search_optimal(mid).is_mixed:
            hi = mid
        else:
            lo = mid
    return Tau0Estimate(
        0.5 * (lo + hi),
        (lo, hi),
        f"smallest depth whose NP-maximising state has |x_opt| < {MIXED_X_THRESHOLD:g}",
    )


# -- boundary curves -------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryCurve:
    """Sampled boundary; ``samples`` columns are abscissa, ordinate, p, |x|.

    Rows are sorted by (abscissa, ordinate), so vertical segments such as the
    pure-state line at tau = 1 are ordered along the ordinate.
    """

    panel: str
    family: str
    samples: np.ndarray

    @property
    def abscissa(self) -> np.ndarray:
        return self.samples[:, 0]

    @property
    def ordinate(self) -> np.ndarray:
        return self.samples[:, 1]

    @property
    def p(self) -> np.ndarray:
        return self.samples[:, 2]

    @property
    def x(self) -> np.ndarray:
        return self.samples[:, 3]

    def __len__(self):
        return self.samples.shape[0]


def _curve(panel: str, family: str, p, x) -> BoundaryCurve:
    ab, od = panel_coordinates(panel, p, x)
    rows = np.column_stack([ab, od, p, np.abs(x)])
    order = np.lexsort((rows[:, 1], rows[:, 0]))
    rows = rows[order]
    keep = np.ones(len(rows), dtype=bool)
    keep[1:] = np.any(np.diff(rows[:, :2], axis=0) != 0.0, axis=1)
    return BoundaryCurve(panel, family, rows[keep])


def _opt_depths(n: int) -> np.ndarray:
    base = np.linspace(0.0, 1.0, n + 1)[1:]
    dense = np.linspace(TAU0_HINT - 0.05, TAU0_HINT + 0.05, 4 * max(1, int(n * 0.1)) + 1)
    return np.unique(np.concatenate([base, dense]))


def boundary_curve(panel: str, family: str, n_samples: int = 512, eps: float = DEFAULT_PLUS_EPS) -> BoundaryCurve:
    if panel not in PANELS:
        raise ValueError(f"unknown panel {panel!r}; choose from {PANELS}")
    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    if family == "pure":
        p = np.linspace(0.0, 1.0, n_samples + 1)[1:]
        x = np.sqrt(p * (1.0 - p))
    elif family == "mixed":
        p = np.linspace(0.0, 1.0, n_samples)
        x = np.zeros_like(p)
    elif family == "opt":
        taus = _opt_depths(n_samples)
        p, _, _ = optimize_np_at_depth(taus)
        x = np.sqrt(np.maximum(p - p * p / taus, 0.0))
    elif family == "plus":
        tau0 = np.linspace(0.0, 1.0, n_samples + 1)[1:]
        tau0 = tau0[1.0 + eps - eps / tau0 >= 0.0]
        p = np.full_like(tau0, eps)
        x = np.array([plus_coherence(t, eps) for t in tau0])
    else:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    return _curve(panel, family, p, x)


def plus_family_curve(tau0_target: float, eps_list, panel: str = "D_vs_tau") -> BoundaryCurve:
    """rho(eps, x0(eps)) for each eps; depth tends to ``tau0_target`` as eps -> 0."""
    eps = np.asarray(eps_list, dtype=float)
    if np.any(eps <= 0.0):
        raise InvalidStateError("all eps must be positive")
    x = np.array([plus_coherence(tau0_target, float(e)) for e in eps])
    return _curve(panel, "plus", eps, x)


# -- region containment -----------------------------------------------------------


@dataclass(frozen=True)
class ContainmentReport:
    panel: str
    n_points: int
    n_violations: int
    worst_excess: float
    worst_index: int | None

    @property
    def ok(self) -> bool:
        return self.n_violations == 0


def region_excess(panel: str, p, x) -> np.ndarray:
    """How far each state lies outside the panel's boundary curves (<= 0 inside)."""
    p = np.asarray(p, dtype=float)
    ab, od = panel_coordinates(panel, p, x)
    if panel == "D_vs_tau":
        # mixed diagonal above, rho_+ line (D = 0) below, pure line tau = 1 right
        return np.maximum.reduce([od - ab, -od, ab - 1.0])
    if panel == "NP_vs_tau":
        upper = np.zeros_like(ab)
        pos = ab > 0.0
        if np.any(pos):
            _, v, _ = optimize_np_at_depth(ab[pos])
            upper[pos] = v
        return np.maximum.reduce([od - upper, -od, ab - 1.0])
    if panel == "D_vs_NP":
        # pure diagonal D = NP below, mixed curve above
        return np.maximum(ab - od, od - d_on_mixed_curve(ab))
    raise ValueError(f"unknown panel {panel!r}")


def check_containment(panel: str, p, x, slack: float = CHAIN_SLACK) -> ContainmentReport:
    ex = region_excess(panel, p, x)
    bad = ex > slack
    worst = int(np.argmax(ex)) if ex.size else None
    return ContainmentReport(
        panel, int(ex.size), int(bad.sum()), float(ex.max()) if ex.size else 0.0, worst
    )


# -- inequality suites ------------------------------------------------------------


@dataclass(frozen=True)
class ChainReport:
    state: QubitState
    tau: float
    distance: float
    concurrence_potential: float
    negativity_potential: float
    case: int


def classify_case(tau: float, d: float, n: float, tol: float = CHAIN_SLACK) -> int:
    """Which of the four cases of tau >= D >= NP holds (1: all equal,
    2: both strict, 3: tau > D = NP, 4: tau = D > NP)."""
    eq_td = abs(tau - d) <= tol
    eq_dn = abs(d - n) <= tol
    if eq_td and eq_dn:
        return 1
    if not eq_td and not eq_dn:
        return 2
    return 3 if eq_dn else 4


def verify_inequality_chain(state: QubitState, slack: float = CHAIN_SLACK) -> ChainReport:
    r = measure_report(state)
    ok = (
        r.tau >= r.distance - slack
        and abs(r.distance - r.concurrence_potential) <= slack
        and r.concurrence_potential >= r.negativity_potential - slack
    )
    if not ok:
        raise VerificationError(f"tau >= D = CP >= NP violated: {r.as_dict()}")
    case = classify_case(r.tau, r.distance, r.negativity_potential, slack)
    return ChainReport(state, r.tau, r.distance, r.concurrence_potential, r.negativity_potential, case)


def chain_violations(p, x, slack: float = CHAIN_SLACK) -> np.ndarray:
    """Indices of states breaking tau >= D = CP >= NP (array version of the chain)."""
    m = measures_many(p, x)
    bad = (
        (m["tau"] < m["distance"] - slack)
        | (np.abs(m["distance"] - m["concurrence_potential"]) > slack)
        | (m["concurrence_potential"] < m["negativity_potential"] - slack)
    )
    for v in m.values():
        bad |= (v < -slack) | (v > 1.0 + slack) | ~np.isfinite(v)
    return np.flatnonzero(bad)


@dataclass(frozen=True)
class DephasingReport:
    p: float
    x: np.ndarray
    tau: np.ndarray
    negativity_potential: np.ndarray
    distance: np.ndarray
    ok: bool


def verify_dephasing_chain(p: float, x_grid, slack: float = 1e-12, strict: bool = True) -> DephasingReport:
    """At fixed p, depth and NP may only drop as |x| shrinks; D stays put."""
    x = np.sort(np.abs(np.asarray(x_grid, dtype=float)))
    if np.any(x**2 > p * (1.0 - p) + 1e-12):
        raise InvalidStateError(f"some |x| exceed sqrt(p(1-p)) for p={p}")
    states = [QubitState(p, v) for v in x]
    tau = depth_many(np.full_like(x, p), x)
    npv = negativity_potential_many(np.full_like(x, p), x)
    dist = np.array([1.0 - (1.0 - s.p) for s in states])
    ok = bool(
        np.all(np.diff(tau) >= -slack)
        and np.all(np.diff(npv) >= -slack)
        and np.ptp(dist) <= slack
    )
    if strict and not ok:
        raise VerificationError(f"dephasing monotonicity violated at p={p}")
    return DephasingReport(p, x, tau, npv, dist, ok)


@dataclass
class MaximalityReport:
    d_at_fixed_depth_violations: int = 0
    np_at_fixed_depth_violations: int = 0
    d_at_fixed_np_violations: int = 0
    mixed_curve_formula_residual: float = 0.0
    subcritical_margin: float = 0.0
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.d_at_fixed_depth_violations == 0
            and self.np_at_fixed_depth_violations == 0
            and self.d_at_fixed_np_violations == 0
            and self.mixed_curve_formula_residual <= 1e-12
            and self.subcritical_margin > 0.0
        )


def verify_mixed_maximality(
    n_tau: int = 101,
    n_states: int = 201,
    tau0: float | None = None,
    slack: float = CHAIN_SLACK,
    strict: bool = True,
) -> MaximalityReport:
    """Completely mixed states are extremal at fixed depth (distance, and NP above
    the critical depth) and at fixed NP (distance). Also confirms that at
    tau = 0.2 some partially mixed state beats the mixed one in NP."""
    rep = MaximalityReport()
    if tau0 is None:
        tau0 = find_tau0().tau0

    frac = np.linspace(0.0, 1.0, n_states)[1:]
    for t1 in np.linspace(0.0, 1.0, n_tau)[1:]:
        p = t1 * frac
        x = np.sqrt(np.maximum(p - p * p / t1, 0.0))
        # distance at fixed depth: D' = p <= t1 = D(mixed)
        d = p
        bad = d > t1 + slack
        if bad.any():
            rep.d_at_fixed_depth_violations += int(bad.sum())
            rep.witnesses.append(("D@tau", float(t1), float(p[bad][0])))
        if t1 >= tau0 + 1e-3:
            npv = negativity_potential_many(p, x)
            bad = npv > float(np_mixed(t1)) + slack
            if bad.any():
                rep.np_at_fixed_depth_violations += int(bad.sum())
                rep.witnesses.append(("NP@tau", float(t1), float(p[bad][0])))

    pg, rg = np.meshgrid(np.linspace(0.0, 1.0, n_states), np.linspace(0.0, 1.0, n_states))
    pg, rg = pg.ravel(), rg.ravel()
    xg = rg * np.sqrt(pg * (1.0 - pg))
    npg = negativity_potential_many(pg, xg)
    bad = pg > d_on_mixed_curve(npg) + slack
    if bad.any():
        rep.d_at_fixed_np_violations = int(bad.sum())
        rep.witnesses.append(("D@NP", float(pg[bad][0]), float(xg[bad][0])))

    pm = np.linspace(0.0, 1.0, n_states)
    rep.mixed_curve_formula_residual = float(np.max(np.abs(d_on_mixed_curve(np_mixed(pm)) - pm)))
    rep.subcritical_margin = search_optimal(0.2).np_value - float(np_mixed(0.2))

    if strict and not rep.ok:
        raise VerificationError(f"mixed-state maximality failed: {rep}")
    return rep


# -- tables -------------------------------------------------------------------


def _table_states() -> dict[int, QubitState]:
    return {
        0: QubitState(0.5, 0.25),
        1: QubitState(1.0, 0.0),
        2: family_state(Mixed((math.sqrt(6.0) - 1.0) / 2.0)),
        3: family_state(Mixed(0.5)),
        4: family_state(Pure(0.5)),
        5: family_state(Mixed(0.8)),
        6: family_state(Mixed(0.6)),
    }


# (tau, D = CP, NP) in closed form
TABLE_TWO_EXPECTED: dict[int, tuple[float, float, float]] = {
    0: (4 / 7, 0.5, math.cos(2 * math.pi / 9) - 0.5),
    1: (1.0, 1.0, 1.0),
    2: ((math.sqrt(6) - 1) / 2, (math.sqrt(6) - 1) / 2, 0.5),
    3: (0.5, 0.5, (math.sqrt(2) - 1) / 2),
    4: (1.0, 0.5, 0.5),
    5: (0.8, 0.8, (math.sqrt(17) - 1) / 5),
    6: (0.6, 0.6, (math.sqrt(13) - 2) / 5),
}


def table_two(tol: float = TABLE_TOL) -> list[MeasureReport]:
    """Measures of the seven reference states, checked against their closed forms."""
    reports = []
    for n, state in _table_states().items():
        r = measure_report(state)
        got = {"tau": r.tau, "D": r.distance, "CP": r.concurrence_potential, "NP": r.negativity_potential}
        tau_e, d_e, np_e = TABLE_TWO_EXPECTED[n]
        want = {"tau": tau_e, "D": d_e, "CP": d_e, "NP": np_e}
        for key in got:
            if abs(got[key] - want[key]) > tol:
                raise VerificationError(
                    f"rho_{n}: {key} = {got[key]!r}, expected {want[key]!r}"
                )
        reports.append(r)
    return reports


# each row: two relations (measure, n, op, m)
TABLE_THREE_ROWS = [
    (("tau", 1, ">", 2), ("D", 1, ">", 2)),
    (("tau", 1, "=", 4), ("D", 1, ">", 4)),
    (("tau", 4, ">", 3), ("D", 4, "=", 3)),
    (("tau", 2, "<", 4), ("D", 2, ">", 4)),
    (("tau", 1, ">", 2), ("NP", 1, ">", 2)),
    (("tau", 1, "=", 4), ("NP", 1, ">", 4)),
    (("tau", 4, ">", 2), ("NP", 4, "=", 2)),
    (("tau", 5, "<", 4), ("NP", 5, ">", 4)),
    (("NP", 1, ">", 2), ("D", 1, ">", 2)),
    (("NP", 2, "=", 4), ("D", 2, ">", 4)),
    (("NP", 4, ">", 3), ("D", 4, "=", 3)),
    (("NP", 6, "<", 4), ("D", 6, ">", 4)),
]


def _relation_holds(a: float, op: str, b: float, tol: float) -> bool:
    if op == "=":
        return abs(a - b) <= tol
    if op == ">":
        return a - b > tol
    if op == "<":
        return b - a > tol
    raise ValueError(op)


@dataclass(frozen=True)
class TableThreeReport:
    rows: list[tuple[int, bool, str]]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.rows)

    @property
    def failures(self) -> list[str]:
        return [desc for _, passed, desc in self.rows if not passed]


def table_three(tol: float = TABLE_TOL, strict: bool = True) -> TableThreeReport:
    """Evaluate the twelve paired orderings of the reference states."""
    meas = {}
    for n, state in _table_states().items():
        r = measure_report(state)
        meas[n] = {"tau": r.tau, "D": r.distance, "NP": r.negativity_potential}
    rows = []
    for i, rels in enumerate(TABLE_THREE_ROWS, start=1):
        parts, passed = [], True
        for key, n, op, m in rels:
            a, b = meas[n][key], meas[m][key]
            holds = _relation_holds(a, op, b, tol)
            passed &= holds
            parts.append(f"{key}(rho_{n})={a:.10g} {op} {key}(rho_{m})={b:.10g}")
        rows.append((i, passed, f"row {i}: " + " and ".join(parts)))
    rep = TableThreeReport(rows)
    if strict and not rep.ok:
        raise VerificationError("; ".join(rep.failures))
    return rep


TABLE_ONE_EXAMPLES = {
    1: [QubitState(0.0, 0.0), QubitState(1.0, 0.0)],
    2: [QubitState(0.5, 0.25)],
    3: [family_state(Pure(p)) for p in (0.1, 0.5, 0.9)],
    4: [family_state(Mixed(p)) for p in (0.1, 0.5, 0.9)],
}


def table_one() -> dict[int, list[int]]:
    """Case assigned to each example state, keyed by the case it should land in."""
    return {
        case: [verify_inequality_chain(s).case for s in states]
        for case, states in TABLE_ONE_EXAMPLES.items()
    }
