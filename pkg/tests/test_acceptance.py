"""The eleven acceptance criteria, each at its stated tolerance and time budget."""

import math
import time

import numpy as np
import pytest

from conftest import record
from nonclassical import boundary as bd
from nonclassical.beamsplitter import bs_output, bs_output_many
from nonclassical.distance import nonclassical_distance
from nonclassical.entanglement import (
    concurrence,
    concurrence_potential,
    negativity_moments,
    negativity_potential,
    negativity_spectral,
    negativity_spectral_many,
    np_closed_form,
)
from nonclassical.measures import PANELS
from nonclassical.montecarlo import SamplerConfig, sample_arrays
from nonclassical.qpd import GridSpec, convolve_qpd, depth_analytic, depth_numeric, qpd_grid
from nonclassical.state import Mixed, Pure, QubitState, VACUUM, family_state

CLOUD = SamplerConfig(100_000, 20240101)


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.dt = time.perf_counter() - self.t0


def check(n, ok, detail):
    record(n, bool(ok), detail)
    assert ok, detail


def test_c01_reference_state_measures():
    with Timer() as t:
        try:
            reports = bd.table_two(tol=1e-9)
            ok, msg = True, "7 states x 4 measures within 1e-9"
        except bd.VerificationError as exc:
            reports, ok, msg = [], False, str(exc)
    worst = 0.0
    for r, (tau, d, npv) in zip(reports, bd.TABLE_TWO_EXPECTED.values()):
        worst = max(worst, abs(r.tau - tau), abs(r.distance - d), abs(r.concurrence_potential - d), abs(r.negativity_potential - npv))
    check(1, ok and t.dt < 1.0, f"{msg}; worst deviation {worst:.2e}; {t.dt:.3f} s")


def test_c02_chain_case_classification():
    with Timer() as t:
        got = bd.table_one()
    ok = all(c == case for case, cases in got.items() for c in cases)
    check(2, ok and t.dt < 1.0, f"cases {got}; {t.dt:.3f} s")


def test_c03_pairwise_orderings():
    with Timer() as t:
        rep = bd.table_three(tol=1e-9, strict=False)
    held = sum(passed for _, passed, _ in rep.rows)
    check(3, rep.ok and len(rep.rows) == 12 and t.dt < 1.0, f"{held}/12 rows hold; {t.dt:.3f} s {rep.failures}")


def test_c04_critical_depth():
    with Timer() as t:
        est = bd.find_tau0()
    ok = abs(est.tau0 - 0.3154) <= 5e-4
    check(4, ok and t.dt < 60.0, f"tau0 = {est.tau0:.6f} (bracket {est.bracket[0]:.6f}..{est.bracket[1]:.6f}); {t.dt:.2f} s")


def test_c05_closed_form_vs_spectral():
    with Timer() as t:
        p = np.repeat(np.linspace(0.0, 1.0, 200), 200)
        r = np.tile(np.linspace(0.0, 1.0, 200), 200)
        x = r * np.sqrt(p * (1.0 - p))
        closed = np_closed_form(p, x * x)
        spec = negativity_spectral_many(bs_output_many(p, x))
        worst = float(np.max(np.abs(closed - spec)))
        s = QubitState(0.125, 0.25)
        routes = [negativity_potential(s, m) for m in ("spectral", "moments", "closed_form")]
        spread = max(routes) - min(routes)
    ok = worst <= 1e-8 and spread <= 1e-9 and np.all(np.isfinite(closed))
    check(5, ok and t.dt < 60.0, f"grid worst {worst:.2e}; (1/8, 1/4) spread {spread:.2e} at NP={routes[0]:.12f}; {t.dt:.2f} s")


def test_c06_moment_quartic():
    p, x = sample_arrays(SamplerConfig(1000, 6))
    outs = bs_output_many(p, x)
    with Timer() as t:
        worst = max(abs(negativity_moments(o).value - negativity_spectral(o).value) for o in outs)
    check(6, worst <= 1e-8 and t.dt < 10.0, f"1000 outputs, worst {worst:.2e}; {t.dt:.2f} s")


def test_c07_depth_numeric_vs_analytic():
    p, x = sample_arrays(SamplerConfig(100, 7))
    with Timer() as t:
        errs = []
        for a, b in zip(p, x):
            s = QubitState(float(a), complex(b))
            errs.append(abs(depth_numeric(s).tau - depth_analytic(s).tau))
    worst = max(errs)
    check(7, worst <= 1e-4 and t.dt < 120.0, f"100 states, worst {worst:.2e}; {t.dt:.1f} s")


def test_c08_inequality_chain_cloud():
    with Timer() as t:
        p, x = sample_arrays(CLOUD)
        bad = bd.chain_violations(p, x, slack=1e-9)
    check(8, bad.size == 0 and t.dt < 60.0, f"{p.size} states, {bad.size} violations; {t.dt:.2f} s")


def test_c09_boundary_containment():
    with Timer() as t:
        p, x = sample_arrays(CLOUD)
        reps = {panel: bd.check_containment(panel, p, x, slack=1e-9) for panel in PANELS}
        tau0 = bd.find_tau0().tau0
        taus = np.linspace(0.05, tau0 - 0.01, 200)
        _, npopt, _ = bd.optimize_np_at_depth(taus)
        margin = npopt - bd.np_mixed(taus)
    contained = all(r.ok for r in reps.values())
    worst = {k: f"{r.worst_excess:.1e}" for k, r in reps.items()}
    ok = contained and np.all(margin > 0)
    check(9, ok and t.dt < 120.0, f"excess by panel {worst}; min NP_opt - NP_M margin {margin.min():.3e} on [0.05, tau0-0.01]; {t.dt:.1f} s")


def test_c10_distance_equals_cp():
    p, x = sample_arrays(SamplerConfig(10_000, 10))
    worst = 0.0
    for a, b in zip(p, x):
        s = QubitState(float(a), complex(b))
        d = nonclassical_distance(s)
        worst = max(worst, abs(d - concurrence_potential(s)), abs(d - s.p), abs(concurrence(bs_output(s)).value - s.p))
    check(10, worst <= 1e-12, f"10^4 states, worst |D - CP| or |. - p| = {worst:.2e}")


def test_c11_convolution_to_husimi():
    g = GridSpec(6.0, 161)
    with Timer() as t:
        errs = {}
        for name, s in (("vacuum", VACUUM), ("Mixed(1/2)", family_state(Mixed(0.5))), ("Pure(1/2)", family_state(Pure(0.5)))):
            errs[name] = float(np.max(np.abs(convolve_qpd(s, 0.0, -1.0, g) - qpd_grid(s, -1.0, g))))
    ok = max(errs.values()) <= 1e-3
    check(11, ok and t.dt < 30.0, "sup-norm " + ", ".join(f"{k} {v:.1e}" for k, v in errs.items()) + f"; {t.dt:.2f} s")
