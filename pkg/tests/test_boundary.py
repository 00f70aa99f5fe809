import math

import numpy as np
import pytest

from nonclassical import boundary as bd
from nonclassical.measures import PANELS
from nonclassical.state import InvalidStateError, Mixed, Pure, QubitState, family_state


def test_golden_section_finds_maximum():
    a, b, best, val = bd.golden_section_max(lambda t: -((t - 0.3) ** 2), 0.0, 1.0, 1e-10)
    assert best == pytest.approx(0.3, abs=1e-9)
    assert b - a < 1e-9


def test_golden_section_vectorised():
    centres = np.array([0.1, 0.5, 0.9])
    _, _, best, _ = bd.golden_section_max(lambda t: -((t - centres) ** 2), np.zeros(3), np.ones(3), 1e-10)
    np.testing.assert_allclose(best, centres, atol=1e-9)


def test_optimum_above_critical_depth_is_mixed():
    o = bd.search_optimal(0.5)
    assert o.is_mixed and o.x <= 1e-6
    assert o.np_value == pytest.approx((math.sqrt(2) - 1) / 2, abs=1e-12)
    s = bd.optimal_state(0.8)
    assert s.p == pytest.approx(0.8) and s.abs_x <= 1e-6


def test_optimum_below_critical_depth_is_partially_mixed():
    o = bd.search_optimal(0.2)
    assert not o.is_mixed
    assert 0 < o.p < 0.2
    assert o.np_value > o.mixed_np
    # the optimum really sits at depth 0.2
    assert o.p**2 / (o.p - o.x**2) == pytest.approx(0.2, rel=1e-9)


def test_optimum_beats_dense_scan():
    for tau in (0.05, 0.15, 0.3, 0.32, 0.6):
        p = np.linspace(0, tau, 20001)[1:]
        scan = bd.np_at_depth(p, tau).max()
        assert bd.search_optimal(tau).np_value >= scan - 1e-12


def test_optimal_state_arguments():
    with pytest.raises(InvalidStateError):
        bd.optimal_state(0.0)
    with pytest.raises(ValueError):
        bd.optimal_state(0.5, tol=1e-3)


def test_find_tau0():
    est = bd.find_tau0()
    assert abs(est.tau0 - 0.3154) <= 5e-4
    lo, hi = est.bracket
    assert hi - lo <= 1e-4
    assert not bd.search_optimal(lo).is_mixed and bd.search_optimal(hi).is_mixed


def test_find_tau0_rejects_bad_bracket():
    with pytest.raises(bd.NonBracketingError):
        bd.find_tau0(bracket=(0.4, 0.6))
    with pytest.raises(ValueError):
        bd.find_tau0(tol=0.1)


def test_mixed_curve_helpers():
    assert float(bd.d_on_mixed_curve((math.sqrt(2) - 1) / 2)) == pytest.approx(0.5)
    p = np.linspace(0, 1, 11)
    np.testing.assert_allclose(bd.d_on_mixed_curve(bd.np_mixed(p)), p, atol=1e-14)


@pytest.mark.parametrize("panel", PANELS)
@pytest.mark.parametrize("family", bd.FAMILIES)
def test_boundary_curve_shape_and_order(panel, family):
    c = bd.boundary_curve(panel, family, 64)
    assert c.samples.shape[1] == 4 and len(c) > 10
    assert np.all(np.isfinite(c.samples))
    key = c.abscissa + 0 * c.ordinate
    assert np.all(np.diff(key) >= 0)


def test_boundary_curve_families():
    mixed = bd.boundary_curve("D_vs_tau", "mixed", 50)
    np.testing.assert_allclose(mixed.ordinate, mixed.abscissa, atol=1e-15)
    pure = bd.boundary_curve("D_vs_NP", "pure", 50)
    np.testing.assert_allclose(pure.ordinate, pure.abscissa, atol=1e-12)
    dnp = bd.boundary_curve("D_vs_NP", "mixed", 50)
    np.testing.assert_allclose(dnp.ordinate, bd.d_on_mixed_curve(dnp.abscissa), atol=1e-12)
    npt = bd.boundary_curve("NP_vs_tau", "mixed", 51)
    i = np.argmin(np.abs(npt.abscissa - 0.5))
    assert npt.ordinate[i] == pytest.approx((math.sqrt(2) - 1) / 2, abs=1e-12)


def test_boundary_curve_rejects():
    with pytest.raises(ValueError):
        bd.boundary_curve("tau_vs_D", "pure")
    with pytest.raises(ValueError):
        bd.boundary_curve("D_vs_tau", "squeezed")


def test_plus_family_curve():
    eps = [10.0**-n for n in range(1, 7)]
    c = bd.plus_family_curve(0.5, eps)
    np.testing.assert_allclose(np.sort(c.abscissa), np.sort([1 / (2 - e) for e in eps]), rtol=1e-9)
    np.testing.assert_allclose(np.sort(c.ordinate), np.sort(eps), rtol=1e-12)
    tiny = bd.plus_family_curve(0.5, [1e-6], panel="NP_vs_tau")
    assert tiny.ordinate[0] <= 1e-5
    with pytest.raises(InvalidStateError):
        bd.plus_family_curve(0.5, [0.0])


def test_inequality_chain_cases():
    assert bd.verify_inequality_chain(QubitState(1.0, 0)).case == 1
    assert bd.verify_inequality_chain(QubitState(0.5, 0.25)).case == 2
    assert bd.verify_inequality_chain(family_state(Pure(0.3))).case == 3
    assert bd.verify_inequality_chain(family_state(Mixed(0.3))).case == 4


def test_classify_case():
    assert bd.classify_case(1, 1, 1) == 1
    assert bd.classify_case(0.9, 0.5, 0.2) == 2
    assert bd.classify_case(0.9, 0.5, 0.5) == 3
    assert bd.classify_case(0.5, 0.5, 0.2) == 4


def test_chain_violations_detects_bad_data(rng):
    p = rng.random(1000)
    x = rng.random(1000) * np.sqrt(p * (1 - p))
    assert bd.chain_violations(p, x).size == 0
    assert bd.chain_violations(np.array([0.5]), np.array([0.9])).size == 1


def test_dephasing_chain():
    r = bd.verify_dephasing_chain(0.5, np.arange(0, 0.51, 0.1))
    assert r.tau[0] == pytest.approx(0.5) and r.tau[-1] == pytest.approx(1.0)
    assert r.negativity_potential[0] == pytest.approx((math.sqrt(2) - 1) / 2)
    assert r.negativity_potential[-1] == pytest.approx(0.5)
    np.testing.assert_allclose(r.distance, 0.5)
    with pytest.raises(InvalidStateError):
        bd.verify_dephasing_chain(0.5, [0.6])


def test_mixed_maximality():
    r = bd.verify_mixed_maximality(n_tau=41, n_states=81, tau0=0.3154)
    assert r.ok
    assert r.subcritical_margin > 0


def test_containment_flags_outside_points():
    rep = bd.check_containment("D_vs_tau", np.array([0.5]), np.array([0.25]))
    assert rep.ok
    # a D_vs_NP point that no state reaches
    ex = bd.region_excess("D_vs_NP", np.array([0.5]), np.array([0.25]))
    assert ex[0] <= 0
    with pytest.raises(ValueError):
        bd.region_excess("nope", np.array([0.5]), np.array([0.0]))


def test_table_two():
    reports = bd.table_two()
    assert len(reports) == 7
    assert reports[0].tau == pytest.approx(4 / 7, abs=1e-12)


def test_table_three():
    rep = bd.table_three()
    assert rep.ok and len(rep.rows) == 12


def test_table_one():
    for case, got in bd.table_one().items():
        assert all(c == case for c in got)
