import math

import numpy as np
import pytest
from hypothesis import given

from conftest import qubit_states
from nonclassical.state import (
    PSD_SLACK,
    InvalidStateError,
    General,
    Mixed,
    MeasureReport,
    Opt,
    Plus,
    Pure,
    QubitState,
    VACUUM,
    family_state,
    from_measures_d_tau,
    make_state,
    plus_coherence,
    purity,
)


def test_matrix_layout():
    m = QubitState(0.5, 0.25 + 0.1j).matrix
    assert m[0, 0] == 0.5 and m[1, 1] == 0.5
    assert m[0, 1] == 0.25 + 0.1j and m[1, 0] == 0.25 - 0.1j


@pytest.mark.parametrize("p,x", [(-0.1, 0), (1.1, 0), (0.5, 0.6), (float("nan"), 0), (0.0, 1e-3)])
def test_invalid_parameters_rejected(p, x):
    with pytest.raises(InvalidStateError):
        QubitState(p, x)


def test_slack_clamps_onto_boundary_keeping_phase():
    bound = math.sqrt(0.25)
    s = QubitState(0.5, (bound + 1e-13) * 1j)
    assert s.abs_x == pytest.approx(bound, abs=0)
    assert abs(s.x.real) < 1e-15 and s.x.imag > 0
    with pytest.raises(InvalidStateError):
        QubitState(0.5, bound + 10 * PSD_SLACK)


def test_families():
    assert family_state(Pure(0.5)) == QubitState(0.5, 0.5)
    assert family_state(Mixed(0.8)) == QubitState(0.8, 0.0)
    assert family_state(General(0.5, 0.25)) == make_state(0.5, 0.25)
    assert family_state(Plus(1.0, 1.0)) == QubitState(1.0, 0.0)
    opt = family_state(Opt(0.5))
    assert opt.p == pytest.approx(0.5) and opt.abs_x < 1e-6


def test_plus_coherence_depth():
    for n in range(1, 7):
        eps = 10.0**-n
        s = QubitState(eps, plus_coherence(0.5, eps))
        tau = s.p**2 / (s.p - s.abs_x**2)
        assert tau == pytest.approx(1 / (2 - eps), rel=1e-9)


@pytest.mark.parametrize("tau0,eps", [(0.0, 0.1), (1.2, 0.1), (0.5, 0.0), (0.5, 1.5)])
def test_plus_coherence_rejects(tau0, eps):
    with pytest.raises(InvalidStateError):
        plus_coherence(tau0, eps)


def test_plus_coherence_rejects_large_eps():
    # 1 + eps - eps/tau0 < 0 for tau0 = 0.1, eps = 0.5
    with pytest.raises(InvalidStateError):
        plus_coherence(0.1, 0.5)


def test_from_measures_inverts():
    s = from_measures_d_tau(0.5, 4 / 7)
    assert s.p == 0.5 and s.abs_x == pytest.approx(0.25, abs=1e-15)
    with pytest.raises(InvalidStateError):
        from_measures_d_tau(0.6, 0.5)


def test_purity_bounds():
    assert purity(VACUUM) == 1.0
    assert purity(QubitState(0.5, 0)) == 0.5


@given(qubit_states())
def test_state_is_psd_unit_trace(s):
    ev = s.eigenvalues()
    assert ev.min() >= -1e-12
    assert np.trace(s.matrix).real == pytest.approx(1.0, abs=1e-15)
    assert 0.5 - 1e-12 <= purity(s) <= 1 + 1e-12


@given(qubit_states())
def test_with_phase_keeps_modulus(s):
    t = s.with_phase(1.234)
    assert t.p == s.p
    assert t.abs_x == pytest.approx(s.abs_x, abs=1e-15)


def test_report_as_dict():
    r = MeasureReport(QubitState(0.5, 0.25), 4 / 7, 0.5, 0.5, 0.266, {"a": 0.0})
    d = r.as_dict()
    assert d["tau"] == 4 / 7 and d["cross_check_residuals"] == {"a": 0.0}


@given(qubit_states(min_p=1e-3))
def test_measure_round_trip(s):
    from nonclassical.distance import nonclassical_distance
    from nonclassical.qpd import depth_analytic

    tau = depth_analytic(s).tau
    back = from_measures_d_tau(nonclassical_distance(s), tau)
    assert back.p == pytest.approx(s.p, abs=1e-10)
    # |x| = sqrt(D - D^2/tau) loses half its digits near x = 0, so compare |x|^2
    assert back.abs_x**2 == pytest.approx(s.abs_x**2, abs=1e-10)
    assert nonclassical_distance(back) == pytest.approx(s.p, abs=1e-10)
    assert depth_analytic(back).tau == pytest.approx(tau, abs=1e-10)


def test_family_purity():
    assert purity(family_state(Pure(0.37))) == pytest.approx(1.0, abs=1e-15)
    assert family_state(Mixed(0.37)).abs_x == 0.0
