import math

import pytest
from hypothesis import given

from conftest import qubit_states
from nonclassical.distance import (
    bures_distance_sq,
    fidelity_qubit,
    half_bures_sq_to_vacuum,
    nonclassical_distance,
)
from nonclassical.state import Mixed, Pure, QubitState, VACUUM, family_state


@given(qubit_states(), qubit_states())
def test_fidelity_symmetric_and_bounded(a, b):
    f = fidelity_qubit(a, b)
    assert 0.0 <= f <= 1.0
    assert f == pytest.approx(fidelity_qubit(b, a), abs=1e-14)


@given(qubit_states())
def test_fidelity_with_vacuum_and_self(s):
    assert fidelity_qubit(s, VACUUM) == pytest.approx(1 - s.p, abs=1e-14)
    assert fidelity_qubit(s, s) == pytest.approx(1.0, abs=1e-9)
    assert nonclassical_distance(s) == pytest.approx(s.p, abs=1e-14)


def test_distance_reference_values():
    assert nonclassical_distance(family_state(Mixed((math.sqrt(6) - 1) / 2))) == pytest.approx((math.sqrt(6) - 1) / 2)
    assert nonclassical_distance(family_state(Pure(0.5))) == pytest.approx(0.5)
    assert nonclassical_distance(VACUUM) == 0.0


def test_half_bures_diagnostic_differs():
    s = QubitState(0.5, 0.0)
    assert half_bures_sq_to_vacuum(s) == pytest.approx(1 - math.sqrt(0.5))
    assert half_bures_sq_to_vacuum(s) != pytest.approx(nonclassical_distance(s))
    assert bures_distance_sq(s, s) == pytest.approx(0.0, abs=1e-9)
