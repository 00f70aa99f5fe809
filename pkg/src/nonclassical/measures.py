"""The four measures side by side, for one state or for arrays of states."""

from __future__ import annotations

import numpy as np

from nonclassical.beamsplitter import bs_output
from nonclassical.distance import nonclassical_distance
from nonclassical.entanglement import (
    concurrence,
    concurrence_potential,
    negativity_moments,
    negativity_potential,
    negativity_potential_closed,
    negativity_potential_many,
)
from nonclassical.qpd import GridSpec, depth_analytic, depth_numeric
from nonclassical.state import MeasureReport, QubitState

PANELS = ("D_vs_tau", "NP_vs_tau", "D_vs_NP")
# (abscissa, ordinate) per panel
PANEL_AXES = {
    "D_vs_tau": ("tau", "distance"),
    "NP_vs_tau": ("tau", "negativity_potential"),
    "D_vs_NP": ("negativity_potential", "distance"),
}


def depth_many(p, x) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    q = np.abs(np.asarray(x)) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        # p / (1 - q/p) rather than p^2/(p - q): exact for mixed states
        tau = np.where(p > 0.0, p / (1.0 - q / p), 0.0)
    return np.minimum(tau, 1.0)


def measures_many(p, x) -> dict[str, np.ndarray]:
    p = np.asarray(p, dtype=float)
    return {
        "tau": depth_many(p, x),
        "distance": p.copy(),
        "concurrence_potential": p.copy(),
        "negativity_potential": negativity_potential_many(p, x),
    }


def panel_coordinates(panel: str, p, x) -> tuple[np.ndarray, np.ndarray]:
    if panel not in PANEL_AXES:
        raise ValueError(f"unknown panel {panel!r}; choose from {PANELS}")
    m = measures_many(p, x)
    ab, ord_ = PANEL_AXES[panel]
    return m[ab], m[ord_]


def measure_report(state: QubitState, numeric_depth: bool = False, grid: GridSpec = GridSpec()) -> MeasureReport:
    """All four measures with residuals between independent routes."""
    tau = depth_analytic(state).tau
    dist = nonclassical_distance(state)
    cp = concurrence_potential(state)
    out = bs_output(state)
    np_spec = negativity_potential(state, "spectral")
    residuals = {
        "np_closed_vs_spectral": abs(negativity_potential_closed(state) - np_spec),
        "np_moments_vs_spectral": abs(negativity_moments(out).value - np_spec),
        "cp_vs_concurrence": abs(concurrence(out).value - cp),
        "distance_vs_cp": abs(dist - cp),
    }
    if numeric_depth:
        residuals["depth_numeric_vs_analytic"] = abs(depth_numeric(state, grid).tau - tau)
    return MeasureReport(state, tau, dist, cp, np_spec, residuals)
