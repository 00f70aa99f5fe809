"""Seeded random sampling of single-qubit states and their measure-pair clouds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from nonclassical.measures import panel_coordinates
from nonclassical.state import QubitState

LAWS = ("uniform_pxr", "uniform_purity")
CHUNK = 8192


@dataclass(frozen=True)
class SamplerConfig:
    """``uniform_pxr``: p, r uniform on [0, 1] and a uniform phase, with
    x = r sqrt(p(1-p)) e^{i phi}. ``uniform_purity``: Bloch vector with uniform
    direction and r^2 uniform, so the purity (1 + r^2)/2 is uniform on [1/2, 1].
    """

    n_states: int
    seed: int = 0
    measure: str = "uniform_pxr"

    def __post_init__(self):
        if int(self.n_states) < 1:
            raise ValueError(f"n_states={self.n_states} must be >= 1")
        if self.measure not in LAWS:
            raise ValueError(f"unknown sampling law {self.measure!r}; choose from {LAWS}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _draw(rng: np.random.Generator, n: int, law: str):
    if law == "uniform_pxr":
        p = rng.random(n)
        r = rng.random(n)
        phi = rng.random(n) * 2.0 * np.pi
        x = r * np.sqrt(p * (1.0 - p)) * np.exp(1j * phi)
        return p, x
    r = np.sqrt(rng.random(n))
    cos_t = 2.0 * rng.random(n) - 1.0
    sin_t = np.sqrt(1.0 - cos_t**2)
    phi = rng.random(n) * 2.0 * np.pi
    rx, ry, rz = r * sin_t * np.cos(phi), r * sin_t * np.sin(phi), r * cos_t
    p = 0.5 * (1.0 - rz)
    x = 0.5 * (rx - 1j * ry)
    # guard the PSD bound against rounding
    bound = np.sqrt(np.maximum(p * (1.0 - p), 0.0))
    ax = np.abs(x)
    x = np.where(ax > bound, x * (bound / np.where(ax > 0, ax, 1.0)), x)
    return p, x


def sample_arrays(cfg: SamplerConfig) -> tuple[np.ndarray, np.ndarray]:
    """Populations and coherences of ``cfg.n_states`` random states.

    Chunk k always uses the k-th child of SeedSequence(seed), so the output
    depends only on the config, whatever order chunks are produced in.
    """
    n = int(cfg.n_states)
    n_chunks = -(-n // CHUNK)
    seqs = np.random.SeedSequence(int(cfg.seed)).spawn(n_chunks)
    ps, xs = [], []
    for k, seq in enumerate(seqs):
        m = min(CHUNK, n - k * CHUNK)
        p, x = _draw(np.random.default_rng(seq), m, cfg.measure)
        ps.append(p)
        xs.append(x)
    return np.concatenate(ps), np.concatenate(xs)


def sample_states(cfg: SamplerConfig) -> list[QubitState]:
    p, x = sample_arrays(cfg)
    return [QubitState(float(a), complex(b)) for a, b in zip(p, x)]


def region_cloud(cfg: SamplerConfig, panel: str) -> np.ndarray:
    """(n, 4) array of abscissa, ordinate, p, |x| for the sampled states."""
    p, x = sample_arrays(cfg)
    ab, od = panel_coordinates(panel, p, x)
    return np.column_stack([ab, od, p, np.abs(x)])
