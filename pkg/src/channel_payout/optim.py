"""Shared plumbing for the multistart optimizers.

Deterministic RNG splitting (one independent stream per restart derived
from a single seed), Euclidean projection onto the probability simplex,
and area-uniform sphere sampling.  Everything here is pure and safe to
call from parallel restarts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class OptimizerConfig:
    """Budget and determinism knobs shared by all multistart optimizers."""

    restarts: int = 64
    max_iterations: int = 2000
    tolerance: float = 1e-8
    rng_seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")

    def scaled(self, factor: int) -> "OptimizerConfig":
        """Same config with the restart budget multiplied by `factor`."""
        return OptimizerConfig(self.restarts * factor, self.max_iterations,
                               self.tolerance, self.rng_seed)


def spawn_rngs(seed: int, n: int) -> list[np.random.Generator]:
    """n independent generators split deterministically from one seed.

    Restart i always receives the same stream for a fixed seed, no
    matter how many restarts run or in which order, so a parallel
    max-reduction over restarts matches the sequential result bit for
    bit.
    """
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def project_simplex(v: np.ndarray, total: float = 1.0) -> np.ndarray:
    """Euclidean projection of v onto {p : p >= 0, sum p = total}."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - total
    idx = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / idx > 0)[0]
    if rho.size == 0:
        # degenerate input (e.g. all equal and far negative): uniform point
        return np.full_like(v, total / v.size)
    theta = css[rho[-1]] / (rho[-1] + 1)
    return np.maximum(v - theta, 0.0)


def sphere_points(rng: np.random.Generator, n: int) -> np.ndarray:
    """n area-uniform points on the unit sphere, shape (n, 3)."""
    z = rng.uniform(-1.0, 1.0, size=n)
    phi = rng.uniform(0.0, 2.0 * np.pi, size=n)
    s = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    return np.column_stack((s * np.cos(phi), s * np.sin(phi), z))


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random 3x3 rotation via QR of a Gaussian matrix."""
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q *= np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
