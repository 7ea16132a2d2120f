"""Reproducible perturbations of the hydrodynamical pair.

Shapes are normalized to unit X-norm and then scaled, so halving the
requested amplitude halves the perturbation exactly -- the scaling tests
rely on that linearity.  Random shapes draw their coefficients from the
counter-based Philox generator (numpy), which produces identical streams for
a given seed on every platform.
"""

from __future__ import annotations

import numpy as np

from .grid import Grid, HydroPair, norm_x


def _zero_mean_w(grid: Grid, w: np.ndarray, envelope: np.ndarray) -> np.ndarray:
    """Remove the mean of the w-perturbation by an envelope-shaped correction.

    int w sets the in-plane phase winding of the spin field across the box;
    keeping the perturbation mean-free leaves the winding at exactly pi, so
    the spin/psi representations stay seam-free.  The flow conserves int w,
    so the property persists.
    """
    return w - envelope * (grid.integrate(w) / grid.integrate(envelope))


def bump_pair(grid: Grid, amplitude: float, width: float = 3.0,
              center: float = 0.0) -> HydroPair:
    """Deterministic smooth bump in both components, unit X-norm times amplitude."""
    g = np.exp(-((grid.x - center) / width) ** 2)
    g2 = np.exp(-((grid.x - center) / (0.7 * width)) ** 2)
    shape = HydroPair(g, _zero_mean_w(grid, 0.5 * g2, g))
    return (amplitude / norm_x(grid, shape)) * shape


def random_pair(grid: Grid, seed: int, amplitude: float, width: float = 6.0,
                center: float = 0.0, n_modes: int = 5) -> HydroPair:
    """Seeded smooth random shape: a few Fourier modes under a Gaussian
    envelope, in both components."""
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    env = np.exp(-((grid.x - center) / width) ** 2)
    y = grid.x - center
    fields = []
    for _ in range(2):
        f = np.zeros_like(grid.x)
        for j in range(1, n_modes + 1):
            amp_c, amp_s = rng.normal(size=2)
            f += amp_c * np.cos(0.35 * j * y) + amp_s * np.sin(0.35 * j * y)
        fields.append(f * env)
    shape = HydroPair(fields[0], _zero_mean_w(grid, fields[1], env))
    return (amplitude / norm_x(grid, shape)) * shape


def perturbed_soliton(grid: Grid, c: float, a: float, kind: str, amplitude: float,
                      seed: int | None = None, width: float | None = None) -> HydroPair:
    """Q_{c,a} plus the requested perturbation, centered on the soliton."""
    from .soliton import soliton_hydro

    q = soliton_hydro(c, a, grid)
    if kind == "none" or amplitude == 0.0:
        return q
    if kind == "bump":
        d = bump_pair(grid, amplitude, width=width or 3.0, center=a)
    elif kind == "random":
        if seed is None:
            raise ValueError("random perturbation requires a seed")
        d = random_pair(grid, seed, amplitude, width=width or 6.0, center=a)
    else:
        raise ValueError(f"unknown perturbation kind {kind!r}")
    return q + d
