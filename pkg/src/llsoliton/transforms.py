"""Exact maps between the three formulations.

spin (m1,m2,m3)  <->  hydrodynamical (v,w)  <->  Schroedinger variable Psi.

The hydrodynamical chart needs the in-plane part mc = m1 + i m2 to stay away
from zero; v = m3 and w is the branch-free phase derivative
Im(conj(mc) dx mc)/|mc|^2.  The Schroedinger variable is

    Psi = (1/2) (dx v/sqrt(1-v^2) + i sqrt(1-v^2) w) exp(i theta),
    theta(x) = -int_{-L}^x v w,

with the nonlocal primitive F(v,Psi)(x) = int_{-L}^x v Psi.  The left grid
edge stands in for -infinity; the tail of v*w is exponentially small there.

Key algebraic facts used (and tested) here:
    2 F(v,Psi) = 1 - sqrt(1-v^2) exp(i theta)
    dx v = 2 Re(Psi conj(1-2F))          (the curvature constraint)
    w    = 2 Im(Psi conj(1-2F))/(1-v^2)  (reconstruction)
    4|Psi|^2 + v^2 = 2 * energy density.

The reconstruction and the constraint both carry conj(1-2F) = 1-2F(v,conj Psi);
writing them with F(v,Psi) unconjugated does not close the round trip.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid, HydroPair
from .soliton import SpinField


class VanishingPlanePartError(ValueError):
    """m1 + i m2 vanishes somewhere: hydrodynamical chart unavailable."""


class VCeilingError(ValueError):
    """max|v| >= 1: hydrodynamical state invalid."""


@dataclass(frozen=True)
class PsiState:
    """Schroedinger variable Psi together with the v it is coupled to.

    alpha records the seam gauge: Psi exp(i alpha x) is the periodic
    continuation of Psi across the box (the phase of Psi winds by the
    conserved momentum -P over the line, so alpha = P/(2L) glues the ends).
    Integrators use it to keep the Fourier kinetic step seam-free; all
    physical formulas act on Psi itself.
    """

    psi: np.ndarray
    v: np.ndarray
    alpha: float = 0.0


def _require_subunit(v: np.ndarray):
    if np.max(np.abs(v)) >= 1.0:
        raise VCeilingError(f"max|v| = {np.max(np.abs(v)):.6f} >= 1")


def spin_to_hydro(grid: Grid, m: SpinField) -> HydroPair:
    """(v, w) = (m3, dx arg(mc)) with the branch-free phase derivative."""
    mc = m.mcheck
    mod2 = np.abs(mc) ** 2
    if np.min(mod2) <= 0.0:
        raise VanishingPlanePartError("in-plane component vanishes on the grid")
    dmc = grid.derivative(mc, 1, antiperiodic=m.winding % 2 == 1)
    w = np.imag(np.conj(mc) * dmc) / mod2
    return HydroPair(m.m3.copy(), w)


def hydro_to_spin(grid: Grid, p: HydroPair, phase_at_origin: float = 0.0) -> SpinField:
    """Rebuild the unit-sphere field with phase phi(x) = phi(0) + int_0^x w."""
    _require_subunit(p.v)
    prim = grid.cumulative(p.w)
    i0 = int(np.argmin(np.abs(grid.x)))
    phi = phase_at_origin + prim - prim[i0]
    amp = np.sqrt(1.0 - p.v**2)
    total = grid.integrate(p.w)
    winding = int(np.rint(total / np.pi))
    return SpinField(amp * np.cos(phi), amp * np.sin(phi), p.v.copy(), winding)


def hydro_to_psi(grid: Grid, p: HydroPair) -> PsiState:
    """Madelung-type map; theta accumulates from the left grid edge."""
    _require_subunit(p.v)
    theta = -grid.cumulative(p.v * p.w)
    dv = grid.derivative(p.v, 1)
    amp = np.sqrt(1.0 - p.v**2)
    psi = 0.5 * (dv / amp + 1j * amp * p.w) * np.exp(1j * theta)
    alpha = float(grid.integrate(p.v * p.w)) / (2.0 * grid.L)
    return PsiState(psi, p.v.copy(), alpha)


def F_integral(grid: Grid, v: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """F(v, psi)(x) = int_{-L}^x v psi, cumulative spectral quadrature."""
    return grid.cumulative(v * psi)


def psi_to_w(grid: Grid, s: PsiState) -> np.ndarray:
    """w = 2 Im(Psi conj(1 - 2F(v,Psi)))/(1 - v^2)."""
    _require_subunit(s.v)
    B = 1.0 - 2.0 * F_integral(grid, s.v, s.psi)
    return 2.0 * np.imag(s.psi * np.conj(B)) / (1.0 - s.v**2)


def psi_to_hydro(grid: Grid, s: PsiState) -> HydroPair:
    return HydroPair(s.v.copy(), psi_to_w(grid, s))


def constraint_residual(grid: Grid, s: PsiState, window_center: float | None = None,
                        window_halfwidth: float | None = None) -> float:
    """Max-norm of dx v - 2 Re(Psi conj(1-2F)), the coupled-system constraint.

    With a window, the max is taken on |x - center| <= halfwidth (periodic
    distance): the sponge measure that discounts radiation re-entering at the
    seam, where the line identity cannot glue."""
    B = 1.0 - 2.0 * F_integral(grid, s.v, s.psi)
    res = np.abs(grid.derivative(s.v, 1) - 2.0 * np.real(s.psi * np.conj(B)))
    if window_center is None:
        return float(np.max(res))
    half = window_halfwidth if window_halfwidth is not None else grid.L / 2.0
    dist = np.abs((grid.x - window_center + grid.L) % (2.0 * grid.L) - grid.L)
    return float(np.max(res[dist <= half]))


def bump_center(grid: Grid, v: np.ndarray) -> float:
    """Wrap-safe location of the v^2 mass (first Fourier-mode phase)."""
    z = np.sum(v * v * np.exp(1j * np.pi * grid.x / grid.L))
    return float(np.angle(z) * grid.L / np.pi)


def phase_identity_residual(grid: Grid, p: HydroPair) -> float:
    """Max-norm of 2F(v,Psi) - (1 - sqrt(1-v^2) exp(i theta)) after the map."""
    s = hydro_to_psi(grid, p)
    theta = -grid.cumulative(p.v * p.w)
    F = F_integral(grid, s.v, s.psi)
    res = 2.0 * F - (1.0 - np.sqrt(1.0 - p.v**2) * np.exp(1j * theta))
    return float(np.max(np.abs(res)))


def psi_energy(grid: Grid, s: PsiState) -> float:
    """E expressed through Psi:  (1/2) int (4 |Psi|^2 + v^2)."""
    return float(0.5 * grid.integrate(4.0 * np.abs(s.psi) ** 2 + s.v**2))
