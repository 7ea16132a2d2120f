"""Closed-form dark-soliton profiles and their conserved functionals.

A soliton with speed c in (-1,1)\\{0} is, in hydrodynamical variables,

    v_c(x) = sqrt(1-c^2) / cosh(sqrt(1-c^2) x),   w_c = c v_c / (1 - v_c^2),

and in spin variables (m1 + i m2, m3) = (c sech + i tanh, v_c) of the same
argument.  The black soliton c = 0 is excluded: its in-plane part vanishes
and the hydrodynamical picture breaks down.

Everything here is an exact-answer oracle: profiles, their x- and
c-derivatives, the energy E and momentum P (with closed forms E = 2 kappa,
P = 2 arctan(kappa/c)), the travelling-wave ODE identities, and the profile
mu_c entering the localized quadratic form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid, HydroPair


class SpeedError(ValueError):
    """Speed outside (-1,1)\\{0}."""


def _check_speed(c: float) -> float:
    if not (0.0 < abs(c) < 1.0):
        raise SpeedError(f"soliton speed must satisfy 0 < |c| < 1, got {c}")
    return float(c)


def kappa_of(c: float) -> float:
    """Inverse width sqrt(1 - c^2)."""
    return float(np.sqrt(1.0 - c * c))


@dataclass(frozen=True)
class SolitonParams:
    """Speed c, position a, and spin-frame rotation phi about the x3 axis."""

    c: float
    a: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        _check_speed(self.c)


@dataclass(frozen=True)
class SpinField:
    """Unit-sphere field (m1, m2, m3); winding counts half-turns of m1+i*m2
    across the box (1 for a single dark soliton, 0 for near-constant data)."""

    m1: np.ndarray
    m2: np.ndarray
    m3: np.ndarray
    winding: int = 0

    @property
    def mcheck(self) -> np.ndarray:
        return self.m1 + 1j * self.m2

    def norm_deviation(self) -> float:
        return float(np.max(np.abs(self.m1**2 + self.m2**2 + self.m3**2 - 1.0)))

    def rotated(self, angle: float) -> "SpinField":
        ca, sa = np.cos(angle), np.sin(angle)
        return SpinField(ca * self.m1 - sa * self.m2,
                         sa * self.m1 + ca * self.m2, self.m3, self.winding)


# -- profiles -----------------------------------------------------------------


def soliton_hydro(c: float, a: float, grid: Grid) -> HydroPair:
    """Hydrodynamical soliton pair Q_{c,a}; the shift wraps periodically."""
    _check_speed(c)
    k = kappa_of(c)
    y = _wrap(grid, grid.x - a)
    v = k / np.cosh(k * y)
    return HydroPair(v, c * v / (1.0 - v * v))


def soliton_spin(params: SolitonParams, grid: Grid) -> SpinField:
    """Spin soliton, rotated by phi about x3 and translated to a.

    |m| = 1 holds nodewise by the identity c^2 sech^2 + tanh^2 + (1-c^2) sech^2 = 1.
    """
    k = kappa_of(params.c)
    y = _wrap(grid, grid.x - params.a)
    sech = 1.0 / np.cosh(k * y)
    base = SpinField(params.c * sech, np.tanh(k * y), k * sech, winding=1)
    return base.rotated(params.phi)


def _wrap(grid: Grid, y: np.ndarray) -> np.ndarray:
    return (y + grid.L) % (2.0 * grid.L) - grid.L


def d_dx_soliton(c: float, a: float, grid: Grid) -> HydroPair:
    """Analytic x-derivative of Q_{c,a}."""
    _check_speed(c)
    k = kappa_of(c)
    y = _wrap(grid, grid.x - a)
    v = k / np.cosh(k * y)
    dv = -k * k / np.cosh(k * y) * np.tanh(k * y)
    dw = c * dv * (1.0 + v * v) / (1.0 - v * v) ** 2
    return HydroPair(dv, dw)


def d_dc_soliton(c: float, a: float, grid: Grid) -> HydroPair:
    """Analytic speed derivative of Q_{c,a} (differentiate kappa by hand;
    avoids the cancellation a finite difference in c would suffer)."""
    _check_speed(c)
    k = kappa_of(c)
    y = _wrap(grid, grid.x - a)
    sech = 1.0 / np.cosh(k * y)
    v = k * sech
    dkdc = -c / k
    dv_dc = dkdc * sech * (1.0 - k * y * np.tanh(k * y))
    dw_dc = v / (1.0 - v * v) + c * dv_dc * (1.0 + v * v) / (1.0 - v * v) ** 2
    return HydroPair(dv_dc, dw_dc)


def mu_profile(c: float, grid: Grid, a: float = 0.0) -> np.ndarray:
    """mu_c = 2 (dx v_c)^2 + v_c^2 (1 - v_c^2) = v_c^2 (3 - 2c^2 - 3 v_c^2) > 0."""
    q = soliton_hydro(c, a, grid)
    dq = d_dx_soliton(c, a, grid)
    return 2.0 * dq.v**2 + q.v**2 * (1.0 - q.v**2)


# -- conserved functionals -----------------------------------------------------


def energy(grid: Grid, p: HydroPair) -> float:
    """E = (1/2) int [ (dx v)^2/(1-v^2) + (1-v^2) w^2 + v^2 ]."""
    if p.max_v >= 1.0:
        raise ValueError("energy density singular: max|v| >= 1")
    dv = grid.derivative(p.v, 1)
    dens = dv * dv / (1.0 - p.v**2) + (1.0 - p.v**2) * p.w**2 + p.v**2
    return float(0.5 * grid.integrate(dens))


def momentum(grid: Grid, p: HydroPair) -> float:
    """P = int v w."""
    return float(grid.integrate(p.v * p.w))


def spin_energy(grid: Grid, m: SpinField) -> float:
    """E(m) = (1/2) int (|dx m|^2 + m3^2), winding-aware derivatives."""
    ap = m.winding % 2 == 1
    d1 = grid.derivative(m.m1, 1, antiperiodic=ap)
    d2 = grid.derivative(m.m2, 1, antiperiodic=ap)
    d3 = grid.derivative(m.m3, 1)
    return float(0.5 * grid.integrate(d1 * d1 + d2 * d2 + d3 * d3 + m.m3**2))


def energy_closed_form(c: float) -> float:
    """E(Q_c) = 2 sqrt(1 - c^2); the density reduces to v_c^2 on the soliton."""
    _check_speed(c)
    return 2.0 * kappa_of(c)


def momentum_closed_form(c: float) -> float:
    """P(Q_c) = 2 arctan(sqrt(1-c^2)/c), odd in c."""
    _check_speed(c)
    return float(2.0 * np.arctan(kappa_of(c) / c))


# -- travelling-wave identities -------------------------------------------------


def ode_residuals(c: float, grid: Grid) -> tuple[float, float, float]:
    """Max-norm residuals of the three soliton ODE identities under the
    discrete derivative:

        dxx v = (1 - c^2 - 2 v^2) v
        (dx v)^2 = (1 - c^2 - v^2) v^2
        v dxx v - (dx v)^2 + v^4 = 0

    The third is dx(dx v / v) = -v^2 cleared of the division by v, which
    would otherwise amplify roundoff in the exponential tails.
    """
    q = soliton_hydro(c, 0.0, grid)
    v = q.v
    dv = grid.derivative(v, 1)
    d2v = grid.derivative(v, 2)
    r1 = float(np.max(np.abs(d2v - (1.0 - c * c - 2.0 * v * v) * v)))
    r2 = float(np.max(np.abs(dv * dv - (1.0 - c * c - v * v) * v * v)))
    r3 = float(np.max(np.abs(v * d2v - dv * dv + v**4)))
    return r1, r2, r3


def first_variation_residual(c: float, grid: Grid) -> float:
    """Max-norm of (dE - c dP)(Q_c): travelling-wave criticality.

    dE/dv = -dx(dx v/(1-v^2)) + v (dx v)^2/(1-v^2)^2 - v w^2 + v
    dE/dw = (1-v^2) w,   dP = (w, v).
    """
    q = soliton_hydro(c, 0.0, grid)
    v, w = q.v, q.w
    dv = grid.derivative(v, 1)
    grad_v = (-grid.derivative(dv / (1.0 - v * v), 1)
              + v * dv * dv / (1.0 - v * v) ** 2 - v * w * w + v)
    grad_w = (1.0 - v * v) * w
    res_v = grad_v - c * w
    res_w = grad_w - c * v
    return float(max(np.max(np.abs(res_v)), np.max(np.abs(res_w))))


def group_velocity(k: float | np.ndarray):
    """Dispersive group velocity (1 + 2k^2)/sqrt(1 + k^2) >= 1 (positive branch)."""
    k2 = np.asarray(k, dtype=float) ** 2
    out = (1.0 + 2.0 * k2) / np.sqrt(1.0 + k2)
    return float(out) if np.isscalar(k) else out


def energy_distance(grid: Grid, f: SpinField, g: SpinField) -> float:
    """d_E(f,g) = |fc(0)-gc(0)| + ||f' - g'||_L2 + ||f3 - g3||_L2,
    with fc = f1 + i f2 evaluated at the node nearest x = 0."""
    i0 = int(np.argmin(np.abs(grid.x)))
    point = abs(f.mcheck[i0] - g.mcheck[i0])
    apf = f.winding % 2 == 1
    apg = g.winding % 2 == 1
    diffs = 0.0
    for comp, ap_each in (("m1", True), ("m2", True), ("m3", False)):
        df = grid.derivative(getattr(f, comp), 1, antiperiodic=apf and ap_each)
        dg = grid.derivative(getattr(g, comp), 1, antiperiodic=apg and ap_each)
        diffs += grid.integrate((df - dg) ** 2)
    grad = np.sqrt(diffs)
    third = np.sqrt(grid.integrate((f.m3 - g.m3) ** 2))
    return float(point + grad + third)


def default_half_length(c: float, floor: float = 30.0) -> float:
    """L with exp(-kappa L) < 1e-12: keeps wrap-around below quadrature tolerance."""
    return max(floor, 30.0 / kappa_of(c))
