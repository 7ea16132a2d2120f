import numpy as np
import pytest
from numpy.testing import assert_allclose

from llsoliton import (Grid, SolitonParams, energy, energy_closed_form,
                       energy_distance, group_velocity, momentum,
                       momentum_closed_form, mu_profile, ode_residuals,
                       soliton_hydro, soliton_spin, spin_energy)
from llsoliton.grid import HydroPair
from llsoliton.soliton import (SpeedError, d_dc_soliton, d_dx_soliton,
                               first_variation_residual, kappa_of)
from llsoliton.spectral import spectral_grid


def test_speed_domain_enforced():
    for bad in (0.0, 1.0, -1.0, 1.3):
        with pytest.raises(SpeedError):
            SolitonParams(bad)


def test_spin_profile_values(grid40):
    m = soliton_spin(SolitonParams(0.8), grid40)
    i0 = int(np.argmin(np.abs(grid40.x)))
    assert_allclose([m.m1[i0], m.m2[i0], m.m3[i0]], [0.8, 0.0, 0.6], atol=1e-14)
    rot = soliton_spin(SolitonParams(0.8, phi=np.pi / 2), grid40)
    assert_allclose([rot.m1[i0], rot.m2[i0], rot.m3[i0]], [0.0, 0.8, 0.6], atol=1e-14)


@pytest.mark.parametrize("c,a,phi", [(0.8, 0.0, 0.0), (-0.6, 3.0, 1.1),
                                     (0.3, -5.0, -2.0), (0.95, 7.0, 4.0)])
def test_spin_unit_norm(grid40, c, a, phi):
    m = soliton_spin(SolitonParams(c, a, phi), grid40)
    assert m.norm_deviation() < 1e-14


def test_hydro_profile_values(grid40):
    q = soliton_hydro(0.8, 2.5, grid40)
    j = int(np.argmin(np.abs(grid40.x - 2.5)))
    assert q.v[j] == pytest.approx(0.6, abs=1e-12)
    assert q.w[j] == pytest.approx(0.75, abs=1e-12)
    # pointwise defining relation w (1 - v^2) = c v
    assert np.max(np.abs(q.w * (1 - q.v**2) - 0.8 * q.v)) < 1e-14
    # small-amplitude regime near |c| = 1
    q2 = soliton_hydro(0.999, 0.0, grid40)
    assert q2.max_v == pytest.approx(np.sqrt(1 - 0.999**2), abs=1e-12)


@pytest.mark.parametrize("c", [0.8, 0.3])
def test_ode_residuals(c):
    g = Grid(40.0, 1024)
    assert max(ode_residuals(c, g)) < 1e-8


def test_ode_residuals_refine_spectrally():
    # at n = 256 the residual is still discretization-limited; by n = 512 it
    # has hit the roundoff floor, so the comparison uses the steep segment
    coarse = max(ode_residuals(0.8, Grid(40.0, 128)))
    fine = max(ode_residuals(0.8, Grid(40.0, 256)))
    assert fine < coarse / 100
    assert fine < 1e-8


def test_mu_profile(grid40_fine):
    g = grid40_fine
    c = 0.8
    mu = mu_profile(c, g)
    i0 = int(np.argmin(np.abs(g.x)))
    # at the crest dx v = 0, so mu = v^2 (1 - v^2) = (1-c^2) c^2
    assert mu[i0] == pytest.approx((1 - c**2) * c**2, abs=1e-12)
    v = soliton_hydro(c, 0.0, g).v
    assert np.max(np.abs(mu - v**2 * (3 - 2 * c**2 - 3 * v**2))) < 1e-12
    assert np.all(mu > 0)
    # tail limit mu / v^2 -> 3 - 2 c^2
    tail = np.abs(g.x) > g.L / 2
    assert np.max(np.abs(mu[tail] / v[tail] ** 2 - (3 - 2 * c**2))) < 1e-9


def test_energy_momentum_zero(grid40):
    z = HydroPair(np.zeros(grid40.n), np.zeros(grid40.n))
    assert energy(grid40, z) == 0.0
    assert momentum(grid40, z) == 0.0


def test_energy_rejects_singular(grid40):
    with pytest.raises(ValueError):
        energy(grid40, HydroPair(np.ones(grid40.n), np.zeros(grid40.n)))


@pytest.mark.parametrize("c", [0.8, 0.45])
def test_energy_formulation_equivalence_and_closed_forms(grid40_fine, c):
    g = grid40_fine
    q = soliton_hydro(c, 0.0, g)
    m = soliton_spin(SolitonParams(c), g)
    assert energy(g, q) == pytest.approx(spin_energy(g, m), abs=1e-8)
    assert energy(g, q) == pytest.approx(energy_closed_form(c), abs=1e-10)
    assert momentum(g, q) == pytest.approx(momentum_closed_form(c), abs=1e-10)


def test_momentum_odd_energy_even(grid40_fine):
    g = grid40_fine
    for c in (0.3, 0.8):
        qp = soliton_hydro(c, 0.0, g)
        qm = soliton_hydro(-c, 0.0, g)
        assert momentum(g, qp) > 0
        assert momentum(g, qm) == pytest.approx(-momentum(g, qp), abs=1e-10)
        assert energy(g, qm) == pytest.approx(energy(g, qp), abs=1e-10)


@pytest.mark.parametrize("c", [0.3, 0.6, 0.8])
def test_first_variation_vanishes(c):
    g = spectral_grid(c)
    assert first_variation_residual(c, g) < 1e-8


def test_group_velocity():
    assert group_velocity(0.0) == pytest.approx(1.0)
    assert group_velocity(1.0) == pytest.approx(3 / np.sqrt(2), abs=1e-12)
    k = np.arange(-10, 10, 1e-3)
    assert group_velocity(k).min() >= 1.0


def test_energy_distance(grid40_fine):
    g = grid40_fine
    f = soliton_spin(SolitonParams(0.8), g)
    assert energy_distance(g, f, f) == 0.0
    gfield = soliton_spin(SolitonParams(0.8, a=0.01), g)
    assert energy_distance(g, f, gfield) == pytest.approx(
        energy_distance(g, gfield, f), rel=0, abs=0)
    # compose the three terms from the grid primitives as an oracle
    i0 = int(np.argmin(np.abs(g.x)))
    point = abs((f.m1[i0] + 1j * f.m2[i0]) - (gfield.m1[i0] + 1j * gfield.m2[i0]))
    acc = 0.0
    for comp, ap in (("m1", True), ("m2", True), ("m3", False)):
        df = g.derivative(getattr(f, comp), 1, antiperiodic=ap)
        dg = g.derivative(getattr(gfield, comp), 1, antiperiodic=ap)
        acc += g.integrate((df - dg) ** 2)
    oracle = point + np.sqrt(acc) + np.sqrt(g.integrate((f.m3 - gfield.m3) ** 2))
    assert energy_distance(g, f, gfield) == pytest.approx(oracle, rel=1e-12)
    assert energy_distance(g, f, gfield) > 0


def test_dc_soliton_against_central_difference(grid40_fine):
    g = grid40_fine
    c, step = 0.7, 1e-5
    an = d_dc_soliton(c, 0.0, g)
    qp = soliton_hydro(c + step, 0.0, g)
    qm = soliton_hydro(c - step, 0.0, g)
    fd_v = (qp.v - qm.v) / (2 * step)
    fd_w = (qp.w - qm.w) / (2 * step)
    assert np.max(np.abs(an.v - fd_v)) < 1e-7
    assert np.max(np.abs(an.w - fd_w)) < 1e-7


def test_dx_soliton_against_spectral(grid40_fine):
    g = grid40_fine
    q = soliton_hydro(0.8, 1.0, g)
    an = d_dx_soliton(0.8, 1.0, g)
    assert np.max(np.abs(g.derivative(q.v, 1) - an.v)) < 1e-9
    assert np.max(np.abs(g.derivative(q.w, 1) - an.w)) < 1e-9
