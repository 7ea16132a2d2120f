"""Numerical laboratory for dark solitons of the 1D easy-plane
Landau-Lifshitz equation: three equivalent formulations with conservative
pseudo-spectral integrators, modulation-parameter fitting, the linearized
operators and their spectral/coercivity diagnostics, and the windowed
momentum machinery of the stability analysis."""

from .grid import Grid, HydroPair, OverflowGuardError, norm_x, weighted_integral
from .soliton import (SolitonParams, SpinField, energy, energy_closed_form,
                      energy_distance, group_velocity, momentum,
                      momentum_closed_form, mu_profile, ode_residuals,
                      soliton_hydro, soliton_spin, spin_energy)
from .transforms import (PsiState, F_integral, hydro_to_psi, hydro_to_spin,
                         psi_to_w, spin_to_hydro)
from .dynamics import (IntegratorConfig, TrajectoryRecord, evolve, fitted_speed,
                       step_hll, step_ll, step_psi_system)
from .modulation import (ModulationError, ModulationState, decompose, track,
                         u_star, virial_combined, virial_matrix, virial_position)
from .spectral import (EigenResult, OperatorMatrix, SpectralError, assemble_Hc,
                       assemble_Tc, chi_decay, coercivity_Gc, coercivity_Hc,
                       essential_edge_numeric, form_Gc, form_Kc, matrix_Mc,
                       negative_eigenpair, resolve_mc_reading, spectral_grid,
                       tau_edge)
from .diagnostics import (CutoffProfile, bump_window, decay_scan,
                          momentum_window, monotonicity_audit, phase_extract)
from .perturbations import bump_pair, perturbed_soliton, random_pair

__version__ = "0.1.0"
