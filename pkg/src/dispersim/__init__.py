"""Dispersion forces for planar magneto-electric multilayers and atoms.

Casimir pressures between layer stacks, Casimir-Polder potentials and
forces on ground-state atoms, free-space van der Waals potentials, and the
dynamics of excited atoms near surfaces, all in natural units
(hbar = c = eps0 = mu0 = 1) on the imaginary frequency axis.
"""

__version__ = "0.1.0"

from .materials import (DrudeLorentzParams, Vacuum, ConstantStatic,
                        DrudeLorentz, PerfectConductor, PerfectlyPermeable,
                        epsilon_imag_axis, mu_imag_axis, epsilon_complex)
from .layers import (Layer, LayerStack, PlanarScenario, Polarization,
                     propagation_constant, reflection, free_space_green,
                     cavity_stress_kernel, atom_wall_kernel)
from .quadrature import QuadSpec, QuadResult, integrate_semiinf, \
    integrate_xi_q, matsubara_sum
from .casimir import (ZeroTemperature, FiniteTemperature, PressureResult,
                      stress_zz, casimir_pressure, matsubara_pressure,
                      perfect_mirror_pressure, plate_in_cavity_force,
                      plate_in_cavity_force_minkowski)
from .casimir_polder import (Polarizability, Magnetizability, HalfSpace,
                             Plate, Cavity, IdealMirror, AtomScenario,
                             cp_potential, cp_force,
                             cp_potential_perfect_mirror,
                             cp_retarded_halfspace_asymptote,
                             nonretarded_asymptote, thin_plate_asymptote,
                             repulsion_borderline)
from .vdw import (AtomPair, pp_potential, pm_potential, pair_potential,
                  n_atom_potential, power_law_fit,
                  pairwise_halfspace_pressure)
from .dynamics import (TwoLevelNearHalfSpace, QuasiMode, EvolutionResult,
                       surface_plasmon_frequency, solve_shift, width,
                       resonant_force, offresonant_force, evolve_weak,
                       evolve_strong, classify_regime, mode_frequencies,
                       mode_coefficients)
