"""Discrete and continuum magnetostatics of chains and rings of
spherical dipole magnets."""

from .errors import (BoundaryLayerError, ConstraintFailureError,
                     DivergentFunctionalError, InvalidParameterError,
                     IOFailureError, MagchainError, NonConvergenceError,
                     NumericalFailureError, SingularEvaluationError)
from .geometry import (ChainConfig, ContinuumCurve, MagnetSpec,
                       RingPerturbation, ValidationReport,
                       build_circular_ring, build_perturbed_ring,
                       build_straight_chain, chain_gaps, make_curve,
                       read_chain_csv, ring_radius, validate_chain,
                       write_chain_csv)
from .discrete import (dipole_field_at, energy_scale, optimize_orientations,
                       orientation_gradient, per_magnet_energy,
                       redimensionalize, regularized_field_at, total_energy,
                       total_field_at)
from .continuum import (EULER_GAMMA, ZETA3, EnergyBreakdown, LatticeSumValue,
                        PhiAmplitudes, continuum_field, continuum_total_energy,
                        energy_density, finite_part_integral, lattice_sum,
                        phi_amplitudes, regularized_limit,
                        ring_energy_closed_form, ring_reduction_integral)
from .ring import (KernelId, ModeSpectrum, discrete_mode_frequency, e_loc,
                   e_nonloc, e_tot_functional, kernel_double_integral,
                   kernel_eval, kernel_identity_residual, mode_frequencies)

__version__ = "0.1.0"
