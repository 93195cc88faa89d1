"""Design and simulation toolkit for a flux-modulated dc-SQUID
optomechanical microwave cavity.

Layout:

* `device` — physical parameters to derived couplings, constraint checks
  and figures of merit
* `fock` — truncated Fock-space operators, states and expectations
* `hamiltonian` — lab-frame, rotating-frame and two-mode Hamiltonians
* `lindblad` — Liouvillians, master-equation evolution, steady states,
  photon/phonon statistics, Wigner functions
* `experiments` — reproducible scenario drivers emitting reports
* `cli` — command-line front end over the scenario drivers
"""

__version__ = "0.1.0"

from .constants import BOLTZMANN, FLUX_QUANTUM, HBAR, PLANCK, TWO_PI
from .device import (BiasParameters, CavityParameters, ConstraintReport,
                     DerivedQuantities, DeviceParameters, FluxBiasError,
                     MechanicalParameters, SquidParameters,
                     WavenumberDomainError, beta_l, figures_of_merit,
                     harmonic_couplings, josephson_inductance,
                     optomechanical_coupling, parametric_coupling,
                     plasma_frequency, reference_device,
                     renormalized_cavity_frequency, solve_wavenumber,
                     thermal_occupation, validate_regime,
                     zero_point_displacement)
from .fock import (HilbertDims, QuantumOperator, QuantumState, basis_state,
                   coherent_state, create, destroy, expectation, identity,
                   mode_destroy, mode_number, number, tensor, thermal_state)
from .hamiltonian import (PeriodicHamiltonian, RwaModelSpec, build_lab_frame,
                          build_lab_frame_from_rates, build_rwa,
                          build_two_mode)
from .lindblad import (CollapseChannel, LindbladModel, SimulationResult,
                       TruncationReport, evolve, evolve_closed, fano, g2_zero,
                       liouvillian, standard_channels, steady_state,
                       truncation_converge, wigner)
from .experiments import (Report, ScaledRates, SweepSpec, blockade_scan,
                          dce_photon_generation, dpa_steady_moments,
                          dpa_transient_moments, harmonic_census,
                          reproduce_table1, sideband_demo, sweep)
