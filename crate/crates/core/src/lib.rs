//! Lattice sums, complex band structures, collective decay rates and
//! single-excitation dynamics for 1D/2D/3D cubic lattices of two-level
//! atoms coupled through a scalar photon field.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: complex special functions (E1, erfc/erfcx, theta3, ln Gamma).
//! * [`greens`]: Green's function of `sqrt(-Laplacian) - k`.
//! * [`latticesum`]: the lattice sum `S(alpha, beta)` by closed form (1D),
//!   theta-function integrals plus Ewald summation (any d), and brute-force oracles.
//! * [`bands`]: pole-equation solver, pole approximation, Brillouin-zone sweeps
//!   and decay-rate scans.
//! * [`dynamics`]: wavepacket evolution from the atom-like band.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bands;
pub mod dynamics;
pub mod error;
pub mod greens;
pub mod latticesum;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub use bands::{
    band_sweep, bragg_resonances, bz_path, decay_rate_1d, decay_vs_spacing, gamma0,
    lattice_resonances, pole_approximation, pole_equation_residual, solve_band, BandStructure,
    ComplexEnergy, ModelParams, Path, PathPoint,
};
pub use dynamics::{
    evolve_wavepacket, frame_norm, momentum_propagator, spatial_profile, BandSource,
    DynamicsOptions, InitialState, SpatialProfile, TimeGrid, TimeUnit, WavepacketFrame,
    WavepacketRun,
};
pub use greens::{greens_function, GreensArgs};
pub use latticesum::{
    a_series_oracle, direct_sum_oracle, lattice_sum, lattice_sum_1d, s1_theta_integral,
    s2_theta_integral, s3_ewald, BlochMomentum, EwaldConfig, LatticeSum, QuadScheme,
};
