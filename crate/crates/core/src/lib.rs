//! Decoherence of a massive pointer that records a spin-½ measurement while
//! immersed in a classical gas.
//!
//! The crate covers the free pointer, gas-derived friction and diffusion
//! coefficients, the exact Fokker–Planck density matrix and decoherence
//! function, a random-impulse bath, and independent numerical oracles (a
//! Crank–Nicolson solver, kernel quadrature, FFT free evolution and Monte
//! Carlo) that cross-check every closed form.

pub mod cli;
pub mod config;
pub mod error;
pub mod fit;
pub mod fp_analytic;
pub mod fp_numeric;
pub mod free_pointer;
pub mod gas_bath;
pub mod quadrature;
pub mod random_field;
pub mod report;
pub mod units;
pub mod validation;

pub use error::{Error, Result};
pub use fp_analytic::{BathModel, BroadeningParts, LogGaussianForm, TimeFunctions};
pub use free_pointer::{ComplexSpread, FreePointer, ProbabilityComponents};
pub use gas_bath::{BathCoefficients, GammaBackend};
pub use units::{GasConfig, PhysicalConstants, PointerConfig, Scaling, Spin};
pub use random_field::{RandomFieldParams, RandomWalkEnsemble};
