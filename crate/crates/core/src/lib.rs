//! Spectral diagnostics for shear-enhanced dissipation in decaying
//! two-dimensional turbulence.
//!
//! A large-scale linear shear distorts fluid eddies, sweeps their
//! wavevectors to high |k| and lets molecular viscosity destroy them far
//! faster than plain diffusion would. This crate provides the analytic
//! machinery for that process together with numerical oracles for every
//! closed form:
//!
//! * [`kinematics`] — wavevector trajectories k(t) and phase-mixing
//!   integrals Q(t) for zonal, hyperbolic, elliptic and slowly decaying
//!   shear flows;
//! * [`spectra`] — evolved power spectra and the mean-square vorticity
//!   ⟨ω²⟩(t) for δ-function, constant, Gaussian and anisotropic initial
//!   spectra, with a quadrature oracle and the enstrophy-balance check;
//! * [`gauss_pdf`] — time-dependent Gaussian vorticity PDFs;
//! * [`nongauss`] — inhomogeneous vorticity profiles and the non-Gaussian
//!   PDFs they induce under a random profile scale;
//! * [`infogeo`] — information rate ℰ(t), dynamical time τ(t) = ℰ^{-1/2},
//!   information length ℒ(t) and relative-entropy identities;
//! * [`scaling`] — effective dissipation times τ_e and their scaling in the
//!   shearing rate;
//! * [`shear3d`] — sheared 3D velocity modes and the algebraic t^{-2}
//!   quenching of the streamwise component.
//!
//! Everything is deterministic: parallel execution (the default `parallel`
//! feature) and the sequential fallback produce bit-identical results.

pub mod error;
pub mod gauss_pdf;
pub mod infogeo;
pub mod kinematics;
pub mod nongauss;
pub mod numerics;
mod par;
pub mod scaling;
pub mod shear3d;
pub mod spectra;

pub use error::{Error, Result};
pub use kinematics::{RotatedSumDiff, ShearFlow, WaveVector2};
pub use numerics::{FitResult, RealGrid1d};
pub use spectra::SpectrumModel;
