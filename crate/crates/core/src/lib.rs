//! Two-qubit gates from an anisotropic Heisenberg (XXZ) interaction period
//! followed by individually addressed pulsed fields.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the synthesizer and the CLI use.

pub mod error;
pub mod gate_catalog;
pub mod lattice;
pub mod protocol;
pub mod quantum_core;
pub mod scalar;
pub mod synthesizer;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type Matrix2f64 = quantum_core::Matrix2<f64>;
pub type Matrix4f64 = quantum_core::Matrix4<f64>;
pub type Unitary = quantum_core::Unitary4<f64>;
pub type UnitaryF32 = quantum_core::Unitary4<f32>;
pub type Coupling = protocol::CouplingParams<f64>;
pub type Pulse = protocol::PulseSpec<f64>;
pub type Params = protocol::ProtocolParams<f64>;
pub type ParamsF32 = protocol::ProtocolParams<f32>;
pub type Gate = gate_catalog::NamedGate<f64>;
pub type Lattice = lattice::LatticeConfig<f64>;
pub type Couplings = lattice::EffectiveCouplings<f64>;
