//! Interaction of a single-photon wave packet with an initially excited
//! two-level atom.
//!
//! Two routes are implemented side by side:
//!
//! * [`semiclassical`] treats the packet as a classical Gaussian pulse carrying
//!   one photon of energy and integrates the optical Bloch equations.
//! * [`ww`] is the Weisskopf–Wigner (exponential-ansatz) solution of the fully
//!   quantized one-dimensional model, refined by the [`first_order`] iteration
//!   and cross-checked by direct integration of truncated mode equations in
//!   [`modes`]. The emitted spectrum lives in [`spectrum`].
//!
//! Everything uses natural units: ħ = c = 1 and the packet's central
//! wavenumber K = 1, which puts the atom exactly on resonance (ω₀ = 1).

pub mod app;
pub mod error;
pub mod first_order;
pub mod grid;
pub mod modes;
pub mod ode;
pub mod quadrature;
pub mod semiclassical;
pub mod spectrum;
pub mod trace;
pub mod units;
pub mod ww;

pub use error::{Error, Result};
pub use grid::{FrequencyGrid, TimeGrid};
pub use quadrature::QuadratureConfig;
pub use trace::KineticsTrace;
pub use units::{AtomSpec, NaturalUnits, PacketSpec};

pub use num_complex::Complex64;
