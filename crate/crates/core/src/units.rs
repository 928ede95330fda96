//! Unit convention and the atom/packet parameter types shared by every solver.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Natural units: ħ = 1, c = 1, and the packet's central wavenumber K = 1.
///
/// With K = 1 the atomic transition frequency is ω₀ = 1, i.e. the packet is
/// resonant with the atom. Lengths and times share one unit (c = 1), and a
/// mode of wavenumber k has frequency |k|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NaturalUnits;

impl NaturalUnits {
    pub const HBAR: f64 = 1.0;
    pub const C: f64 = 1.0;
    pub const CENTER_WAVENUMBER: f64 = 1.0;
    pub const TRANSITION_FREQUENCY: f64 = 1.0;
}

/// Two-level atom. `gamma` is the amplitude decay rate; populations decay at 2γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomSpec {
    gamma: f64,
}

impl AtomSpec {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::invalid("gamma", format!("must be positive, got {gamma}")));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Probability decay rate Γ = 2γ.
    pub fn population_decay_rate(&self) -> f64 {
        2.0 * self.gamma
    }

    pub fn omega0(&self) -> f64 {
        NaturalUnits::TRANSITION_FREQUENCY
    }
}

/// Gaussian single-photon wave packet centred on K = 1.
///
/// `kappa` is the wavenumber width and `lambda` the initial displacement of the
/// packet centre. A negative displacement means the packet starts to the left
/// of the atom and arrives at `T = -lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    kappa: f64,
    lambda: f64,
}

impl PacketSpec {
    pub fn new(kappa: f64, lambda: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::invalid("kappa", format!("must be positive, got {kappa}")));
        }
        if !lambda.is_finite() {
            return Err(Error::invalid("lambda", "must be finite"));
        }
        Ok(Self { kappa, lambda })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Same packet shifted so that it arrives at `arrival`.
    pub fn with_arrival(&self, arrival: f64) -> Self {
        Self {
            kappa: self.kappa,
            lambda: -arrival,
        }
    }

    /// Same packet mirrored to positive displacement: it has already passed
    /// the atom at t = 0 and never interacts with it.
    pub fn missing(&self) -> Self {
        Self {
            kappa: self.kappa,
            lambda: self.lambda.abs(),
        }
    }

    pub fn spatial_length(&self) -> f64 {
        1.0 / self.kappa
    }

    /// Spectral width δ = cκ.
    pub fn spectral_width(&self) -> f64 {
        NaturalUnits::C * self.kappa
    }

    /// Arrival time of the packet peak at the atom, T = -Λ/c.
    pub fn arrival_time(&self) -> f64 {
        -self.lambda / NaturalUnits::C
    }

    /// Unnormalised envelope exp[-(z-1)²/(4κ²) - izΛ].
    pub fn envelope(&self, z: f64) -> Complex64 {
        let dz = z - NaturalUnits::CENTER_WAVENUMBER;
        let modulus = (-dz * dz / (4.0 * self.kappa * self.kappa)).exp();
        Complex64::from_polar(modulus, -z * self.lambda)
    }
}

/// Continuum amplitude ψ(k) normalised so that ∫|ψ(k)|² dk = 1.
pub fn packet_amplitude_continuum(k: f64, packet: &PacketSpec) -> Complex64 {
    let norm = (2.0 * PI).powf(-0.25) / packet.kappa.sqrt();
    packet.envelope(k) * norm
}

/// Amplitude φ_μ of the mode with wavenumber `k_mu` in a periodic box of
/// length `length`; Σ_μ |φ_μ|² → 1 for modes spaced by 2π/L.
pub fn discrete_amplitude(k_mu: f64, packet: &PacketSpec, length: f64) -> Result<Complex64> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::invalid("length", format!("must be positive, got {length}")));
    }
    Ok(packet.envelope(k_mu) * ((2.0 * PI).powf(0.25) / (packet.kappa * length).sqrt()))
}
