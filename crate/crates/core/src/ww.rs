//! Zeroth-order Weisskopf–Wigner solution of the one-dimensional model.
//!
//! Under the exponential ansatz every one-photon amplitude decays as e^{-γt},
//! and the two-photon amplitudes follow in closed form. Their k-space density
//!
//! ```text
//! C(k₁,k₂;t) = (γ/κ)/√(8π³) · |ξ(k₁)χ(k₂,t) + ξ(k₂)χ(k₁,t)|²
//! ```
//!
//! integrates to twice the ground-state probability. Expanding the square
//! splits the double integral into products of one-dimensional integrals, which
//! is how [`prob_ground`] evaluates it; [`prob_ground_tensor`] keeps the
//! brute-force nested quadrature as an independent check.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::quadrature::{QuadratureConfig, Tolerance};
use crate::trace::{derivative, rate_from_flux, KineticsTrace, RateSeries};
use crate::units::{discrete_amplitude, AtomSpec, PacketSpec};

/// Time used as "t → ∞": ten population e-foldings at γ = 0.0125.
pub const ASYMPTOTIC_TIME: f64 = 400.0;

/// Populations below this are not used as a rate denominator.
pub const MIN_RATE_POPULATION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WWModel {
    pub atom: AtomSpec,
    pub packet: PacketSpec,
    pub quad: QuadratureConfig,
}

impl WWModel {
    pub fn new(atom: AtomSpec, packet: PacketSpec, quad: QuadratureConfig) -> Result<Self> {
        quad.validate(atom.gamma(), packet.kappa())?;
        Ok(Self { atom, packet, quad })
    }

    /// Default quadrature for the given atom and packet.
    pub fn with_defaults(atom: AtomSpec, packet: PacketSpec) -> Self {
        let quad = QuadratureConfig::for_model(atom.gamma(), packet.kappa());
        Self { atom, packet, quad }
    }

    pub fn gamma(&self) -> f64 {
        self.atom.gamma()
    }

    pub fn with_packet(&self, packet: PacketSpec) -> Self {
        Self { packet, ..*self }
    }

    /// Same model with the packet mirrored so that it never reaches the atom.
    pub fn missing(&self) -> Self {
        self.with_packet(self.packet.missing())
    }

    /// Prefactor (γ/κ)/√(8π³) of the two-photon density.
    pub fn density_prefactor(&self) -> f64 {
        self.gamma() / self.packet.kappa() / (8.0 * PI.powi(3)).sqrt()
    }
}

/// χ(z,t) = [1 − e^{−γt − i(1−|z|)t}] / [γ + i(1−|z|)]; `t = ∞` gives the
/// limiting value 1/[γ + i(1−|z|)].
pub fn chi(z: f64, t: f64, gamma: f64) -> Complex64 {
    let detuning = 1.0 - z.abs();
    let denom = Complex64::new(gamma, detuning);
    if t.is_infinite() {
        return 1.0 / denom;
    }
    let decay = Complex64::from_polar((-gamma * t).exp(), -detuning * t);
    (1.0 - decay) / denom
}

/// ξ(z) = exp[−(z−1)²/(4κ²) − izΛ].
pub fn xi(z: f64, packet: &PacketSpec) -> Complex64 {
    packet.envelope(z)
}

/// Two-photon probability density in k-space at time `t` (∞ allowed).
pub fn density_c(k1: f64, k2: f64, t: f64, model: &WWModel) -> f64 {
    let g = model.gamma();
    let amp = xi(k1, &model.packet) * chi(k2, t, g) + xi(k2, &model.packet) * chi(k1, t, g);
    model.density_prefactor() * amp.norm_sqr()
}

/// A computed quantity with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// The three one-dimensional integrals that make up ½∬C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparableParts {
    /// ∫|ξ|² dk
    pub envelope_mass: Estimate,
    /// ∫|χ(k,t)|² dk
    pub line_mass: Estimate,
    /// ∫ξ(k) χ̄(k,t) dk
    pub overlap: Complex64,
    pub overlap_error: f64,
}

pub fn envelope_mass(model: &WWModel) -> Result<Estimate> {
    let r = model
        .quad
        .integrate_k(|k| xi(k, &model.packet).norm_sqr(), &[])?;
    Ok(Estimate {
        value: r.value,
        error: r.error,
    })
}

pub fn line_mass(t: f64, model: &WWModel) -> Result<Estimate> {
    let g = model.gamma();
    let r = model.quad.integrate_k(|k| chi(k, t, g).norm_sqr(), &[])?;
    Ok(Estimate {
        value: r.value,
        error: r.error,
    })
}

pub fn overlap(t: f64, model: &WWModel) -> Result<(Complex64, f64)> {
    let g = model.gamma();
    let r = model
        .quad
        .integrate_k(|k| xi(k, &model.packet) * chi(k, t, g).conj(), &[])?;
    Ok((r.value, r.error))
}

fn combine(model: &WWModel, env: Estimate, line: Estimate, ov: Complex64, ov_err: f64) -> Estimate {
    let pref = model.density_prefactor();
    let value = pref * (env.value * line.value + ov.norm_sqr());
    let error = pref * (env.value * line.error + line.value * env.error + 2.0 * ov.norm() * ov_err + ov_err * ov_err);
    Estimate { value, error }
}

pub fn separable_parts(t: f64, model: &WWModel) -> Result<SeparableParts> {
    let (overlap, overlap_error) = overlap(t, model)?;
    Ok(SeparableParts {
        envelope_mass: envelope_mass(model)?,
        line_mass: line_mass(t, model)?,
        overlap,
        overlap_error,
    })
}

/// Ground-state probability P₋(t) = ½∬C(k₁,k₂;t) dk₁dk₂.
pub fn prob_ground(t: f64, model: &WWModel) -> Result<Estimate> {
    if !(t >= 0.0) {
        return Err(Error::invalid("t", format!("must be >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let p = separable_parts(t, model)?;
    Ok(combine(model, p.envelope_mass, p.line_mass, p.overlap, p.overlap_error))
}

/// P₋(t) by nested adaptive quadrature of C over the full (k₁, k₂) square.
///
/// Slow; exists to validate [`prob_ground`].
pub fn prob_ground_tensor(t: f64, model: &WWModel, rel_tol: f64) -> Result<Estimate> {
    let q = model.quad;
    let inner_tol = Tolerance {
        abs: 1e-13,
        rel: rel_tol * 0.1,
        max_subdivisions: q.max_subdivisions,
    };
    let pts = q.breakpoints(q.k_min, q.k_max, &[]);
    let mut inner_err = 0.0f64;
    let mut failure = None;
    let outer = crate::quadrature::integrate(
        |k1: f64| {
            match crate::quadrature::integrate(|k2: f64| density_c(k1, k2, t, model), &pts, inner_tol) {
                Ok(r) => {
                    inner_err = inner_err.max(r.error);
                    r.value
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        &pts,
        Tolerance {
            abs: 1e-13,
            rel: rel_tol,
            max_subdivisions: q.max_subdivisions,
        },
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Estimate {
        value: 0.5 * outer.value,
        error: 0.5 * (outer.error + inner_err * (q.k_max - q.k_min)),
    })
}

/// Denominator used to turn the ground-state inflow into a decay rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateDenominator {
    /// Γ = −(dP₊/dt)/P₊ with P₊ = 1 − P₋ taken from the trace.
    Complement,
    /// Γ = (dP₋/dt)/e^{−2γt}: inflow into the ground sector divided by the
    /// excited population the ansatz actually carries, Σ|a_μ|² = e^{−2γt}.
    Ansatz { gamma: f64 },
}

/// Time-dependent downward rate Γ(t) by central differences on the trace.
pub fn decay_rate(trace: &KineticsTrace, denominator: RateDenominator) -> Result<RateSeries> {
    let d_minus = derivative(&trace.times, &trace.p_minus);
    match denominator {
        RateDenominator::Complement => {
            rate_from_flux(&trace.times, &d_minus, &trace.p_plus, MIN_RATE_POPULATION)
        }
        RateDenominator::Ansatz { gamma } => {
            let pop: Vec<f64> = trace.times.iter().map(|t| (-2.0 * gamma * t).exp()).collect();
            rate_from_flux(&trace.times, &d_minus, &pop, MIN_RATE_POPULATION)
        }
    }
}

/// P₋ on `grid`, with Γ(t) filled in using the ansatz denominator.
pub fn kinetics_trace(model: &WWModel, grid: &TimeGrid) -> Result<KineticsTrace> {
    let times = grid.samples();
    let env = envelope_mass(model)?;
    let p_minus = times
        .par_iter()
        .map(|&t| {
            if t == 0.0 {
                return Ok(0.0);
            }
            let line = line_mass(t, model)?;
            let (ov, ov_err) = overlap(t, model)?;
            Ok(combine(model, env, line, ov, ov_err).value)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut trace = KineticsTrace::from_ground(times, p_minus);
    let rate = decay_rate(&trace, RateDenominator::Ansatz { gamma: model.gamma() })?;
    let mut gamma_of_t = rate.rate;
    gamma_of_t.resize(trace.len(), f64::NAN);
    trace.gamma_of_t = Some(gamma_of_t);
    Ok(trace)
}

/// Induced shift of the excited-state probability caused by the packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumShift {
    pub arrival: f64,
    /// −√(2π)(γ/δ)e^{−2γT}
    pub closed_form: f64,
    /// −[P₋^{hit}(∞) − P₋^{miss}(∞)]
    pub numerical: f64,
    pub p_minus_hit: Estimate,
    pub p_minus_miss: Estimate,
}

pub fn induced_shift_closed_form(arrival: f64, gamma: f64, delta: f64) -> f64 {
    -(2.0 * PI).sqrt() * gamma / delta * (-2.0 * gamma * arrival).exp()
}

/// Closed-form and numerical induced shift for the model's packet, whose
/// arrival time T = −Λ must be non-negative.
pub fn induced_shift_quantum(model: &WWModel) -> Result<QuantumShift> {
    let arrival = model.packet.arrival_time();
    if arrival < 0.0 {
        return Err(Error::invalid(
            "lambda",
            format!("packet with Λ = {} never reaches the atom", model.packet.lambda()),
        ));
    }
    let t_inf = ASYMPTOTIC_TIME.max(arrival + ASYMPTOTIC_TIME);
    let hit = prob_ground(t_inf, model)?;
    let miss = prob_ground(t_inf, &model.missing())?;
    Ok(QuantumShift {
        arrival,
        closed_form: induced_shift_closed_form(arrival, model.gamma(), model.packet.spectral_width()),
        numerical: -(hit.value - miss.value),
        p_minus_hit: hit,
        p_minus_miss: miss,
    })
}

/// Mode wavenumbers 2πn/L inside the quadrature domain.
pub fn box_modes(length: f64, k_max: f64) -> Vec<f64> {
    let n_max = (k_max * length / (2.0 * PI)).floor() as i64;
    (-n_max..=n_max).map(|n| 2.0 * PI * n as f64 / length).collect()
}

/// Probability of two photons in one mode, P₂ = Σ_μ|b_μ(t)|², for a box of
/// length `length`.
pub fn doubly_occupied_prob(length: f64, t: f64, model: &WWModel) -> Result<f64> {
    let g2 = model.gamma() / length;
    let k_max = model.quad.k_max.min(-model.quad.k_min);
    box_modes(length, k_max)
        .iter()
        .map(|&k| {
            let phi = discrete_amplitude(k, &model.packet, length)?;
            Ok(2.0 * g2 * (phi * chi(k, t, model.gamma())).norm_sqr())
        })
        .sum()
}

/// Discrete pair sums for a finite box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSums {
    /// ½Σ_{μ≠ν}|c_{μν}|²
    pub off_diagonal: f64,
    /// P₂ = Σ|b_μ|², equal to the excluded diagonal ½Σ|c_μμ|².
    pub doubly_occupied: f64,
}

pub fn pair_sums(length: f64, t: f64, model: &WWModel) -> Result<PairSums> {
    let g2 = model.gamma() / length;
    let k_max = model.quad.k_max.min(-model.quad.k_min);
    let mut sum_phi2 = 0.0;
    let mut sum_chi2 = 0.0;
    let mut cross = Complex64::new(0.0, 0.0);
    let mut diag = 0.0;
    for k in box_modes(length, k_max) {
        let phi = discrete_amplitude(k, &model.packet, length)?;
        let c = chi(k, t, model.gamma());
        sum_phi2 += phi.norm_sqr();
        sum_chi2 += c.norm_sqr();
        cross += phi * c.conj();
        diag += (phi * c).norm_sqr();
    }
    // Σ_{μν}|φ_ν χ_μ + φ_μ χ_ν|² = 2(Σ|φ|²Σ|χ|² + |Σφχ̄|²); the diagonal is 4Σ|φχ|²
    let full = 0.5 * g2 * 2.0 * (sum_phi2 * sum_chi2 + cross.norm_sqr());
    let diagonal = 0.5 * g2 * 4.0 * diag;
    Ok(PairSums {
        off_diagonal: full - diagonal,
        doubly_occupied: diagonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference_model(lambda: f64) -> WWModel {
        WWModel::with_defaults(AtomSpec::new(0.0125).unwrap(), PacketSpec::new(0.25, lambda).unwrap())
    }

    #[test]
    fn chi_limits() {
        for z in [-3.0, -1.0, 0.0, 0.5, 1.0, 2.7] {
            assert_eq!(chi(z, 0.0, 0.0125), Complex64::new(0.0, 0.0));
        }
        assert_relative_eq!(chi(1.0, f64::INFINITY, 0.0125).re, 80.0, max_relative = 1e-14);
        assert_relative_eq!(chi(-1.0, f64::INFINITY, 0.0125).re, 80.0, max_relative = 1e-14);
        let far = chi(1.0, 5000.0, 0.0125);
        assert!((far - Complex64::new(80.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn chi_squared_is_lorentzian() {
        let g = 0.0125;
        for z in [0.9, 0.99, 1.0, 1.004, 1.05, -1.02] {
            let d = 1.0 - f64::abs(z);
            assert_relative_eq!(chi(z, f64::INFINITY, g).norm_sqr(), 1.0 / (g * g + d * d), max_relative = 1e-13);
        }
    }

    #[test]
    fn xi_modulus_ignores_displacement() {
        let a = PacketSpec::new(0.25, 0.0).unwrap();
        let b = PacketSpec::new(0.25, -37.0).unwrap();
        assert_eq!(xi(1.0, &a), Complex64::new(1.0, 0.0));
        assert_relative_eq!(xi(1.5, &a).norm(), (-1.0f64).exp(), max_relative = 1e-14);
        for z in [-2.0, 0.3, 1.0, 1.7] {
            assert_relative_eq!(xi(z, &a).norm(), xi(z, &b).norm(), max_relative = 1e-14);
        }
    }

    #[test]
    fn density_vanishes_at_start() {
        let m = reference_model(-20.0);
        assert_eq!(density_c(0.9, 1.1, 0.0, &m), 0.0);
        assert_eq!(prob_ground(0.0, &m).unwrap().value, 0.0);
        assert!(prob_ground(-1.0, &m).is_err());
    }

    #[test]
    fn miss_case_matches_exponential_decay() {
        // Without the packet P₋ = (1 − e^{−2γt}) minus the part of the atomic
        // line that the fold at k = 0 and the cut at |k| = k_max remove. That
        // part carries the non-oscillating numerator 1 + e^{−2γt} over Δ², and
        // the excluded region is Δ > 1 on each branch plus |Δ| > k_max − 1.
        let m = reference_model(20.0);
        let g = m.gamma();
        let outside = 1.0 + 1.0 / (m.quad.k_max - 1.0);
        for t in [20.0, 50.0, 100.0, 200.0, ASYMPTOTIC_TIME] {
            let p = prob_ground(t, &m).unwrap().value;
            let decay = (-2.0 * g * t).exp();
            let expect = 1.0 - decay - g / PI * (1.0 + decay) * outside;
            // the cross term 2e^{−γt}cos(Δt)/Δ² integrates to O(e^{−γt}/t) outside
            let slack = 1e-4 + 4.0 * g / PI * (-g * t).exp() / t;
            assert!((p - expect).abs() < slack, "t={t}: {p} vs {expect}");
        }
    }

    #[test]
    fn induced_shift_closed_form_value() {
        let v = induced_shift_closed_form(20.0, 0.0125, 0.25);
        assert!((v + 0.0760).abs() < 1e-4, "{v}");
        for t in [0.0, 10.0, 130.0, 1e4] {
            assert!(induced_shift_closed_form(t, 0.0125, 0.25) < 0.0);
        }
        assert!(induced_shift_quantum(&reference_model(20.0)).is_err());
    }

    #[test]
    fn doubly_occupied_vanishes_at_start() {
        let m = reference_model(-20.0);
        assert_eq!(doubly_occupied_prob(251.32, 0.0, &m).unwrap(), 0.0);
        assert!(doubly_occupied_prob(0.0, 1.0, &m).is_err());
    }
}
