//! First iteration of the two-excitation amplitude equations.
//!
//! The zeroth-order two-photon amplitudes are fed back into the equation for
//! the excited-atom amplitudes a(k,t), giving
//!
//! ```text
//! a(k,t) = φ(k) − (γ/2π) ∫ F(k, y; t) dy
//! ```
//!
//! where F has two terms, each a φ factor times a Lorentzian denominator times
//! a difference of E(z) = (e^{zt} − 1)/z = t·G(zt), G(z) = (e^z − 1)/z.
//! The leading sum over doubly occupied modes is dropped, since its weight
//! vanishes with the box length.
//!
//! Which φ goes with which term, the detuning in the second brace, and the
//! upper limit of the y integral are selectable through [`Variant`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureConfig, Tolerance};
use crate::units::{discrete_amplitude, AtomSpec, PacketSpec};
use crate::ww::{Estimate, ASYMPTOTIC_TIME};

/// Threshold below which G is summed as a series.
const SERIES_RADIUS: f64 = 1e-4;

/// G(z) = (e^z − 1)/z with G(0) = 1.
pub fn g_kernel(z: Complex64) -> Complex64 {
    if z.norm() < SERIES_RADIUS {
        // 1 + z/2 + z²/6 + z³/24, truncation below 1e-17
        let one = Complex64::new(1.0, 0.0);
        one + z * (0.5 + z * (1.0 / 6.0 + z / 24.0))
    } else {
        z.exp_m1() / z
    }
}

trait ExpM1 {
    fn exp_m1(self) -> Self;
}

impl ExpM1 for Complex64 {
    /// e^z − 1 without cancellation for small |z|.
    fn exp_m1(self) -> Self {
        // e^{x+iy} − 1 = (e^x − 1)cos y + (cos y − 1) + i e^x sin y
        let (s, c) = self.im.sin_cos();
        let em1 = self.re.exp_m1();
        let cm1 = -2.0 * (0.5 * self.im).sin().powi(2);
        Complex64::new(em1 * c + cm1, (em1 + 1.0) * s)
    }
}

/// E(z, t) = (e^{zt} − 1)/z = t·G(zt).
pub fn e_kernel(z: Complex64, t: f64) -> Complex64 {
    g_kernel(z * t) * t
}

/// Which φ multiplies which term of F.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiPlacement {
    /// φ(x) in the first term, φ(y) in the second.
    AsPrinted,
    /// φ(y) in the first term, φ(x) in the second, which is what substituting
    /// the zeroth-order amplitudes gives.
    Exchanged,
}

/// Detuning inside the first E of the second term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondBrace {
    /// E(i(1−|y|)).
    AsPrinted,
    /// E(i(1−|x|)), mirroring the first term.
    Symmetrized,
}

/// Upper limit of the y integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperLimit {
    /// y ≤ k.
    AtK,
    /// The whole domain, as for a sum over all modes.
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Variant {
    pub phi: PhiPlacement,
    pub brace: SecondBrace,
    pub upper: UpperLimit,
}

impl Variant {
    /// The form obtained by direct substitution.
    pub const DERIVED: Self = Self {
        phi: PhiPlacement::Exchanged,
        brace: SecondBrace::AsPrinted,
        upper: UpperLimit::Infinity,
    };

    pub fn all() -> Vec<Self> {
        let mut out = Vec::with_capacity(8);
        for phi in [PhiPlacement::Exchanged, PhiPlacement::AsPrinted] {
            for brace in [SecondBrace::AsPrinted, SecondBrace::Symmetrized] {
                for upper in [UpperLimit::Infinity, UpperLimit::AtK] {
                    out.push(Self { phi, brace, upper });
                }
            }
        }
        out
    }

    pub fn label(&self) -> String {
        let phi = match self.phi {
            PhiPlacement::AsPrinted => "phi-as-printed",
            PhiPlacement::Exchanged => "phi-exchanged",
        };
        let brace = match self.brace {
            SecondBrace::AsPrinted => "brace-y",
            SecondBrace::Symmetrized => "brace-x",
        };
        let upper = match self.upper {
            UpperLimit::AtK => "upto-k",
            UpperLimit::Infinity => "full",
        };
        format!("{phi}/{brace}/{upper}")
    }
}

impl Default for Variant {
    fn default() -> Self {
        Self::DERIVED
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderModel {
    pub atom: AtomSpec,
    pub packet: PacketSpec,
    pub quad: QuadratureConfig,
    /// Quantization length; cancels from P₊ but fixes the scale of a(k,t).
    pub length: f64,
    pub variant: Variant,
    /// Multiplies the correction term; 0 recovers the unperturbed amplitudes.
    pub correction_scale: f64,
    /// Tolerance of the inner y integral.
    pub inner_tol: Tolerance,
    /// Tolerance of the outer k integral of |a|².
    pub outer_tol: Tolerance,
}

impl FirstOrderModel {
    pub fn new(atom: AtomSpec, packet: PacketSpec, length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::invalid("length", format!("must be positive, got {length}")));
        }
        Ok(Self {
            atom,
            packet,
            quad: QuadratureConfig::for_model(atom.gamma(), packet.kappa()),
            length,
            variant: Variant::default(),
            correction_scale: 1.0,
            inner_tol: Tolerance {
                abs: 1e-11,
                rel: 1e-8,
                max_subdivisions: 20_000,
            },
            outer_tol: Tolerance {
                abs: 1e-10,
                rel: 1e-6,
                max_subdivisions: 20_000,
            },
        })
    }

    pub fn with_variant(self, variant: Variant) -> Self {
        Self { variant, ..self }
    }

    pub fn with_packet(self, packet: PacketSpec) -> Self {
        Self { packet, ..self }
    }

    fn phi(&self, k: f64) -> Complex64 {
        // length is validated at construction
        discrete_amplitude(k, &self.packet, self.length).unwrap_or_default()
    }
}

/// The kernel F(x, y; t) of the correction integral.
pub fn f_kernel(x: f64, y: f64, t: f64, model: &FirstOrderModel) -> Complex64 {
    let g = model.atom.gamma();
    let dx = 1.0 - x.abs();
    let dy = 1.0 - y.abs();
    let (p1, p2) = match model.variant.phi {
        PhiPlacement::AsPrinted => (model.phi(x), model.phi(y)),
        PhiPlacement::Exchanged => (model.phi(y), model.phi(x)),
    };
    let brace_detuning = match model.variant.brace {
        SecondBrace::AsPrinted => dy,
        SecondBrace::Symmetrized => dx,
    };
    let i = Complex64::i();
    let first = p1 / Complex64::new(g, dx)
        * (e_kernel(i * dy, t) - e_kernel(Complex64::new(-g, x.abs() - y.abs()), t));
    let second = p2 / Complex64::new(g, dy)
        * (e_kernel(i * brace_detuning, t) - e_kernel(Complex64::new(-g, 0.0), t));
    first + second
}

fn y_breakpoints(model: &FirstOrderModel, k: f64, upper: f64) -> Vec<f64> {
    // F oscillates around y = ±|k|, where the phase of the exchange term is
    // stationary
    model.quad.breakpoints(model.quad.k_min, upper, &[k.abs(), -k.abs()])
}

/// a(k, t) with the y integral over [k_min, k] or the whole domain.
pub fn amplitude_first_order(k: f64, t: f64, model: &FirstOrderModel) -> Result<Complex64> {
    Ok(amplitude_with_error(k, t, model)?.0)
}

fn amplitude_with_error(k: f64, t: f64, model: &FirstOrderModel) -> Result<(Complex64, f64)> {
    let phi = model.phi(k);
    if t == 0.0 || model.correction_scale == 0.0 {
        return Ok((phi, 0.0));
    }
    let upper = match model.variant.upper {
        UpperLimit::AtK => k.min(model.quad.k_max),
        UpperLimit::Infinity => model.quad.k_max,
    };
    if upper <= model.quad.k_min {
        return Ok((phi, 0.0));
    }
    let pts = y_breakpoints(model, k, upper);
    let r = integrate(|y| f_kernel(k, y, t, model), &pts, model.inner_tol)?;
    let pref = model.correction_scale * model.atom.gamma() / (2.0 * PI);
    Ok((phi - r.value * pref, r.error * pref))
}

/// y integrals of the derived kernel that do not depend on k.
///
/// With φ(y) in the first term, φ(x) in the second and the full y range,
/// ∫F(x,y)dy = [I₁ − J(|x|)]/(γ + iΔx) + φ(x)·I₂ where
/// I₁ = ∫φ(y)E(iΔy)dy, I₂ = ∫[E(iΔy) − E(−γ)]/(γ + iΔy)dy and
/// J(s) = ∫φ(y)E(−γ + i(s − |y|))dy, so only J has to be redone per k.
#[derive(Debug, Clone, Copy)]
struct Factorized {
    i1: Complex64,
    i2: Complex64,
    error: f64,
}

impl Factorized {
    fn applies(model: &FirstOrderModel) -> bool {
        model.variant == Variant::DERIVED
    }

    fn new(t: f64, model: &FirstOrderModel) -> Result<Self> {
        let g = model.atom.gamma();
        let i = Complex64::i();
        let pts = model.quad.breakpoints(model.quad.k_min, model.quad.k_max, &[]);
        let r1 = integrate(|y: f64| model.phi(y) * e_kernel(i * (1.0 - y.abs()), t), &pts, model.inner_tol)?;
        let e_g = e_kernel(Complex64::new(-g, 0.0), t);
        let r2 = integrate(
            |y: f64| {
                let dy = 1.0 - y.abs();
                (e_kernel(i * dy, t) - e_g) / Complex64::new(g, dy)
            },
            &pts,
            model.inner_tol,
        )?;
        Ok(Self {
            i1: r1.value,
            i2: r2.value,
            error: r1.error + r2.error,
        })
    }

    fn correction(&self, k: f64, t: f64, model: &FirstOrderModel) -> Result<(Complex64, f64)> {
        let g = model.atom.gamma();
        let s = k.abs();
        let pts = model.quad.breakpoints(model.quad.k_min, model.quad.k_max, &[s, -s]);
        let j = integrate(
            |y: f64| model.phi(y) * e_kernel(Complex64::new(-g, s - y.abs()), t),
            &pts,
            model.inner_tol,
        )?;
        let den = Complex64::new(g, 1.0 - s);
        let phi = model.phi(k);
        let value = (self.i1 - j.value) / den + phi * self.i2;
        let error = (self.error + j.error) / den.norm() + phi.norm() * self.error;
        Ok((value, error))
    }
}

/// P₊(t) = (L/2π)∫|a(k,t)|² dk.
pub fn prob_excited_first_order(t: f64, model: &FirstOrderModel) -> Result<Estimate> {
    if !(t >= 0.0) {
        return Err(Error::invalid("t", format!("must be >= 0, got {t}")));
    }
    let factorized = if Factorized::applies(model) && t > 0.0 && model.correction_scale != 0.0 {
        Some(Factorized::new(t, model)?)
    } else {
        None
    };
    let pref = model.correction_scale * model.atom.gamma() / (2.0 * PI);
    let amplitude = |k: f64| -> Result<(Complex64, f64)> {
        match &factorized {
            Some(f) => {
                let (c, e) = f.correction(k, t, model)?;
                Ok((model.phi(k) - c * pref, e * pref))
            }
            None => amplitude_with_error(k, t, model),
        }
    };
    let mut failure: Option<Error> = None;
    let mut inner_err = 0.0f64;
    let pts = model.quad.breakpoints(model.quad.k_min, model.quad.k_max, &[]);
    let r = integrate(
        |k| match amplitude(k) {
            Ok((a, e)) => {
                inner_err = inner_err.max(2.0 * a.norm() * e + e * e);
                a.norm_sqr()
            }
            Err(err) => {
                failure.get_or_insert(err);
                0.0
            }
        },
        &pts,
        model.outer_tol,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let scale = model.length / (2.0 * PI);
    Ok(Estimate {
        value: scale * r.value,
        error: scale * (r.error + inner_err * (model.quad.k_max - model.quad.k_min)),
    })
}

/// First-order shift of the asymptotic excited-state probability caused by a
/// packet arriving at `arrival`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderShift {
    pub arrival: f64,
    /// Time standing in for t → ∞: arrival plus ten population e-foldings.
    pub evaluated_at: f64,
    pub hit: Estimate,
    pub miss: Estimate,
}

impl FirstOrderShift {
    /// ΔP₊ = P₊^{hit}(∞) − P₊^{miss}(∞).
    pub fn shift(&self) -> f64 {
        self.hit.value - self.miss.value
    }
}

pub fn induced_shift_first_order(arrival: f64, model: &FirstOrderModel) -> Result<FirstOrderShift> {
    if !(arrival >= 0.0) {
        return Err(Error::invalid("arrival", format!("must be >= 0, got {arrival}")));
    }
    let t = arrival + ASYMPTOTIC_TIME;
    let hit_packet = model.packet.with_arrival(arrival);
    let hit = prob_excited_first_order(t, &model.with_packet(hit_packet))?;
    let miss = prob_excited_first_order(t, &model.with_packet(hit_packet.missing()))?;
    Ok(FirstOrderShift {
        arrival,
        evaluated_at: t,
        hit,
        miss,
    })
}

/// ΔP₊ for each arrival time.
pub fn shift_scan(arrivals: &[f64], model: &FirstOrderModel) -> Result<Vec<FirstOrderShift>> {
    arrivals
        .iter()
        .map(|&t| induced_shift_first_order(t, model))
        .collect()
}

/// Number of strict sign changes along a sequence, ignoring exact zeros.
pub fn sign_changes(values: &[f64]) -> usize {
    let signs: Vec<f64> = values
        .iter()
        .filter(|v| **v != 0.0)
        .map(|v| v.signum())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn series(z: Complex64, terms: usize) -> Complex64 {
        // Σ z^n/(n+1)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for n in 1..terms {
            term = term * z / (n as f64 + 1.0);
            sum += term;
        }
        sum
    }

    fn model() -> FirstOrderModel {
        FirstOrderModel::new(
            AtomSpec::new(0.0125).unwrap(),
            PacketSpec::new(0.25, -20.0).unwrap(),
            251.32,
        )
        .unwrap()
    }

    #[test]
    fn g_kernel_values() {
        assert_eq!(g_kernel(Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        let z = Complex64::new(-0.25, 0.0);
        assert_relative_eq!(g_kernel(z).re, series(z, 30).re, max_relative = 1e-15);
        assert_relative_eq!(g_kernel(z).re, 0.884_797_0, max_relative = 1e-6);
        for z in [
            Complex64::new(0.3, -2.0),
            Complex64::new(-5.0, 40.0),
            Complex64::new(2e-5, 3e-5),
            Complex64::new(0.0, 1e-3),
        ] {
            let a = g_kernel(z.conj());
            let b = g_kernel(z).conj();
            assert!((a - b).norm() <= 1e-15 * b.norm());
            if z.norm() < 2.0 {
                assert!((g_kernel(z) - series(z, 40)).norm() < 1e-14, "{z}");
            }
        }
    }

    #[test]
    fn g_kernel_continuous_across_series_switch() {
        for phase in [0.0, 1.0, 2.5, 4.0] {
            let lo = Complex64::from_polar(SERIES_RADIUS * (1.0 - 1e-9), phase);
            let hi = Complex64::from_polar(SERIES_RADIUS * (1.0 + 1e-9), phase);
            for z in [lo, hi] {
                assert!((g_kernel(z) - series(z, 20)).norm() < 1e-15, "{z}");
            }
        }
    }

    #[test]
    fn kernel_vanishes_at_start_and_is_finite_on_resonance() {
        let m = model();
        for v in Variant::all() {
            let m = m.with_variant(v);
            assert_eq!(f_kernel(0.9, 1.2, 0.0, &m), Complex64::new(0.0, 0.0));
            for (x, y) in [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 0.5)] {
                assert!(f_kernel(x, y, 300.0, &m).norm().is_finite());
            }
        }
    }

    #[test]
    fn amplitude_reduces_to_packet() {
        let m = model();
        let phi = discrete_amplitude(1.1, &m.packet, m.length).unwrap();
        assert_eq!(amplitude_first_order(1.1, 0.0, &m).unwrap(), phi);
        let weak = FirstOrderModel::new(AtomSpec::new(1e-12).unwrap(), m.packet, m.length).unwrap();
        let a = amplitude_first_order(1.1, 50.0, &weak).unwrap();
        assert!((a - phi).norm() < 1e-8 * phi.norm());
        let upto = m.with_variant(Variant {
            upper: UpperLimit::AtK,
            ..Variant::DERIVED
        });
        assert!(amplitude_first_order(-6.0, 50.0, &upto).unwrap().norm() < 1e-30);
    }

    #[test]
    fn correction_off_keeps_packet_norm() {
        let mut m = model();
        m.correction_scale = 0.0;
        for t in [0.0, 100.0] {
            let p = prob_excited_first_order(t, &m).unwrap();
            assert!((p.value - 1.0).abs() < 1e-8, "{}", p.value);
        }
    }

    #[test]
    fn start_is_fully_excited() {
        let p = prob_excited_first_order(0.0, &model()).unwrap();
        assert!((p.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn factorized_kernel_matches_direct_integral() {
        let m = model();
        for t in [7.0, 60.0, 250.0] {
            let f = Factorized::new(t, &m).unwrap();
            let pref = m.atom.gamma() / (2.0 * PI);
            for k in [-2.5, -1.01, -0.3, 0.0, 0.7, 0.995, 1.0, 1.3, 3.1] {
                let direct = amplitude_first_order(k, t, &m).unwrap();
                let (c, _) = f.correction(k, t, &m).unwrap();
                let fast = m.phi(k) - c * pref;
                let scale = direct.norm().max(1e-3 * m.phi(1.0).norm());
                assert!((direct - fast).norm() < 1e-6 * scale, "t={t} k={k}: {direct} vs {fast}");
            }
        }
    }

    #[test]
    fn sign_change_counter() {
        assert_eq!(sign_changes(&[-1.0, -0.5, 0.0, 0.2, 0.3]), 1);
        assert_eq!(sign_changes(&[1.0, -1.0, 1.0]), 2);
        assert_eq!(sign_changes(&[]), 0);
    }

    #[test]
    fn variant_labels_are_distinct() {
        let labels: std::collections::HashSet<String> = Variant::all().iter().map(|v| v.label()).collect();
        assert_eq!(labels.len(), 8);
    }
}
