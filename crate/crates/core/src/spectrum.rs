//! Spectrum of the two final photons.
//!
//! S(ω) = ∫₀^∞ [C_f(ω,ω′) + C_f(−ω,ω′) + C_f(ω,−ω′) + C_f(−ω,−ω′)] dω′ with
//! C_f the two-photon density at t = ∞, so ∫S dω = 2P₋(∞). It is compared
//! with the basic spectrum S₀: the packet's Gaussian plus the natural
//! Lorentzian, each of unit mass.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::quadrature::{integrate, Tolerance};
use crate::ww::{chi, density_c, separable_parts, xi, SeparableParts, WWModel};

/// Fraction of the expected mass the frequency grid must hold.
pub const MIN_COVERAGE: f64 = 0.999;

/// Required spacing near the line: γ/5 within 20γ of ω = 1.
pub const LINE_STEP_FRACTION: f64 = 0.2;
pub const LINE_HALFWIDTH_FACTOR: f64 = 20.0;

/// S(ω) by direct integration over the partner frequency.
pub fn spectral_density(omega: f64, model: &WWModel) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::invalid("omega", format!("must be positive, got {omega}")));
    }
    let t = f64::INFINITY;
    let q = &model.quad;
    let upper = q.k_max.min(-q.k_min);
    let r = q.integrate_range(
        |y: f64| {
            density_c(omega, y, t, model)
                + density_c(-omega, y, t, model)
                + density_c(omega, -y, t, model)
                + density_c(-omega, -y, t, model)
        },
        0.0,
        upper,
        &[],
    )?;
    Ok(r.value)
}

/// S(ω) from the expanded square: K Σ_{x=±ω}[|ξ(x)|²∫|χ|² + |χ(x)|²∫|ξ|²
/// + 2Re(ξ(x)χ̄(x)∫ξ̄χ)], with the integrals taken from `parts`.
pub fn spectral_density_separable(omega: f64, model: &WWModel, parts: &SeparableParts) -> f64 {
    let g = model.gamma();
    let pref = model.density_prefactor();
    let x_bar = parts.overlap.conj();
    [omega, -omega]
        .iter()
        .map(|&x| {
            let a = xi(x, &model.packet);
            let c = chi(x, f64::INFINITY, g);
            pref * (a.norm_sqr() * parts.line_mass.value
                + c.norm_sqr() * parts.envelope_mass.value
                + 2.0 * (a * c.conj() * x_bar).re)
        })
        .sum()
}

/// Unit-mass Gaussian of width δ plus unit-mass Lorentzian of half-width γ,
/// both centred on ω = 1.
pub fn basic_spectrum(omega: f64, delta: f64, gamma: f64) -> f64 {
    let d = omega - 1.0;
    (-d * d / (2.0 * delta * delta)).exp() / ((2.0 * PI).sqrt() * delta) + gamma / (PI * (gamma * gamma + d * d))
}

/// Shortest interval holding half the mass of sampled density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Width {
    pub lo: f64,
    pub hi: f64,
    /// Trapezoid mass on the grid.
    pub mass: f64,
}

impl Width {
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

fn cumulative(x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut c = Vec::with_capacity(x.len());
    c.push(0.0);
    for i in 1..x.len() {
        let prev = c[i - 1];
        c.push(prev + 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]));
    }
    c
}

/// Position where the piecewise-linear cumulative mass reaches `target`,
/// searching from index `from`.
fn invert(x: &[f64], c: &[f64], target: f64, from: usize) -> Option<(f64, usize)> {
    let mut j = from.max(1);
    while j < c.len() && c[j] < target {
        j += 1;
    }
    if j >= c.len() {
        return None;
    }
    let (c0, c1) = (c[j - 1], c[j]);
    let f = if c1 > c0 { (target - c0) / (c1 - c0) } else { 0.0 };
    Some((x[j - 1] + f * (x[j] - x[j - 1]), j))
}

/// Shortest [a, b] whose mass is half the grid mass.
///
/// Both window ends move continuously: the cumulative trapezoid mass is
/// treated as piecewise linear, and for each grid point as the left end (and
/// each grid point as the right end) the matching other end is found by
/// inverting it.
pub fn spectral_width(omega: &[f64], density: &[f64]) -> Result<Width> {
    if omega.len() != density.len() || omega.len() < 3 {
        return Err(Error::invalid("density", "need matching grids of at least three points"));
    }
    if density.iter().any(|d| !(*d >= 0.0)) {
        return Err(Error::invalid("density", "must be non-negative"));
    }
    if omega.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("omega", "must be strictly increasing"));
    }
    let c = cumulative(omega, density);
    let total = *c.last().unwrap();
    if !(total > 0.0) {
        return Err(Error::invalid("density", "has zero mass"));
    }
    let half = 0.5 * total;
    let mut best = Width {
        lo: omega[0],
        hi: *omega.last().unwrap(),
        mass: total,
    };
    let mut j = 1;
    for i in 0..omega.len() {
        let Some((hi, jj)) = invert(omega, &c, c[i] + half, j) else { break };
        j = jj;
        if hi - omega[i] < best.length() {
            best.lo = omega[i];
            best.hi = hi;
        }
    }
    // right ends on grid points, left ends interpolated
    let mut j = 1;
    for (k, &ck) in c.iter().enumerate() {
        if ck < half {
            continue;
        }
        let Some((lo, jj)) = invert(omega, &c, ck - half, j) else { break };
        j = jj;
        if omega[k] - lo < best.length() {
            best.lo = lo;
            best.hi = omega[k];
        }
    }
    Ok(best)
}

/// [`spectral_width`] after checking that the grid holds at least
/// [`MIN_COVERAGE`] of `expected_mass`.
pub fn spectral_width_covered(omega: &[f64], density: &[f64], expected_mass: f64) -> Result<Width> {
    let w = spectral_width(omega, density)?;
    if w.mass < MIN_COVERAGE * expected_mass {
        return Err(Error::InsufficientCoverage {
            covered: w.mass,
            expected: expected_mass,
        });
    }
    Ok(w)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTrace {
    pub omega: Vec<f64>,
    pub s: Vec<f64>,
    pub s0: Vec<f64>,
    /// S/S₀ pointwise.
    pub r: Vec<f64>,
    pub width_s: Width,
    pub width_s0: Width,
    /// P₋(∞) = ½∬C_f.
    pub p_minus_final: f64,
    /// ∫S over ω ∈ (0, k_max].
    pub mass_s: f64,
    /// ∫S₀ over ω ∈ (0, k_max].
    pub mass_s0: f64,
}

impl SpectrumTrace {
    /// (Δω_S − Δω_S₀)/Δω_S₀.
    pub fn broadening(&self) -> f64 {
        (self.width_s.length() - self.width_s0.length()) / self.width_s0.length()
    }

    /// Whether S/S₀ departs from 1 by more than `tol` in both directions.
    pub fn ratio_has_both_signs(&self, tol: f64) -> bool {
        self.r.iter().any(|r| *r > 1.0 + tol) && self.r.iter().any(|r| *r < 1.0 - tol)
    }
}

/// Final-state P₋ = ½∬C(·,·;∞).
pub fn final_ground_probability(model: &WWModel) -> Result<f64> {
    let p = separable_parts(f64::INFINITY, model)?;
    Ok(model.density_prefactor() * (p.envelope_mass.value * p.line_mass.value + p.overlap.norm_sqr()))
}

/// S, S₀, R and both half-mass widths on `grid`.
pub fn spectrum_report(model: &WWModel, grid: &FrequencyGrid) -> Result<SpectrumTrace> {
    let g = model.gamma();
    let step = grid.max_step_near_resonance(LINE_HALFWIDTH_FACTOR * g);
    if step > LINE_STEP_FRACTION * g * (1.0 + 1e-9) {
        return Err(Error::invalid(
            "frequency grid",
            format!("spacing {step} near the line exceeds γ/5 = {}", LINE_STEP_FRACTION * g),
        ));
    }
    let delta = model.packet.spectral_width();
    let omega = grid.points().to_vec();
    let s = omega
        .par_iter()
        .map(|&w| spectral_density(w, model))
        .collect::<Result<Vec<f64>>>()?;
    let s0: Vec<f64> = omega.iter().map(|&w| basic_spectrum(w, delta, g)).collect();
    let r = s.iter().zip(&s0).map(|(a, b)| a / b).collect();
    let p_minus_final = final_ground_probability(model)?;
    let upper = model.quad.k_max.min(-model.quad.k_min);
    let mass_s = 2.0 * p_minus_final;
    let tol = Tolerance {
        abs: 1e-14,
        rel: 1e-10,
        max_subdivisions: model.quad.max_subdivisions,
    };
    let mass_s0 = integrate(|w: f64| basic_spectrum(w, delta, g), &model.quad.breakpoints(0.0, upper, &[]), tol)?.value;
    let width_s = spectral_width_covered(&omega, &s, mass_s)?;
    let width_s0 = spectral_width_covered(&omega, &s0, mass_s0)?;
    Ok(SpectrumTrace {
        omega,
        s,
        s0,
        r,
        width_s,
        width_s0,
        p_minus_final,
        mass_s,
        mass_s0,
    })
}

/// ∫S dω over (0, k_max] by integrating [`spectral_density`] adaptively.
pub fn integrated_spectrum(model: &WWModel, rel_tol: f64) -> Result<f64> {
    let upper = model.quad.k_max.min(-model.quad.k_min);
    let mut failure = None;
    let r = integrate(
        |w: f64| {
            if w <= 0.0 {
                return 0.0;
            }
            spectral_density(w, model).unwrap_or_else(|e| {
                failure.get_or_insert(e);
                0.0
            })
        },
        &model.quad.breakpoints(0.0, upper, &[]),
        Tolerance {
            abs: 1e-12,
            rel: rel_tol,
            max_subdivisions: model.quad.max_subdivisions,
        },
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(r.value)
}
