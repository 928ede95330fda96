//! Optical Bloch equations driven by a classical Gaussian pulse.
//!
//! In the rotating frame and the rotating-wave approximation:
//!
//! ```text
//! u̇ = −Γ₂u − Δv
//! v̇ = −Γ₂v + Δu + Ω(t)w
//! ẇ = −Γ₁(w − w₀) − Ω(t)v
//! ```
//!
//! with Ω(t) = Ω₀ exp[−(t−T)²/(4τ²)]. For spontaneous decay into the vacuum
//! Γ₁ = 2Γ₂ = 2γ and w₀ = −1.

pub mod cgs;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::ode::{self, OdeOptions};
use crate::units::{AtomSpec, PacketSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub detuning: f64,
    pub w_eq: f64,
}

impl BlochParams {
    pub fn new(gamma1: f64, gamma2: f64, detuning: f64, w_eq: f64) -> Result<Self> {
        if !(gamma1 >= 0.0 && gamma1.is_finite()) {
            return Err(Error::invalid("gamma1", format!("must be >= 0, got {gamma1}")));
        }
        if !(gamma2 >= 0.0 && gamma2.is_finite()) {
            return Err(Error::invalid("gamma2", format!("must be >= 0, got {gamma2}")));
        }
        if !detuning.is_finite() {
            return Err(Error::invalid("detuning", "must be finite"));
        }
        if !(-1.0..=1.0).contains(&w_eq) {
            return Err(Error::invalid("w_eq", format!("must lie in [-1, 1], got {w_eq}")));
        }
        Ok(Self {
            gamma1,
            gamma2,
            detuning,
            w_eq,
        })
    }

    /// Resonant radiative decay: Γ₁ = 2γ, Γ₂ = γ, w₀ = −1.
    pub fn spontaneous(atom: &AtomSpec) -> Self {
        Self {
            gamma1: 2.0 * atom.gamma(),
            gamma2: atom.gamma(),
            detuning: 0.0,
            w_eq: -1.0,
        }
    }

    pub fn with_detuning(self, detuning: f64) -> Self {
        Self { detuning, ..self }
    }

    /// w(t) with no drive, starting from w(0) = `w_start` with u = v = 0.
    pub fn free_w(&self, t: f64, w_start: f64) -> f64 {
        self.w_eq + (w_start - self.w_eq) * (-self.gamma1 * t).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl BlochState {
    pub const EXCITED: Self = Self { u: 0.0, v: 0.0, w: 1.0 };
    pub const GROUND: Self = Self { u: 0.0, v: 0.0, w: -1.0 };

    pub fn length_sqr(&self) -> f64 {
        self.u * self.u + self.v * self.v + self.w * self.w
    }

    /// Excited-state probability (1 + w)/2.
    pub fn p_plus(&self) -> f64 {
        0.5 * (1.0 + self.w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    omega0_rabi: f64,
    tau: f64,
    t_arrival: f64,
}

impl PulseSpec {
    pub fn new(omega0_rabi: f64, tau: f64, t_arrival: f64) -> Result<Self> {
        if !(omega0_rabi >= 0.0 && omega0_rabi.is_finite()) {
            return Err(Error::invalid("omega0_rabi", format!("must be >= 0, got {omega0_rabi}")));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::invalid("tau", format!("must be positive, got {tau}")));
        }
        if !t_arrival.is_finite() {
            return Err(Error::invalid("t_arrival", "must be finite"));
        }
        Ok(Self {
            omega0_rabi,
            tau,
            t_arrival,
        })
    }

    /// Classical pulse carrying the energy of one photon of `packet` in the
    /// one-dimensional model.
    ///
    /// The amplitude envelope exp[−(x−t)²/(4l²)] with l = 1/(2κ) has the same
    /// intensity profile as the packet, and Ω₀ is fixed by the squared pulse
    /// area (∫Ω dt)² = 4√(2π)γ/κ, which turns the impulsive estimate into
    /// ΔP₊ = −√(2π)(γ/δ)w(T).
    pub fn one_photon_1d(atom: &AtomSpec, packet: &PacketSpec) -> Self {
        let kappa = packet.kappa();
        Self {
            omega0_rabi: 2.0 * atom.gamma().sqrt() * (2.0 * PI).powf(0.25) * (kappa / PI).sqrt(),
            tau: 1.0 / (2.0 * kappa),
            t_arrival: packet.arrival_time(),
        }
    }

    pub fn omega0_rabi(&self) -> f64 {
        self.omega0_rabi
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn t_arrival(&self) -> f64 {
        self.t_arrival
    }

    pub fn with_arrival(self, t_arrival: f64) -> Self {
        Self { t_arrival, ..self }
    }

    /// ∫Ω dt over the real line, 2√π Ω₀τ.
    pub fn area(&self) -> f64 {
        2.0 * PI.sqrt() * self.omega0_rabi * self.tau
    }
}

/// Ω(t) = Ω₀ exp[−(t−T)²/(4τ²)].
pub fn rabi_envelope(t: f64, pulse: &PulseSpec) -> f64 {
    let s = (t - pulse.t_arrival) / (2.0 * pulse.tau);
    pulse.omega0_rabi * (-s * s).exp()
}

fn bloch_rhs(p: &BlochParams, omega: f64, y: &[f64], dy: &mut [f64]) {
    let (u, v, w) = (y[0], y[1], y[2]);
    dy[0] = -p.gamma2 * u - p.detuning * v;
    dy[1] = -p.gamma2 * v + p.detuning * u + omega * w;
    dy[2] = -p.gamma1 * (w - p.w_eq) - omega * v;
}

fn ode_options(max_step: f64) -> OdeOptions {
    OdeOptions {
        rel_tol: 1e-9,
        abs_tol: 1e-12,
        max_step,
        ..OdeOptions::default()
    }
}

/// Bloch trajectory under an arbitrary Rabi-frequency profile, sampled at
/// `times` (strictly increasing, starting at or after 0). `max_step` keeps
/// the integrator from stepping over narrow features of the drive.
pub fn integrate_bloch_with<F>(
    params: &BlochParams,
    omega: F,
    initial: BlochState,
    times: &[f64],
    max_step: f64,
) -> Result<Vec<BlochState>>
where
    F: Fn(f64) -> f64,
{
    let t0 = times.first().copied().unwrap_or(0.0).min(0.0);
    let y0 = [initial.u, initial.v, initial.w];
    let (ys, _) = ode::integrate(
        |t, y, dy| bloch_rhs(params, omega(t), y, dy),
        t0,
        &y0,
        times,
        ode_options(max_step),
    )?;
    Ok(ys
        .into_iter()
        .map(|y| BlochState {
            u: y[0],
            v: y[1],
            w: y[2],
        })
        .collect())
}

/// Bloch trajectory under a Gaussian pulse on a uniform time grid.
pub fn integrate_bloch(
    params: &BlochParams,
    pulse: &PulseSpec,
    initial: BlochState,
    grid: &TimeGrid,
) -> Result<Vec<BlochState>> {
    let times = grid.samples();
    integrate_bloch_with(params, |t| rabi_envelope(t, pulse), initial, &times, 0.5 * pulse.tau)
}

/// Impulsive (short, weak pulse) estimates of the excited-state shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpulsiveShift {
    /// Δw/2 with Δw = −(w/2)(∫Ω dt)², i.e. −πΩ₀²τ²w.
    pub from_area: f64,
    /// −(π/2)Ω₀²τ²w, the compact closed form carried into the cross-section
    /// formula. Half of `from_area`.
    pub closed_form: f64,
}

pub fn induced_shift_impulsive(w_t: f64, pulse: &PulseSpec) -> ImpulsiveShift {
    let area = pulse.area();
    let ot = pulse.omega0_rabi * pulse.tau;
    ImpulsiveShift {
        from_area: -0.25 * w_t * area * area,
        closed_form: -0.5 * PI * ot * ot * w_t,
    }
}

/// One-dimensional induced shift −√(2π)(γ/δ)w(T).
pub fn induced_shift_1d(w_t: f64, gamma: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::invalid("delta", format!("must be positive, got {delta}")));
    }
    Ok(-(2.0 * PI).sqrt() * gamma / delta * w_t)
}

/// Three-dimensional induced shift −√(π/8)(σ₀/S)(γ/δ)w(T).
pub fn induced_shift_3d(w_t: f64, sigma_ratio: f64, rate_ratio: f64) -> Result<f64> {
    if !(sigma_ratio > 0.0) {
        return Err(Error::invalid("sigma_ratio", format!("must be positive, got {sigma_ratio}")));
    }
    if !(rate_ratio > 0.0) {
        return Err(Error::invalid("rate_ratio", format!("must be positive, got {rate_ratio}")));
    }
    Ok(-(PI / 8.0).sqrt() * sigma_ratio * rate_ratio * w_t)
}

/// Induced shift measured by integrating the Bloch equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeShift {
    /// w(T) of the undriven atom.
    pub w_at_arrival: f64,
    /// Excited-state shift referred back to t = T.
    pub shift: f64,
    /// Time at which the driven and free solutions were compared.
    pub measured_at: f64,
}

/// Pulse-induced change of P₊ from the Bloch equations, starting from
/// u = v = 0, w = `w_start` at t = 0.
///
/// The deviation from the free solution is integrated directly, so the
/// result keeps full relative accuracy even when it is many orders of
/// magnitude below 1. It is read eight pulse durations after the peak and
/// scaled by e^{Γ₁(t−T)} to undo the relaxation after arrival.
pub fn induced_shift_ode(params: &BlochParams, pulse: &PulseSpec, w_start: f64) -> Result<OdeShift> {
    if pulse.t_arrival < 0.0 {
        return Err(Error::invalid("t_arrival", "pulse must arrive at t >= 0"));
    }
    let tau = pulse.tau;
    let measured_at = pulse.t_arrival + 8.0 * tau;
    // time in units of τ
    let s_end = measured_at / tau;
    let area = pulse.area();
    let scale = area.max(area * area).max(f64::MIN_POSITIVE);
    let opts = OdeOptions {
        rel_tol: 1e-10,
        abs_tol: 1e-14 * scale,
        max_step: 0.25,
        ..OdeOptions::default()
    };
    let p = *params;
    let (ys, _) = ode::integrate(
        |s, d, dd| {
            let t = s * tau;
            let omega = rabi_envelope(t, pulse);
            let w_free = p.free_w(t, w_start);
            dd[0] = tau * (-p.gamma2 * d[0] - p.detuning * d[1]);
            dd[1] = tau * (-p.gamma2 * d[1] + p.detuning * d[0] + omega * (w_free + d[2]));
            dd[2] = tau * (-p.gamma1 * d[2] - omega * d[1]);
        },
        0.0,
        &[0.0, 0.0, 0.0],
        &[s_end],
        opts,
    )?;
    let dw = ys[0][2];
    Ok(OdeShift {
        w_at_arrival: p.free_w(pulse.t_arrival, w_start),
        shift: 0.5 * dw * (p.gamma1 * (measured_at - pulse.t_arrival)).exp(),
        measured_at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference_atom() -> AtomSpec {
        AtomSpec::new(0.0125).unwrap()
    }

    #[test]
    fn envelope_points() {
        let p = PulseSpec::new(0.3, 2.0, 20.0).unwrap();
        assert_eq!(rabi_envelope(20.0, &p), 0.3);
        assert_relative_eq!(rabi_envelope(24.0, &p), 0.3 / std::f64::consts::E, max_relative = 1e-15);
        assert_relative_eq!(rabi_envelope(16.0, &p), 0.3 / std::f64::consts::E, max_relative = 1e-15);
    }

    #[test]
    fn envelope_area_matches_quadrature() {
        let p = PulseSpec::new(0.3, 2.0, 20.0).unwrap();
        let r = crate::quadrature::integrate(
            |t: f64| rabi_envelope(t, &p),
            &[-20.0, 20.0, 60.0],
            crate::quadrature::Tolerance::default(),
        )
        .unwrap();
        assert_relative_eq!(r.value, p.area(), max_relative = 1e-12);
    }

    #[test]
    fn parameter_validation() {
        assert!(PulseSpec::new(0.1, 0.0, 1.0).is_err());
        assert!(PulseSpec::new(-0.1, 1.0, 1.0).is_err());
        assert!(BlochParams::new(-1.0, 0.0, 0.0, -1.0).is_err());
        assert!(BlochParams::new(1.0, 0.5, 0.0, -2.0).is_err());
        assert!(induced_shift_1d(1.0, 0.1, 0.0).is_err());
        assert!(induced_shift_3d(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn free_decay_is_exact() {
        let params = BlochParams::spontaneous(&reference_atom());
        let pulse = PulseSpec::new(0.0, 2.0, 20.0).unwrap();
        let grid = TimeGrid::new(0.0, 200.0, 201).unwrap();
        let traj = integrate_bloch(&params, &pulse, BlochState::EXCITED, &grid).unwrap();
        for (t, s) in grid.samples().iter().zip(&traj) {
            let exact = -1.0 + 2.0 * (-0.025 * t).exp();
            assert!(((s.w - exact) / exact.abs().max(1e-300)).abs() < 1e-8, "t={t}");
            assert_eq!(s.u, 0.0);
            assert_eq!(s.v, 0.0);
        }
    }

    #[test]
    fn undamped_rabi_flopping() {
        let params = BlochParams::new(0.0, 0.0, 0.0, -1.0).unwrap();
        let omega = 0.7;
        let times: Vec<f64> = (0..=50).map(|i| i as f64 * 0.4).collect();
        let traj = integrate_bloch_with(&params, |_| omega, BlochState::EXCITED, &times, 0.1).unwrap();
        for (t, s) in times.iter().zip(&traj) {
            assert!((s.w - (omega * t).cos()).abs() < 1e-8, "t={t}");
            assert!((s.v - (omega * t).sin()).abs() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn resonant_drive_keeps_u_zero() {
        let params = BlochParams::spontaneous(&reference_atom());
        let pulse = PulseSpec::new(0.5, 2.0, 10.0).unwrap();
        let grid = TimeGrid::new(0.0, 40.0, 81).unwrap();
        let traj = integrate_bloch(&params, &pulse, BlochState::EXCITED, &grid).unwrap();
        assert!(traj.iter().all(|s| s.u == 0.0));
        let detuned = integrate_bloch(&params.with_detuning(0.3), &pulse, BlochState::EXCITED, &grid).unwrap();
        assert!(detuned.iter().any(|s| s.u.abs() > 1e-3));
    }

    #[test]
    fn one_photon_pulse_area() {
        let atom = reference_atom();
        let packet = PacketSpec::new(0.25, -20.0).unwrap();
        let p = PulseSpec::one_photon_1d(&atom, &packet);
        assert_eq!(p.tau(), 2.0);
        assert_eq!(p.t_arrival(), 20.0);
        let expect = 4.0 * (2.0 * PI).sqrt() * 0.0125 / 0.25;
        assert_relative_eq!(p.area() * p.area(), expect, max_relative = 1e-14);
        let imp = induced_shift_impulsive(-1.0, &p);
        assert_relative_eq!(imp.from_area, induced_shift_1d(-1.0, 0.0125, 0.25).unwrap(), max_relative = 1e-14);
        assert_relative_eq!(imp.closed_form, 0.5 * imp.from_area, max_relative = 1e-14);
    }

    #[test]
    fn impulsive_shift_sign_and_zero() {
        let p = PulseSpec::new(0.01, 2.0, 20.0).unwrap();
        assert_eq!(induced_shift_impulsive(0.0, &p).from_area, 0.0);
        for w in [-1.0, -0.3, 0.4, 1.0] {
            let s = induced_shift_impulsive(w, &p);
            assert_eq!(s.from_area.signum(), -w.signum());
            assert_eq!(s.closed_form.signum(), -w.signum());
        }
    }

    #[test]
    fn ode_shift_late_arrival_matches_1d_formula() {
        let atom = reference_atom();
        let params = BlochParams::spontaneous(&atom);
        for t_arr in [100.0, 400.0] {
            let packet = PacketSpec::new(0.25, -t_arr).unwrap();
            let pulse = PulseSpec::one_photon_1d(&atom, &packet);
            let r = induced_shift_ode(&params, &pulse, 1.0).unwrap();
            let closed = induced_shift_1d(r.w_at_arrival, 0.0125, 0.25).unwrap();
            assert!((r.shift / closed - 1.0).abs() < 0.05, "T={t_arr}: {} vs {closed}", r.shift);
        }
    }

    #[test]
    fn ode_shift_in_weak_short_limit() {
        // Ω₀τ and γτ small: the impulsive estimate becomes exact
        let params = BlochParams::new(2e-4, 1e-4, 0.0, -1.0).unwrap();
        let pulse = PulseSpec::new(1e-3, 1.0, 10.0).unwrap();
        let r = induced_shift_ode(&params, &pulse, 1.0).unwrap();
        let imp = induced_shift_impulsive(r.w_at_arrival, &pulse);
        assert_relative_eq!(r.shift, imp.from_area, max_relative = 2e-3);
    }
}
