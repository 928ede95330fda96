use crate::error::{Error, Result};

/// Uniform time grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    n_points: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_points: usize) -> Result<Self> {
        if !(t_start >= 0.0 && t_start.is_finite()) {
            return Err(Error::invalid("t_start", format!("must be >= 0, got {t_start}")));
        }
        if !(t_end > t_start && t_end.is_finite()) {
            return Err(Error::invalid("t_end", format!("must exceed t_start, got {t_end}")));
        }
        if n_points < 2 {
            return Err(Error::invalid("n_points", format!("need at least 2, got {n_points}")));
        }
        Ok(Self {
            t_start,
            t_end,
            n_points,
        })
    }

    /// [0, 400] with 4001 points: ten population e-foldings at γ = 0.0125.
    pub fn standard() -> Self {
        Self {
            t_start: 0.0,
            t_end: 400.0,
            n_points: 4001,
        }
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn step(&self) -> f64 {
        (self.t_end - self.t_start) / (self.n_points - 1) as f64
    }

    pub fn samples(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n_points)
            .map(|i| {
                if i + 1 == self.n_points {
                    self.t_end
                } else {
                    self.t_start + h * i as f64
                }
            })
            .collect()
    }
}

/// Strictly increasing frequency samples, dense around the resonance.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    points: Vec<f64>,
}

impl FrequencyGrid {
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("frequency grid", "need at least two points"));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) || points.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("frequency grid", "points must be finite and strictly increasing"));
        }
        Ok(Self { points })
    }

    /// Uniform step `core_step` within `core_halfwidth` of ω = 1, then steps
    /// growing geometrically by `growth` out to `[lo, hi]`.
    pub fn resonance_refined(
        lo: f64,
        hi: f64,
        core_halfwidth: f64,
        core_step: f64,
        growth: f64,
    ) -> Result<Self> {
        if !(lo > 0.0 && lo < 1.0 - core_halfwidth && hi > 1.0 + core_halfwidth) {
            return Err(Error::invalid(
                "frequency grid",
                format!("range [{lo}, {hi}] must be positive and enclose the core around 1"),
            ));
        }
        if !(core_step > 0.0) || !(growth >= 1.0) {
            return Err(Error::invalid("frequency grid", "core_step > 0 and growth >= 1 required"));
        }
        let n_core = (core_halfwidth / core_step).round() as i64;
        let mut pts: Vec<f64> = (-n_core..=n_core).map(|j| 1.0 + j as f64 * core_step).collect();

        let mut right = Vec::new();
        let (mut x, mut h) = (1.0 + n_core as f64 * core_step, core_step);
        loop {
            h *= growth;
            x += h;
            if x >= hi {
                right.push(hi);
                break;
            }
            right.push(x);
        }
        let mut left = Vec::new();
        let (mut x, mut h) = (1.0 - n_core as f64 * core_step, core_step);
        loop {
            h *= growth;
            x -= h;
            if x <= lo {
                left.push(lo);
                break;
            }
            left.push(x);
        }
        left.reverse();
        left.append(&mut pts);
        left.append(&mut right);
        Self::from_points(left)
    }

    /// Step γ/10 inside |ω - 1| ≤ 30γ, 2% geometric coarsening out to [0.05, 3].
    pub fn default_for(gamma: f64) -> Result<Self> {
        Self::resonance_refined(0.05, 3.0, 30.0 * gamma, gamma / 10.0, 1.02)
    }

    /// Doubles the resolution by inserting every midpoint.
    pub fn refined(&self) -> Self {
        let mut pts = Vec::with_capacity(2 * self.points.len() - 1);
        for w in self.points.windows(2) {
            pts.push(w[0]);
            pts.push(0.5 * (w[0] + w[1]));
        }
        pts.push(*self.points.last().unwrap());
        Self { points: pts }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest spacing among intervals lying within `halfwidth` of ω = 1.
    pub fn max_step_near_resonance(&self, halfwidth: f64) -> f64 {
        self.points
            .windows(2)
            .filter(|w| (w[0] - 1.0).abs() <= halfwidth && (w[1] - 1.0).abs() <= halfwidth)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }
}
