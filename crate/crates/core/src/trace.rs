use crate::error::{Error, Result};

/// How the excited-state probability of a trace was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExcitedDefinition {
    /// P₊ := 1 − P₋. Used for the Weisskopf–Wigner route, whose ansatz does
    /// not conserve the norm; this is a definition, not a conservation law.
    ComplementOfGround,
    /// P₊ = |A|² straight from a norm-conserving amplitude solution.
    Direct,
}

/// Time series of level populations from any solver route.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticsTrace {
    pub times: Vec<f64>,
    pub p_minus: Vec<f64>,
    pub p_plus: Vec<f64>,
    pub gamma_of_t: Option<Vec<f64>>,
    pub excited_definition: ExcitedDefinition,
}

impl KineticsTrace {
    pub fn from_ground(times: Vec<f64>, p_minus: Vec<f64>) -> Self {
        let p_plus = p_minus.iter().map(|p| 1.0 - p).collect();
        Self {
            times,
            p_minus,
            p_plus,
            gamma_of_t: None,
            excited_definition: ExcitedDefinition::ComplementOfGround,
        }
    }

    pub fn from_excited(times: Vec<f64>, p_plus: Vec<f64>) -> Self {
        let p_minus = p_plus.iter().map(|p| 1.0 - p).collect();
        Self {
            times,
            p_minus,
            p_plus,
            gamma_of_t: None,
            excited_definition: ExcitedDefinition::Direct,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Central-difference derivative on a (possibly nonuniform) grid; one-sided
/// at the ends.
pub fn derivative(times: &[f64], values: &[f64]) -> Vec<f64> {
    let n = times.len();
    assert_eq!(n, values.len());
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|i| {
            let (l, r) = if i == 0 {
                (0, 1)
            } else if i == n - 1 {
                (n - 2, n - 1)
            } else {
                (i - 1, i + 1)
            };
            (values[r] - values[l]) / (times[r] - times[l])
        })
        .collect()
}

/// Rate samples restricted to the window where the denominator is safe.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSeries {
    pub times: Vec<f64>,
    pub rate: Vec<f64>,
    /// First time at which the denominator fell below the threshold, if any.
    pub truncated_at: Option<f64>,
}

impl RateSeries {
    /// Location and value of the maximum, refined by a parabola through the
    /// top three samples.
    pub fn peak(&self) -> Option<(f64, f64)> {
        self.peak_within(f64::NEG_INFINITY, f64::INFINITY)
    }

    /// [`peak`](Self::peak) restricted to samples with `lo <= t <= hi`.
    pub fn peak_within(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        let (i, _) = self
            .rate
            .iter()
            .enumerate()
            .filter(|(i, _)| self.times[*i] >= lo && self.times[*i] <= hi)
            .max_by(|a, b| a.1.total_cmp(b.1))?;
        if i == 0 || i + 1 >= self.rate.len() {
            return Some((self.times[i], self.rate[i]));
        }
        let (y0, y1, y2) = (self.rate[i - 1], self.rate[i], self.rate[i + 1]);
        let h = self.times[i + 1] - self.times[i];
        let denom = y0 - 2.0 * y1 + y2;
        if denom >= 0.0 {
            return Some((self.times[i], y1));
        }
        let shift = 0.5 * (y0 - y2) / denom;
        Some((self.times[i] + shift * h, y1 - 0.25 * (y0 - y2) * shift))
    }
}

/// Γ(t) = flux(t) / population(t), stopping at the first sample where the
/// population drops to `min_population` or below.
pub fn rate_from_flux(
    times: &[f64],
    flux: &[f64],
    population: &[f64],
    min_population: f64,
) -> Result<RateSeries> {
    let mut out_t = Vec::with_capacity(times.len());
    let mut out_r = Vec::with_capacity(times.len());
    let mut truncated_at = None;
    for ((&t, &f), &p) in times.iter().zip(flux).zip(population) {
        if p <= min_population {
            truncated_at = Some(t);
            break;
        }
        out_t.push(t);
        out_r.push(f / p);
    }
    if out_t.is_empty() {
        let (t, p) = (times.first().copied().unwrap_or(0.0), population.first().copied().unwrap_or(0.0));
        return Err(Error::DivisionHazard { t, p_plus: p });
    }
    Ok(RateSeries {
        times: out_t,
        rate: out_r,
        truncated_at,
    })
}
