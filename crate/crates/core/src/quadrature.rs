//! Adaptive 21-point Gauss–Kronrod quadrature with forced breakpoints.
//!
//! The integrands in this crate combine a Gaussian of width κ centred at
//! k = 1 with Lorentzian factors of half-width γ ≪ κ centred at |k| = 1, and
//! a kink at k = 0 from the |k| in the mode frequency. Uniform grids alias the
//! Lorentzian, so every k-space integral starts from panels that are forced
//! to break at 0 and at |k| = 1 ± jγ before the usual worst-panel bisection.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be integrated: reals, complex numbers and small vectors.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_224_654,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// 10-point Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], ...
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// One GK21 panel: Kronrod value, QUADPACK-style error estimate, and the
/// rounding floor of that estimate.
fn gk21<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> (V, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [V::zero(); 21];
    fv[10] = f(center);
    for j in 0..10 {
        let dx = half * XGK[j];
        fv[j] = f(center - dx);
        fv[20 - j] = f(center + dx);
    }
    let mut kronrod = fv[10] * WGK[10];
    let mut gauss = V::zero();
    let mut abs_sum = fv[10].magnitude() * WGK[10];
    for j in 0..10 {
        let pair = fv[j] + fv[20 - j];
        kronrod = kronrod + pair * WGK[j];
        abs_sum += (fv[j].magnitude() + fv[20 - j].magnitude()) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut asc = WGK[10] * (fv[10] - mean).magnitude();
    for j in 0..10 {
        asc += WGK[j] * ((fv[j] - mean).magnitude() + (fv[20 - j] - mean).magnitude());
    }
    let hl = half.abs();
    let asc = asc * hl;
    let abs_int = abs_sum * hl;
    let mut err = (kronrod - gauss).magnitude() * hl;
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * abs_int;
    if abs_int > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    (kronrod * half, err, floor)
}

/// Stopping rule for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_subdivisions: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-14,
            rel: 1e-10,
            max_subdivisions: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<V> {
    pub value: V,
    pub error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
    floor: f64,
}

impl<V> PartialEq for Panel<V> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<V> Eq for Panel<V> {}
impl<V> PartialOrd for Panel<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Panel<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Integrates `f` over `[points[0], points[last]]`, starting from one panel per
/// consecutive pair of `points` and bisecting the worst panel until the summed
/// error estimate meets `tol`.
///
/// The returned value is summed in panel position order, so the result is a
/// deterministic function of the inputs.
pub fn integrate<V, F>(mut f: F, points: &[f64], tol: Tolerance) -> Result<QuadResult<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    if points.len() < 2 {
        return Err(Error::invalid("points", "need at least two breakpoints"));
    }
    if points.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("points", "breakpoints must be strictly increasing"));
    }
    let mut heap = BinaryHeap::with_capacity(points.len() * 2);
    let mut done = Vec::new();
    let mut evaluations = 0;
    let mut total = V::zero();
    let mut total_err = 0.0;
    let mut total_floor = 0.0;
    for w in points.windows(2) {
        let (value, error, floor) = gk21(&mut f, w[0], w[1]);
        evaluations += 21;
        total = total + value;
        total_err += error;
        total_floor += floor;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
            floor,
        });
    }
    let mut subdivisions = 0;
    let span = points[points.len() - 1] - points[0];
    loop {
        // error below the rounding floor cannot be removed by bisection
        let target = tol.abs.max(tol.rel * total.magnitude()) + total_floor;
        if total_err <= target {
            // the running sums can cancel catastrophically after a huge panel
            // is replaced, so confirm convergence with a fresh sum
            let (v, e, fl) = heap
                .iter()
                .chain(done.iter())
                .fold((V::zero(), 0.0, 0.0), |(v, e, fl), p| (v + p.value, e + p.error, fl + p.floor));
            total = v;
            total_err = e;
            total_floor = fl;
            if total_err <= tol.abs.max(tol.rel * total.magnitude()) + total_floor {
                break;
            }
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if (worst.b - worst.a) < 1e-13 * span.max(1.0) || mid <= worst.a || mid >= worst.b {
            // cannot be refined further; keep its contribution and move on
            done.push(worst);
            continue;
        }
        if subdivisions >= tol.max_subdivisions {
            heap.push(worst);
            let panels = collect(heap, done);
            let (value, error) = sum_panels(&panels);
            return Err(Error::Quadrature {
                a: points[0],
                b: points[points.len() - 1],
                value: value.magnitude(),
                error,
                subdivisions,
            });
        }
        let (lv, le, lf) = gk21(&mut f, worst.a, mid);
        let (rv, re, rf) = gk21(&mut f, mid, worst.b);
        evaluations += 42;
        subdivisions += 1;
        total = total - worst.value + lv + rv;
        total_err += le + re - worst.error;
        total_floor += lf + rf - worst.floor;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
            floor: lf,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
            floor: rf,
        });
    }
    let panels = collect(heap, done);
    let (value, error) = sum_panels(&panels);
    Ok(QuadResult {
        value,
        error,
        evaluations,
        subdivisions,
    })
}

fn collect<V>(heap: BinaryHeap<Panel<V>>, mut done: Vec<Panel<V>>) -> Vec<Panel<V>> {
    done.extend(heap);
    done.sort_by(|p, q| p.a.total_cmp(&q.a));
    done
}

fn sum_panels<V: QuadValue>(panels: &[Panel<V>]) -> (V, f64) {
    panels
        .iter()
        .fold((V::zero(), 0.0), |(v, e), p| (v + p.value, e + p.error))
}

/// Domain and accuracy settings for k-space integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub k_min: f64,
    pub k_max: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Half-width of the refined zone around each resonance |k| = 1.
    pub resonance_halfwidth: f64,
    /// Spacing of forced breakpoints inside the refined zone.
    pub resonance_step: f64,
    pub max_subdivisions: usize,
}

impl QuadratureConfig {
    /// Default domain [-4, 4] (widened if the resonance or packet tails need
    /// more room), breakpoints every γ within 50γ of each resonance.
    pub fn for_model(gamma: f64, kappa: f64) -> Self {
        let reach = 1.0 + 8.0 * gamma.max(kappa);
        let edge = 4.0f64.max(reach * 1.001);
        Self {
            k_min: -edge,
            k_max: edge,
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            resonance_halfwidth: 50.0 * gamma,
            resonance_step: gamma,
            max_subdivisions: 20_000,
        }
    }

    pub fn validate(&self, gamma: f64, kappa: f64) -> Result<()> {
        let reach = 1.0 + 8.0 * gamma.max(kappa);
        if !(self.k_min < -reach) || !(self.k_max > reach) {
            return Err(Error::invalid(
                "quadrature domain",
                format!(
                    "[{}, {}] must extend beyond ±{reach} to cover the packet and both resonances",
                    self.k_min, self.k_max
                ),
            ));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::invalid("rel_tol", "must be positive"));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::invalid("abs_tol", "must be non-negative"));
        }
        if !(self.resonance_step > 0.0) || !(self.resonance_halfwidth >= 0.0) {
            return Err(Error::invalid("resonance_step", "must be positive"));
        }
        Ok(())
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance {
            abs: self.abs_tol,
            rel: self.rel_tol,
            max_subdivisions: self.max_subdivisions,
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    /// Sorted breakpoints in `[a, b]`: the endpoints, the kink at 0, the
    /// resonance grid |k| = 1 ± jΔ, and any `extra` points.
    pub fn breakpoints(&self, a: f64, b: f64, extra: &[f64]) -> Vec<f64> {
        let mut pts = vec![a, b, 0.0];
        let steps = (self.resonance_halfwidth / self.resonance_step).floor() as i64;
        for center in [-1.0, 1.0] {
            for j in -steps..=steps {
                pts.push(center + j as f64 * self.resonance_step);
            }
        }
        pts.extend_from_slice(extra);
        pts.retain(|p| p.is_finite() && *p >= a && *p <= b);
        pts.sort_by(f64::total_cmp);
        let min_gap = 1e-12 * (b - a).abs().max(1.0);
        let mut out: Vec<f64> = Vec::with_capacity(pts.len());
        for p in pts {
            match out.last() {
                Some(&q) if p - q <= min_gap => {}
                _ => out.push(p),
            }
        }
        if let Some(last) = out.last_mut() {
            *last = b;
        }
        out
    }

    /// Integrates over the whole configured k domain.
    pub fn integrate_k<V, F>(&self, f: F, extra: &[f64]) -> Result<QuadResult<V>>
    where
        V: QuadValue,
        F: FnMut(f64) -> V,
    {
        self.integrate_range(f, self.k_min, self.k_max, extra)
    }

    /// Integrates over `[a, b]` with the resonance-refined initial panels.
    pub fn integrate_range<V, F>(&self, f: F, a: f64, b: f64, extra: &[f64]) -> Result<QuadResult<V>>
    where
        V: QuadValue,
        F: FnMut(f64) -> V,
    {
        if a == b {
            return Ok(QuadResult {
                value: V::zero(),
                error: 0.0,
                evaluations: 0,
                subdivisions: 0,
            });
        }
        let pts = self.breakpoints(a, b, extra);
        integrate(f, &pts, self.tolerance())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact_on_single_panel() {
        let r = integrate(|x: f64| x.powi(7) - 3.0 * x * x, &[-1.0, 2.0], Tolerance::default()).unwrap();
        let exact = (2f64.powi(8) - 1.0) / 8.0 - (8.0 + 1.0);
        assert_relative_eq!(r.value, exact, max_relative = 1e-14);
        assert_eq!(r.subdivisions, 0);
    }

    #[test]
    fn narrow_lorentzian_with_breakpoints() {
        let g = 0.0125;
        let cfg = QuadratureConfig::for_model(g, 0.25);
        let r = cfg
            .integrate_k(|k: f64| g / PI / (g * g + (k - 1.0) * (k - 1.0)), &[])
            .unwrap();
        let exact = (((cfg.k_max - 1.0) / g).atan() - ((cfg.k_min - 1.0) / g).atan()) / PI;
        assert_relative_eq!(r.value, exact, max_relative = 1e-10);
        assert!(r.error < 1e-9);
    }

    #[test]
    fn complex_oscillatory_integrand() {
        // ∫_0^1 e^{i 40 x} dx
        let r = integrate(
            |x: f64| Complex64::new(0.0, 40.0 * x).exp(),
            &[0.0, 1.0],
            Tolerance::default(),
        )
        .unwrap();
        let exact = (Complex64::new(0.0, 40.0).exp() - 1.0) / Complex64::new(0.0, 40.0);
        assert!((r.value - exact).norm() < 1e-12);
    }

    #[test]
    fn reports_nonconvergence_with_estimate() {
        let tol = Tolerance {
            abs: 0.0,
            rel: 1e-15,
            max_subdivisions: 3,
        };
        let err = integrate(|x: f64| (1.0 / x.abs().max(1e-300)).sqrt(), &[-1.0, 1.0], tol).unwrap_err();
        match err {
            Error::Quadrature { subdivisions, error, .. } => {
                assert_eq!(subdivisions, 3);
                assert!(error > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn breakpoints_are_sorted_unique_and_cover_resonances() {
        let cfg = QuadratureConfig::for_model(0.0125, 0.25);
        let pts = cfg.breakpoints(cfg.k_min, cfg.k_max, &[0.3]);
        assert_eq!(pts[0], -4.0);
        assert_eq!(*pts.last().unwrap(), 4.0);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        for p in [1.0, -1.0, 0.0, 0.3, 1.0 + 50.0 * 0.0125] {
            assert!(pts.iter().any(|q| (q - p).abs() < 1e-12), "missing {p}");
        }
    }

    #[test]
    fn validation() {
        let mut cfg = QuadratureConfig::for_model(0.0125, 0.25);
        assert!(cfg.validate(0.0125, 0.25).is_ok());
        cfg.k_max = 2.0;
        assert!(cfg.validate(0.0125, 0.25).is_err());
        let cfg = QuadratureConfig::for_model(0.0125, 0.25).with_rel_tol(0.0);
        assert!(cfg.validate(0.0125, 0.25).is_err());
        assert!(integrate(|x: f64| x, &[1.0, 1.0], Tolerance::default()).is_err());
    }
}
