//! Scenario runner behind the `packet-atom` binary.

pub mod config;
pub mod output;

use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::Error;
use crate::first_order::{self, FirstOrderModel, Variant};
use crate::grid::{FrequencyGrid, TimeGrid};
use crate::modes;
use crate::quadrature::{QuadratureConfig, Tolerance};
use crate::semiclassical::{self, cgs, BlochParams, PulseSpec};
use crate::spectrum;
use crate::units::{AtomSpec, PacketSpec};
use crate::ww::{self, RateDenominator, WWModel};

pub use config::{ConfigError, RunConfig, SCENARIOS};
use output::{fmt_num, labelled_csv, svg_plot, Series, Table};

/// Reference numbers printed next to the computed ones.
pub mod reference {
    pub const INDUCED_SHIFT: f64 = -0.076;
    pub const RATE_PEAK_TIME: f64 = 21.6;
    pub const RATE_PEAK_RATIO: f64 = 1.94;
    pub const SHIFT_1D_T20: f64 = -0.027;
    pub const SHIFT_1D_GROUND: f64 = 0.125;
    pub const FIRST_ORDER_SHIFT_20: f64 = -0.059;
    pub const FIRST_ORDER_SHIFT_130: f64 = 3e-3;
    pub const SCATTERING_EXCITATION: f64 = 0.105;
    pub const BROADENING: f64 = 0.11;
    pub const GAMMA1_CGS: f64 = 1.34e7;
    pub const FIELD_CGS: f64 = 1.18e-5;
    pub const RABI_CGS: f64 = 2.56e4;
    pub const SIGMA_CGS: f64 = 1.35e-9;
    pub const MAX_SHIFT_CGS: f64 = 2.15e-9;
}

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{module}: {source}")]
    Solver {
        module: &'static str,
        #[source]
        source: Error,
    },
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
}

impl AppError {
    /// 2 for configuration problems, 3 for solver failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            AppError::Solver { .. } => 3,
            AppError::Io(_) => 1,
        }
    }
}

fn solver(module: &'static str) -> impl Fn(Error) -> AppError {
    move |source| match source {
        Error::InvalidParameter { .. } => AppError::Config(ConfigError(format!("{module}: {source}"))),
        _ => AppError::Solver { module, source },
    }
}

/// One headline number.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryLine {
    pub label: String,
    pub computed: f64,
    pub reference: Option<f64>,
}

impl fmt::Display for SummaryLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.label, fmt_num(self.computed))?;
        if let Some(r) = self.reference {
            let abs = self.computed - r;
            let rel = if r != 0.0 { abs / r.abs() } else { f64::NAN };
            write!(
                f,
                "  (reference {}, deviation {} abs, {:+.2}% rel)",
                fmt_num(r),
                fmt_num(abs),
                100.0 * rel
            )?;
        }
        Ok(())
    }
}

/// Files written and headline numbers of one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Manifest {
    pub scenario: String,
    pub files: Vec<PathBuf>,
    pub summary: Vec<SummaryLine>,
}

impl Manifest {
    fn line(&mut self, label: impl Into<String>, computed: f64, reference: Option<f64>) {
        self.summary.push(SummaryLine {
            label: label.into(),
            computed,
            reference,
        });
    }

    fn write(&mut self, dir: &Path, name: &str, contents: &str) -> Result<(), AppError> {
        let path = dir.join(name);
        std::fs::write(&path, contents)?;
        self.files.push(path);
        Ok(())
    }
}

impl fmt::Display for Manifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}", self.scenario)?;
        for p in &self.files {
            writeln!(f, "  wrote {}", p.display())?;
        }
        for l in &self.summary {
            writeln!(f, "  {l}")?;
        }
        Ok(())
    }
}

/// Objects derived from a configuration.
struct Setup<'a> {
    cfg: &'a RunConfig,
    atom: AtomSpec,
    hit: PacketSpec,
    miss: PacketSpec,
    quad: QuadratureConfig,
}

impl<'a> Setup<'a> {
    fn new(cfg: &'a RunConfig) -> Result<Self, AppError> {
        let p = &cfg.physics;
        let atom = AtomSpec::new(p.gamma).map_err(solver("core"))?;
        let hit = PacketSpec::new(p.kappa, -p.displacement).map_err(solver("core"))?;
        let mut quad = QuadratureConfig::for_model(p.gamma, p.kappa);
        quad.k_min = -cfg.numerics.k_max;
        quad.k_max = cfg.numerics.k_max;
        quad.rel_tol = cfg.numerics.rel_tol;
        quad.validate(p.gamma, p.kappa).map_err(solver("core"))?;
        Ok(Self {
            cfg,
            atom,
            hit,
            miss: hit.missing(),
            quad,
        })
    }

    fn ww(&self, packet: PacketSpec) -> Result<WWModel, AppError> {
        WWModel::new(self.atom, packet, self.quad).map_err(solver("ww-kinetics"))
    }

    fn time_grid(&self) -> Result<TimeGrid, AppError> {
        let n = &self.cfg.numerics;
        TimeGrid::new(0.0, n.t_end, n.n_times).map_err(solver("core"))
    }

    fn frequency_grid(&self) -> Result<FrequencyGrid, AppError> {
        let n = &self.cfg.numerics;
        let g = self.atom.gamma();
        FrequencyGrid::resonance_refined(
            n.omega_min,
            n.omega_max,
            n.omega_core_halfwidth * g,
            n.omega_core_step * g,
            n.omega_growth,
        )
        .map_err(solver("spectrum"))
    }

    fn arrival(&self) -> f64 {
        self.hit.arrival_time()
    }
}

/// Runs `scenario`, writing its CSV (and optionally SVG) files into the
/// configured output directory.
pub fn run(scenario: &str, cfg: &RunConfig) -> Result<Manifest, AppError> {
    cfg.validate()?;
    let setup = Setup::new(cfg)?;
    let dir = cfg.output.dir.clone();
    std::fs::create_dir_all(&dir)?;
    let mut m = Manifest {
        scenario: scenario.to_string(),
        ..Manifest::default()
    };
    match scenario {
        "fig1" => fig1(&setup, &dir, &mut m)?,
        "fig2" => fig2(&setup, &dir, &mut m)?,
        "fig3" => fig3(&setup, &dir, &mut m)?,
        "fig4" => fig4(&setup, &dir, &mut m)?,
        "fig5" => fig5(&setup, &dir, &mut m)?,
        "semiclassical-table" => semiclassical_table(&setup, &dir, &mut m)?,
        "shift-table" => shift_table(&setup, &dir, &mut m)?,
        "scaling-check" => scaling_check(&setup, &dir, &mut m)?,
        other => {
            return Err(AppError::Config(ConfigError(format!(
                "unknown scenario `{other}`; expected one of {}",
                SCENARIOS.join(", ")
            ))))
        }
    }
    Ok(m)
}

fn traces(s: &Setup) -> Result<(crate::KineticsTrace, crate::KineticsTrace), AppError> {
    let grid = s.time_grid()?;
    let hit = ww::kinetics_trace(&s.ww(s.hit)?, &grid).map_err(solver("ww-kinetics"))?;
    let miss = ww::kinetics_trace(&s.ww(s.miss)?, &grid).map_err(solver("ww-kinetics"))?;
    Ok((hit, miss))
}

fn fig1(s: &Setup, dir: &Path, m: &mut Manifest) -> Result<(), AppError> {
    let (hit, miss) = traces(s)?;
    let mut t = Table::new(&["t", "p_minus_hit", "p_minus_miss"]);
    for i in 0..hit.len() {
        t.push(&[hit.times[i], hit.p_minus[i], miss.p_minus[i]]);
    }
    m.write(dir, "fig1.csv", &t.to_csv())?;
    if s.cfg.output.svg {
        let svg = svg_plot(
            "Ground-state probability",
            "t",
            "P-",
            &[
                Series { name: "hit", x: &hit.times, y: &hit.p_minus, dashed: false },
                Series { name: "miss", x: &miss.times, y: &miss.p_minus, dashed: true },
            ],
        );
        m.write(dir, "fig1.svg", &svg)?;
    }
    let last = hit.len() - 1;
    let g = s.atom.gamma();
    m.line(
        format!("induced shift -(P-hit - P-miss) at t = {}", hit.times[last]),
        -(hit.p_minus[last] - miss.p_minus[last]),
        Some(reference::INDUCED_SHIFT),
    );
    m.line(
        "induced shift, closed form",
        ww::induced_shift_closed_form(s.arrival(), g, s.hit.spectral_width()),
        Some(reference::INDUCED_SHIFT),
    );
    m.line("P-hit at t_end", hit.p_minus[last], None);
    m.line("P-miss at t_end", miss.p_minus[last], Some(1.0));
    Ok(())
}

fn padded(times: &[f64], r: &crate::trace::RateSeries) -> Vec<f64> {
    let mut v = r.rate.clone();
    v.resize(times.len(), f64::NAN);
    v
}

fn fig2(s: &Setup, dir: &Path, m: &mut Manifest) -> Result<(), AppError> {
    let (hit, miss) = traces(s)?;
    let g = s.atom.gamma();
    let ansatz = RateDenominator::Ansatz { gamma: g };
    let r_hit = ww::decay_rate(&hit, ansatz).map_err(solver("ww-kinetics"))?;
    let r_hit_c = ww::decay_rate(&hit, RateDenominator::Complement).map_err(solver("ww-kinetics"))?;
    let r_miss = ww::decay_rate(&miss, ansatz).map_err(solver("ww-kinetics"))?;
    let (a, b, c) = (padded(&hit.times, &r_hit), padded(&hit.times, &r_hit_c), padded(&hit.times, &r_miss));
    let free = vec![2.0 * g; hit.len()];
    let mut t = Table::new(&["t", "gamma_hit", "gamma_hit_complement", "gamma_miss", "gamma_free"]);
    for i in 0..hit.len() {
        t.push(&[hit.times[i], a[i], b[i], c[i], free[i]]);
    }
    m.write(dir, "fig2.csv", &t.to_csv())?;
    if s.cfg.output.svg {
        let svg = svg_plot(
            "Downward transition rate",
            "t",
            "Gamma(t)",
            &[
                Series { name: "hit", x: &hit.times, y: &a, dashed: false },
                Series { name: "miss", x: &hit.times, y: &c, dashed: true },
                Series { name: "2 gamma", x: &hit.times, y: &free, dashed: true },
            ],
        );
        m.write(dir, "fig2.svg", &svg)?;
    }
    let window_end = 3.0 * s.arrival().max(10.0);
    if let Some((tp, peak)) = r_hit.peak_within(0.0, window_end) {
        m.line("rate peak time", tp, Some(reference::RATE_PEAK_TIME));
        m.line("rate peak / 2 gamma", peak / (2.0 * g), Some(reference::RATE_PEAK_RATIO));
    }
    if let Some((tp, peak)) = r_hit_c.peak_within(0.0, window_end) {
        m.line("rate peak time, 1 - P- denominator", tp, None);
        m.line("rate peak / 2 gamma, 1 - P- denominator", peak / (2.0 * g), None);
    }
    let in_window: Vec<f64> = r_miss
        .times
        .iter()
        .zip(&r_miss.rate)
        .filter(|(t, _)| **t >= 5.0 && **t <= 100.0)
        .map(|(_, r)| *r)
        .collect();
    if !in_window.is_empty() {
        let mean = in_window.iter().sum::<f64>() / in_window.len() as f64;
        m.line("miss rate, mean over t in [5, 100]", mean, Some(2.0 * g));
    }
    Ok(())
}

fn fig3(s: &Setup, dir: &Path, m: &mut Manifest) -> Result<(), AppError> {
    let p = &s.cfg.physics;
    let n = &s.cfg.numerics;
    let system = modes::build_mode_system(p.length, p.n_modes, p.gamma).map_err(solver("mode-ode"))?;
    let grid = TimeGrid::new(0.0, n.mode_t_end, n.mode_n_times).map_err(solver("core"))?;
    let sc = modes::scatter_on_ground_state(&system, &s.hit, &grid).map_err(solver("mode-ode"))?;
    let sp = modes::spontaneous_decay(&system, &grid).map_err(solver("mode-ode"))?;
    let free: Vec<f64> = sc.trace.times.iter().map(|t| (-2.0 * p.gamma * t).exp()).collect();
    let mut t = Table::new(&["t", "p_plus_scattering", "p_plus_spontaneous", "exp_minus_2gamma_t"]);
    for i in 0..sc.trace.len() {
        t.push(&[sc.trace.times[i], sc.trace.p_plus[i], sp.trace.p_plus[i], free[i]]);
    }
    m.write(dir, "fig3.csv", &t.to_csv())?;
    if s.cfg.output.svg {
        let svg = svg_plot(
            "Excitation of a ground-state atom",
            "t",
            "P+",
            &[Series { name: "P+", x: &sc.trace.times, y: &sc.trace.p_plus, dashed: false }],
        );
        m.write(dir, "fig3.svg", &svg)?;
    }
    let semi = semiclassical::induced_shift_1d(-1.0, p.gamma, s.hit.spectral_width()).map_err(solver("semiclassical"))?;
    m.line("spontaneous decay rate, fit over t in [5, 150]", sp.fit.rate, Some(2.0 * p.gamma));
    m.line("scattering excitation (peak P+)", sc.peak, Some(reference::SCATTERING_EXCITATION));
    m.line("peak time", sc.peak_time, None);
    m.line("fixed-rate fit referred to the peak", sc.fixed_rate_at_peak, None);
    m.line("fixed-rate fit referred to the arrival", sc.fixed_rate_at_arrival, None);
    m.line("fitted post-peak rate", sc.fit.rate, Some(2.0 * p.gamma));
    m.line("semiclassical excitation", semi, Some(reference::SHIFT_1D_GROUND));
    m.line(
        "ratio quantum / semiclassical",
        sc.peak / semi,
        Some(reference::SCATTERING_EXCITATION / reference::SHIFT_1D_GROUND),
    );
    m.line("packet mass outside the modes", sc.discarded_mass, None);
    m.line("norm drift", sc.norm_drift.max(sp.norm_drift), None);
    Ok(())
}

fn spectrum_for(s: &Setup, packet: PacketSpec) -> Result<spectrum::SpectrumTrace, AppError> {
    spectrum::spectrum_report(&s.ww(packet)?, &s.frequency_grid()?).map_err(solver("spectrum"))
}

fn fig4(s: &Setup, dir: &Path, m: &mut Manifest) -> Result<(), AppError> {
    let sp = spectrum_for(s, s.hit)?;
    let mut t = Table::new(&["omega", "s", "s0", "log10_s", "log10_s0"]);
    for i in 0..sp.omega.len() {
        t.push(&[sp.omega[i], sp.s[i], sp.s0[i], sp.s[i].log10(), sp.s0[i].log10()]);
    }
    m.write(dir, "fig4.csv", &t.to_csv())?;
    if s.cfg.output.svg {
        let (ls, l0) = (&t.columns[3], &t.columns[4]);
        let svg = svg_plot(
            "Spectrum of the final photons",
            "omega",
            "log10 S",
            &[
                Series { name: "S", x: &sp.omega, y: ls, dashed: false },
                Series { name: "S0", x: &sp.omega, y: l0, dashed: true },
            ],
        );
        m.write(dir, "fig4.svg", &svg)?;
    }
    m.line("half-mass width of S", sp.width_s.length(), None);
    m.line("half-mass width of S0", sp.width_s0.length(), None);
    m.line("relative broadening", sp.broadening(), Some(reference::BROADENING));
    let mass = spectrum::integrated_spectrum(&s.ww(s.hit)?, 1e-7).map_err(solver("spectrum"))?;
    m.line("integral of S / (2 P-(inf))", mass / (2.0 * sp.p_minus_final), Some(1.0));
    m.line("P-(inf)", sp.p_minus_final, None);
    Ok(())
}

fn fig5(s: &Setup, dir: &Path, m: &mut Manifest) -> Result<(), AppError> {
    let hit = spectrum_for(s, s.hit)?;
    let miss = spectrum_for(s, s.miss)?;
    let mut t = Table::new(&["omega", "r", "log10_r", "r_miss"]);
    for i in 0..hit.omega.len() {
        t.push(&[hit.omega[i], hit.r[i], hit.r[i].log10(), miss.r[i]]);
    }
    m.write(dir, "fig5.csv", &t.to_csv())?;
    if s.cfg.output.svg {
        let svg = svg_plot(
            "Ratio of real to basic spectrum",
            "omega",
            "log10 R",
            &[Series { name: "log10 R", x: &hit.omega, y: &t.columns[2], dashed: false }],
        );
        m.write(dir, "fig5.svg", &svg)?;
    }
    let min = hit.r.iter().copied().fold(f64::INFINITY, f64::min);
    let max = hit.r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m.line("min R", min, None);
    m.line("max R", max, None);
    m.line("R above and below 1 (1 = yes)", f64::from(u8::from(hit.ratio_has_both_signs(1e-3))), Some(1.0));
    Ok(())
}

fn semiclassical_table(s: &Setup, dir: &Path, m: &mut Manifest) -> Result<(), AppError> {
    let c = &s.cfg.cgs;
    let ex = cgs::PhysicalExample::new(c.omega0, c.dipole, c.tau, c.area).map_err(solver("semiclassical"))?;
    let r = cgs::cgs_report(&ex).map_err(solver("semiclassical"))?;
    let alt = cgs::cgs_report(&ex.with_dipole(cgs::atomic_dipole())).map_err(solver("semiclassical"))?;
    let rows = vec![
        ("Gamma1 [1/s]".to_string(), vec![r.gamma1, reference::GAMMA1_CGS, alt.gamma1]),
        ("E0 [Gs]".to_string(), vec![r.field_amplitude, reference::FIELD_CGS, alt.field_amplitude]),
        ("Omega0 [1/s]".to_string(), vec![r.rabi_peak, reference::RABI_CGS, alt.rabi_peak]),
        ("sigma0 [cm^2]".to_string(), vec![r.cross_section, reference::SIGMA_CGS, alt.cross_section]),
        ("lambda0 [cm]".to_string(), vec![r.wavelength, f64::NAN, alt.wavelength]),
        ("Omega0/Gamma1".to_string(), vec![r.rabi_peak / r.gamma1, f64::NAN, alt.rabi_peak / alt.gamma1]),
    ];
    m.write(
        dir,
        "cgs.csv",
        &labelled_csv(&["quantity", "computed", "reference", "computed_with_e_a0"], &rows),
    )?;
    for (label, v) in &rows[..4] {
        m.line(label.clone(), v[0], Some(v[1]));
    }
    let table = cgs::shift_table(&ex, cgs::StatedInputs::optical(), reference::MAX_SHIFT_CGS)
        .map_err(solver("semiclassical"))?;
    let shift_rows: Vec<(String, Vec<f64>)> = table
        .iter()
        .map(|row| (row.label.to_string(), vec![row.value, row.reference_over_value]))
        .collect();
    m.write(dir, "cgs_shift.csv", &labelled_csv(&["route", "max_abs_shift", "reference_over_value"], &shift_rows))?;
    for row in &table {
        m.line(format!("max|dP+|, {}", row.label), row.value, Some(reference::MAX_SHIFT_CGS));
    }

    // one-dimensional pulse against the closed form
    let params = BlochParams::spontaneous(&s.atom);
    let delta = s.hit.spectral_width();
    let mut t = Table::new(&["arrival", "w_at_arrival", "closed_form", "impulsive", "bloch_ode"]);
    for arrival in [s.arrival(), 40.0, 100.0, 200.0, 400.0] {
        let pulse = PulseSpec::one_photon_1d(&s.atom, &s.hit.with_arrival(arrival));
        let ode = semiclassical::induced_shift_ode(&params, &pulse, 1.0).map_err(solver("semiclassical"))?;
        let closed = semiclassical::induced_shift_1d(ode.w_at_arrival, s.atom.gamma(), delta).map_err(solver("semiclassical"))?;
        let imp = semiclassical::induced_shift_impulsive(ode.w_at_arrival, &pulse);
        t.push(&[arrival, ode.w_at_arrival, closed, imp.from_area, ode.shift]);
    }
    m.write(dir, "bloch_1d.csv", &t.to_csv())?;
    let w20 = params.free_w(s.arrival(), 1.0);
    m.line(
        format!("1D shift at T = {}", s.arrival()),
        semiclassical::induced_shift_1d(w20, s.atom.gamma(), delta).map_err(solver("semiclassical"))?,
        Some(reference::SHIFT_1D_T20),
    );
    m.line(
        "1D shift at w = -1",
        semiclassical::induced_shift_1d(-1.0, s.atom.gamma(), delta).map_err(solver("semiclassical"))?,
        Some(reference::SHIFT_1D_GROUND),
    );
    m.line(format!("Bloch ODE shift at T = {}", s.arrival()), t.columns[4][0], Some(t.columns[2][0]));
    Ok(())
}

fn first_order_model(s: &Setup) -> Result<FirstOrderModel, AppError> {
    let mut fo = FirstOrderModel::new(s.atom, s.hit, s.cfg.physics.length).map_err(solver("first-order"))?;
    fo.quad = s.quad;
    fo.outer_tol = Tolerance {
        rel: s.cfg.numerics.first_order_rel_tol,
        ..fo.outer_tol
    };
    Ok(fo)
}

fn shift_table(s: &Setup, dir: &Path, m: &mut Manifest) -> Result<(), AppError> {
    let fo = first_order_model(s)?;
    let g = s.atom.gamma();
    let delta = s.hit.spectral_width();
    let arrivals = &s.cfg.numerics.arrivals;
    let scan = first_order::shift_scan(arrivals, &fo).map_err(solver("first-order"))?;
    let mut t = Table::new(&[
        "arrival",
        "p_plus_hit",
        "p_plus_miss",
        "shift_first_order",
        "shift_zeroth_order",
        "shift_semiclassical",
    ]);
    for r in &scan {
        let w = -1.0 + 2.0 * (-2.0 * g * r.arrival).exp();
        t.push(&[
            r.arrival,
            r.hit.value,
            r.miss.value,
            r.shift(),
            ww::induced_shift_closed_form(r.arrival, g, delta),
            semiclassical::induced_shift_1d(w, g, delta).map_err(solver("semiclassical"))?,
        ]);
    }
    m.write(dir, "shift_table.csv", &t.to_csv())?;
    for r in &scan {
        let reference = if r.arrival == 20.0 {
            Some(reference::FIRST_ORDER_SHIFT_20)
        } else if r.arrival == 130.0 {
            Some(reference::FIRST_ORDER_SHIFT_130)
        } else {
            None
        };
        m.line(format!("first-order shift at T = {}", r.arrival), r.shift(), reference);
    }
    let shifts: Vec<f64> = scan.iter().map(|r| r.shift()).collect();
    m.line("sign changes over the scan", first_order::sign_changes(&shifts) as f64, Some(1.0));
    if s.cfg.numerics.first_order_variants {
        let arrival = arrivals[0];
        let mut rows = Vec::new();
        for v in Variant::all() {
            let r = first_order::induced_shift_first_order(arrival, &fo.with_variant(v)).map_err(solver("first-order"))?;
            rows.push((v.label(), vec![arrival, r.hit.value, r.miss.value, r.shift()]));
        }
        m.write(
            dir,
            "shift_variants.csv",
            &labelled_csv(&["variant", "arrival", "p_plus_hit", "p_plus_miss", "shift"], &rows),
        )?;
    }
    Ok(())
}

fn scaling_check(s: &Setup, dir: &Path, m: &mut Manifest) -> Result<(), AppError> {
    let model = s.ww(s.hit)?;
    let t_eval = s.cfg.numerics.scaling_time;
    let continuum = ww::prob_ground(t_eval, &model).map_err(solver("ww-kinetics"))?.value;
    let mut t = Table::new(&["length", "p2", "p2_times_length", "p11_off_diagonal", "p11_plus_p2", "continuum"]);
    for mult in &s.cfg.numerics.length_multiples {
        let l = mult * s.cfg.physics.length;
        let pairs = ww::pair_sums(l, t_eval, &model).map_err(solver("ww-kinetics"))?;
        t.push(&[
            l,
            pairs.doubly_occupied,
            pairs.doubly_occupied * l,
            pairs.off_diagonal,
            pairs.off_diagonal + pairs.doubly_occupied,
            continuum,
        ]);
    }
    m.write(dir, "scaling.csv", &t.to_csv())?;
    let p2 = &t.columns[1];
    let p11 = &t.columns[3];
    for i in 1..p2.len() {
        let ratio = t.columns[0][i] / t.columns[0][i - 1];
        m.line(
            format!("P2 ratio, L = {} vs {}", fmt_num(t.columns[0][i]), fmt_num(t.columns[0][i - 1])),
            p2[i] / p2[i - 1],
            Some(1.0 / ratio),
        );
        m.line(
            format!("P11 ratio, L = {} vs {}", fmt_num(t.columns[0][i]), fmt_num(t.columns[0][i - 1])),
            p11[i] / p11[i - 1],
            Some(1.0),
        );
    }
    m.line("continuum P- at the check time", continuum, None);
    Ok(())
}

/// CSV layouts, shown by `--help`.
pub const CSV_SCHEMAS: &str = "\
CSV files (12 significant digits, '.' decimal separator):
  fig1                fig1.csv: t, p_minus_hit, p_minus_miss
  fig2                fig2.csv: t, gamma_hit, gamma_hit_complement, gamma_miss, gamma_free
                      (rates are nan where the denominator is exhausted)
  fig3                fig3.csv: t, p_plus_scattering, p_plus_spontaneous, exp_minus_2gamma_t
  fig4                fig4.csv: omega, s, s0, log10_s, log10_s0
  fig5                fig5.csv: omega, r, log10_r, r_miss
  semiclassical-table cgs.csv: quantity, computed, reference, computed_with_e_a0
                      cgs_shift.csv: route, max_abs_shift, reference_over_value
                      bloch_1d.csv: arrival, w_at_arrival, closed_form, impulsive, bloch_ode
  shift-table         shift_table.csv: arrival, p_plus_hit, p_plus_miss, shift_first_order,
                      shift_zeroth_order, shift_semiclassical
                      shift_variants.csv (numerics.first_order_variants = true):
                      variant, arrival, p_plus_hit, p_plus_miss, shift
  scaling-check       scaling.csv: length, p2, p2_times_length, p11_off_diagonal,
                      p11_plus_p2, continuum
With --svg, fig1..fig5 also write <scenario>.svg.";
