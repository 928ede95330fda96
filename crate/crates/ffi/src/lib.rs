//! C ABI over the `packet_atom` solvers.
//!
//! Every function returns a [`PaStatus`]; on failure the message is kept in a
//! thread-local slot readable with [`pa_last_error_message`]. Models are
//! opaque handles created by `*_new` and released by `*_free`.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use packet_atom::first_order::{self, FirstOrderModel};
use packet_atom::grid::TimeGrid;
use packet_atom::semiclassical;
use packet_atom::{modes, spectrum, ww, AtomSpec, Error, PacketSpec, QuadratureConfig};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Quadrature = 3,
    Ode = 4,
    DivisionHazard = 5,
    RecurrenceWindow = 6,
    InsufficientCoverage = 7,
    Panic = 8,
}

impl From<&Error> for PaStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidParameter { .. } => PaStatus::InvalidParameter,
            Error::Quadrature { .. } => PaStatus::Quadrature,
            Error::Ode { .. } => PaStatus::Ode,
            Error::DivisionHazard { .. } => PaStatus::DivisionHazard,
            Error::RecurrenceWindow { .. } => PaStatus::RecurrenceWindow,
            Error::InsufficientCoverage { .. } => PaStatus::InsufficientCoverage,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(f: impl FnOnce() -> Result<(), PaFailure>) -> PaStatus {
    set_error(String::new());
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PaStatus::Ok,
        Ok(Err(PaFailure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PaStatus::Panic
        }
    }
}

struct PaFailure(PaStatus, String);

impl From<Error> for PaFailure {
    fn from(e: Error) -> Self {
        PaFailure(PaStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> PaFailure {
    PaFailure(PaStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, PaFailure> {
    p.as_mut().ok_or_else(|| null(what))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length excluding the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn pa_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Zeroth-order model of an excited atom and a one-photon packet.
pub struct PaModel {
    inner: ww::WWModel,
}

/// Creates a model with decay constant `gamma`, packet width `kappa` and
/// displacement `lambda` (negative: the packet approaches the atom).
///
/// # Safety
/// `model` must be a valid pointer; on success it receives a handle to be
/// released with [`pa_model_free`].
#[no_mangle]
pub unsafe extern "C" fn pa_model_new(gamma: f64, kappa: f64, lambda: f64, model: *mut *mut PaModel) -> PaStatus {
    guard(|| {
        let slot = out(model, "model")?;
        let atom = AtomSpec::new(gamma)?;
        let packet = PacketSpec::new(kappa, lambda)?;
        let inner = ww::WWModel::new(atom, packet, QuadratureConfig::for_model(gamma, kappa))?;
        *slot = Box::into_raw(Box::new(PaModel { inner }));
        Ok(())
    })
}

/// Releases a model. Null is accepted.
///
/// # Safety
/// `model` must be null or a handle from [`pa_model_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pa_model_free(model: *mut PaModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Sets the wavenumber domain [-k_max, k_max] and relative tolerance.
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pa_model_set_quadrature(model: *mut PaModel, k_max: f64, rel_tol: f64) -> PaStatus {
    guard(|| {
        let m = out(model, "model")?;
        let mut quad = m.inner.quad;
        quad.k_min = -k_max;
        quad.k_max = k_max;
        quad.rel_tol = rel_tol;
        m.inner = ww::WWModel::new(m.inner.atom, m.inner.packet, quad)?;
        Ok(())
    })
}

/// Ground-state probability P-(t) and its error estimate.
///
/// # Safety
/// `model` must be a live handle; `value` and `error` valid pointers
/// (`error` may be null).
#[no_mangle]
pub unsafe extern "C" fn pa_prob_ground(model: *const PaModel, t: f64, value: *mut f64, error: *mut f64) -> PaStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let v = out(value, "value")?;
        let e = ww::prob_ground(t, &m.inner)?;
        *v = e.value;
        if let Some(err) = error.as_mut() {
            *err = e.error;
        }
        Ok(())
    })
}

/// P-(t) on `n_points` uniform times in [0, t_end]; writes `times` and
/// `p_minus`, each of length `n_points`.
///
/// # Safety
/// `times` and `p_minus` must each point to `n_points` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pa_kinetics_trace(
    model: *const PaModel,
    t_end: f64,
    n_points: usize,
    times: *mut f64,
    p_minus: *mut f64,
) -> PaStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        if times.is_null() {
            return Err(null("times"));
        }
        if p_minus.is_null() {
            return Err(null("p_minus"));
        }
        let grid = TimeGrid::new(0.0, t_end, n_points)?;
        let trace = ww::kinetics_trace(&m.inner, &grid)?;
        std::slice::from_raw_parts_mut(times, n_points).copy_from_slice(&trace.times);
        std::slice::from_raw_parts_mut(p_minus, n_points).copy_from_slice(&trace.p_minus);
        Ok(())
    })
}

/// Stimulated change of the final excited population: quadrature value and
/// the closed-form estimate.
///
/// # Safety
/// `model` must be a live handle; outputs valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pa_induced_shift(model: *const PaModel, numerical: *mut f64, closed_form: *mut f64) -> PaStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let n = out(numerical, "numerical")?;
        let c = out(closed_form, "closed_form")?;
        let s = ww::induced_shift_quantum(&m.inner)?;
        *n = s.numerical;
        *c = s.closed_form;
        Ok(())
    })
}

/// Spectral density S(omega) of the photons left after the emission.
///
/// # Safety
/// `model` must be a live handle; `value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pa_spectral_density(model: *const PaModel, omega: f64, value: *mut f64) -> PaStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let v = out(value, "value")?;
        *v = spectrum::spectral_density(omega, &m.inner)?;
        Ok(())
    })
}

/// First-order model of an initially excited atom in a box of length `length`.
pub struct PaFirstOrder {
    inner: FirstOrderModel,
}

/// # Safety
/// `model` must be a valid pointer; release the handle with
/// [`pa_first_order_free`].
#[no_mangle]
pub unsafe extern "C" fn pa_first_order_new(
    gamma: f64,
    kappa: f64,
    lambda: f64,
    length: f64,
    model: *mut *mut PaFirstOrder,
) -> PaStatus {
    guard(|| {
        let slot = out(model, "model")?;
        let inner = FirstOrderModel::new(AtomSpec::new(gamma)?, PacketSpec::new(kappa, lambda)?, length)?;
        *slot = Box::into_raw(Box::new(PaFirstOrder { inner }));
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle from [`pa_first_order_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pa_first_order_free(model: *mut PaFirstOrder) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Excited-state probability P+(t) with the first-order packet correction.
///
/// # Safety
/// `model` must be a live handle; `value` valid, `error` valid or null.
#[no_mangle]
pub unsafe extern "C" fn pa_first_order_prob_excited(
    model: *const PaFirstOrder,
    t: f64,
    value: *mut f64,
    error: *mut f64,
) -> PaStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let v = out(value, "value")?;
        let e = first_order::prob_excited_first_order(t, &m.inner)?;
        *v = e.value;
        if let Some(err) = error.as_mut() {
            *err = e.error;
        }
        Ok(())
    })
}

/// Semiclassical one-dimensional shift for inversion `w` at arrival.
///
/// # Safety
/// `value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pa_semiclassical_shift_1d(w: f64, gamma: f64, delta: f64, value: *mut f64) -> PaStatus {
    guard(|| {
        let v = out(value, "value")?;
        *v = semiclassical::induced_shift_1d(w, gamma, delta)?;
        Ok(())
    })
}

/// Peak excitation of a ground-state atom scattering the packet in a box of
/// `n_modes` modes, integrated on `n_points` times in [0, t_end].
///
/// # Safety
/// `peak` and `peak_time` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pa_mode_scattering_peak(
    gamma: f64,
    kappa: f64,
    lambda: f64,
    length: f64,
    n_modes: usize,
    t_end: f64,
    n_points: usize,
    peak: *mut f64,
    peak_time: *mut f64,
) -> PaStatus {
    guard(|| {
        let p = out(peak, "peak")?;
        let pt = out(peak_time, "peak_time")?;
        let system = modes::build_mode_system(length, n_modes, gamma)?;
        let grid = TimeGrid::new(0.0, t_end, n_points)?;
        let sc = modes::scatter_on_ground_state(&system, &PacketSpec::new(kappa, lambda)?, &grid)?;
        *p = sc.peak;
        *pt = sc.peak_time;
        Ok(())
    })
}
