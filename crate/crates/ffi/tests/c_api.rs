use std::ffi::{c_char, CStr};
use std::path::Path;
use std::process::Command;
use std::ptr;

use packet_atom_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    unsafe {
        pa_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn model(lambda: f64) -> *mut PaModel {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { pa_model_new(0.0125, 0.25, lambda, &mut m) }, PaStatus::Ok);
    assert!(!m.is_null());
    m
}

#[test]
fn ground_probability_matches_the_library() {
    let m = model(-20.0);
    let (mut v, mut e) = (0.0, 0.0);
    assert_eq!(unsafe { pa_prob_ground(m, 50.0, &mut v, &mut e) }, PaStatus::Ok);
    let lib = packet_atom::ww::prob_ground(
        50.0,
        &packet_atom::ww::WWModel::with_defaults(
            packet_atom::AtomSpec::new(0.0125).unwrap(),
            packet_atom::PacketSpec::new(0.25, -20.0).unwrap(),
        ),
    )
    .unwrap();
    assert_eq!(v, lib.value);
    assert!(e >= 0.0);
    unsafe { pa_model_free(m) };
}

#[test]
fn trace_fills_both_buffers() {
    let m = model(20.0);
    let mut t = vec![0.0; 11];
    let mut p = vec![f64::NAN; 11];
    assert_eq!(
        unsafe { pa_kinetics_trace(m, 100.0, 11, t.as_mut_ptr(), p.as_mut_ptr()) },
        PaStatus::Ok
    );
    assert_eq!(t[10], 100.0);
    assert_eq!(p[0], 0.0);
    assert!(p.windows(2).all(|w| w[1] > w[0]));
    unsafe { pa_model_free(m) };
}

#[test]
fn invalid_input_sets_status_and_message() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { pa_model_new(-1.0, 0.25, -20.0, &mut m) }, PaStatus::InvalidParameter);
    assert!(m.is_null());
    assert!(last_error().contains("gamma"));

    let m = model(-20.0);
    assert_eq!(unsafe { pa_model_set_quadrature(m, 1.5, 1e-10) }, PaStatus::InvalidParameter);
    let mut v = 0.0;
    assert_eq!(unsafe { pa_prob_ground(m, -1.0, &mut v, ptr::null_mut()) }, PaStatus::InvalidParameter);
    assert_eq!(unsafe { pa_prob_ground(m, 1.0, ptr::null_mut(), ptr::null_mut()) }, PaStatus::NullPointer);
    assert_eq!(unsafe { pa_prob_ground(ptr::null(), 1.0, &mut v, ptr::null_mut()) }, PaStatus::NullPointer);
    assert_eq!(unsafe { pa_prob_ground(m, 1.0, &mut v, ptr::null_mut()) }, PaStatus::Ok);
    assert!(last_error().is_empty());
    unsafe {
        pa_model_free(m);
        pa_model_free(ptr::null_mut());
    }
}

#[test]
fn recurrence_window_has_its_own_code() {
    let (mut p, mut t) = (0.0, 0.0);
    let s = unsafe { pa_mode_scattering_peak(0.0125, 0.25, -20.0, 251.32, 159, 260.0, 100, &mut p, &mut t) };
    assert_eq!(s, PaStatus::RecurrenceWindow);
}

#[test]
fn semiclassical_closed_form() {
    let mut v = 0.0;
    assert_eq!(unsafe { pa_semiclassical_shift_1d(-1.0, 0.0125, 0.25, &mut v) }, PaStatus::Ok);
    assert!((v - (2.0 * std::f64::consts::PI).sqrt() * 0.05).abs() < 1e-15);
}

#[test]
fn first_order_handle_round_trip() {
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { pa_first_order_new(0.0125, 0.25, -20.0, 251.32, &mut m) },
        PaStatus::Ok
    );
    let mut v = f64::NAN;
    assert_eq!(unsafe { pa_first_order_prob_excited(m, 0.0, &mut v, ptr::null_mut()) }, PaStatus::Ok);
    assert!((v - 1.0).abs() < 1e-12);
    unsafe { pa_first_order_free(m) };
}

#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/packet_atom.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["pa_model_new", "pa_last_error_message", "PA_STATUS_RECURRENCE_WINDOW", "typedef struct PaModel PaModel"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler available; syntax check skipped");
        return;
    };
    assert!(status.success());
}
