use sharpbound_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; sb_last_error_length() + 1];
    unsafe { sb_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn surface_tension_and_lobachevsky() {
    let (mut v, mut g) = (0.0, [0.0; 2]);
    let st = unsafe { sb_surface_tension_t(1.0 / 3.0, 1.0 / 3.0, &mut v, g.as_mut_ptr()) };
    assert_eq!(st, SbStatus::Ok);
    // −(3/π²) 𝕃(π/3)
    let l = 0.5
        * (0..200_000)
            .map(|k| ((k + 1) as f64 * 2.0 * std::f64::consts::PI / 3.0).sin() / ((k + 1) as f64).powi(2))
            .sum::<f64>();
    assert!((v + 3.0 * l / std::f64::consts::PI.powi(2)).abs() < 1e-8);
    assert!(g[0].abs() < 1e-14 && g[1].abs() < 1e-14);
    assert!(sb_lobachevsky(std::f64::consts::PI).abs() < 1e-14);

    let st = unsafe { sb_surface_tension_t(0.8, 0.8, &mut v, g.as_mut_ptr()) };
    assert_eq!(st, SbStatus::OutsideDomain);
    assert!(last_error().contains("outside"));
}

#[test]
fn null_pointers_are_reported() {
    let st = unsafe { sb_surface_tension_t(0.2, 0.2, ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(st, SbStatus::NullPointer);
    assert!(last_error().contains("value"));
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sb_domain_from_json(ptr::null(), &mut out) }, SbStatus::NullPointer);
    assert_eq!(unsafe { sb_solution_len(ptr::null()) }, 0);
    unsafe { sb_domain_free(ptr::null_mut()) };
}

#[test]
fn domain_roundtrip_and_errors() {
    let json = CString::new(r#"{"schema_version":1,"dimension":2,"kind":"box","vertices":[[0,0],[1,1]]}"#).unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { sb_domain_from_json(json.as_ptr(), &mut d) }, SbStatus::Ok);
    assert_eq!(unsafe { sb_domain_dim(d) }, 2);
    let mut dist = 0.0;
    assert_eq!(unsafe { sb_domain_distance(d, [0.3, 0.5].as_ptr(), 2, &mut dist) }, SbStatus::Ok);
    assert!((dist - 0.3).abs() < 1e-15);
    assert_eq!(unsafe { sb_domain_distance(d, [0.3].as_ptr(), 1, &mut dist) }, SbStatus::InvalidArgument);
    unsafe { sb_domain_free(d) };

    let bad = CString::new(r#"{"schema_version":1,"dimension":2,"kind":"torus"}"#).unwrap();
    assert_eq!(unsafe { sb_domain_from_json(bad.as_ptr(), &mut d) }, SbStatus::InvalidArgument);
    let line = [0.0, 0.0, 1.0, 0.0, 2.0, 0.0];
    assert_eq!(unsafe { sb_domain_polygon(line.as_ptr(), 3, &mut d) }, SbStatus::Geometry);
}

#[test]
fn solve_interpolate_compare() {
    let tri = [0.0, 0.0, 1.0, 0.0, 0.0, 1.0];
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { sb_domain_polygon(tri.as_ptr(), 3, &mut d) }, SbStatus::Ok);
    let (one, two, geo) =
        (CString::new("const:1").unwrap(), CString::new("const:2").unwrap(), CString::new("geo").unwrap());
    let (mut s1, mut s2) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(
        unsafe { sb_solve(d, one.as_ptr(), geo.as_ptr(), 1.0 / 16.0, &mut s1) },
        SbStatus::Ok,
        "{}",
        last_error()
    );
    assert_eq!(unsafe { sb_solve(d, two.as_ptr(), geo.as_ptr(), 1.0 / 16.0, &mut s2) }, SbStatus::Ok);
    let n = unsafe { sb_solution_len(s1) };
    assert!(n > 50);
    let (mut x, mut v, mut m) = ([0.0; 2], 0.0, 0.0);
    assert_eq!(unsafe { sb_solution_node(s1, 0, x.as_mut_ptr(), 2, &mut v, &mut m) }, SbStatus::Ok);
    assert_eq!(unsafe { sb_solution_node(s1, 0, x.as_mut_ptr(), 1, &mut v, &mut m) }, SbStatus::BufferTooSmall);
    assert_eq!(unsafe { sb_solution_node(s1, n, x.as_mut_ptr(), 2, &mut v, &mut m) }, SbStatus::InvalidArgument);
    let mut u = 0.0;
    assert_eq!(unsafe { sb_solution_interpolate(s1, [0.3, 0.3].as_ptr(), 2, &mut u) }, SbStatus::Ok);
    assert!(u < 0.0);
    // More mass, same data: s2 lies below s1.
    let (mut worst, mut pass) = (0.0, 0);
    assert_eq!(unsafe { sb_comparison_check(s1, s2, &mut worst, &mut pass) }, SbStatus::Ok, "{}", last_error());
    assert_eq!(pass, 1, "{worst}");

    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("s.csv").to_str().unwrap()).unwrap();
    assert_eq!(unsafe { sb_solution_save(s1, path.as_ptr()) }, SbStatus::Ok);
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { sb_solution_load(path.as_ptr(), &mut back) }, SbStatus::Ok);
    assert_eq!(unsafe { sb_solution_len(back) }, n);
    unsafe {
        sb_solution_free(back);
        sb_solution_free(s1);
        sb_solution_free(s2);
        sb_domain_free(d);
    }
}

#[test]
fn fit_through_the_abi() {
    let d: Vec<f64> = (0..6).map(|j| 0.1 * 0.5f64.powi(j)).collect();
    let v: Vec<f64> = d.iter().map(|x| 2.0 * x.powf(2.0 / 3.0)).collect();
    let model = CString::new("power").unwrap();
    let (mut rate, mut r2) = (0.0, 0.0);
    assert_eq!(unsafe { sb_fit_exponent(d.as_ptr(), v.as_ptr(), 6, model.as_ptr(), &mut rate, &mut r2) }, SbStatus::Ok);
    assert!((rate - 2.0 / 3.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    assert_eq!(
        unsafe { sb_fit_exponent(d.as_ptr(), v.as_ptr(), 3, model.as_ptr(), &mut rate, &mut r2) },
        SbStatus::InvalidArgument
    );
    let bogus = CString::new("cubic").unwrap();
    assert_eq!(
        unsafe { sb_fit_exponent(d.as_ptr(), v.as_ptr(), 6, bogus.as_ptr(), &mut rate, &mut r2) },
        SbStatus::InvalidArgument
    );
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/sharpbound.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let mut count = 0;
    for line in src.lines() {
        if let Some(rest) = line.split("extern \"C\" fn ").nth(1) {
            let name = rest.split('(').next().unwrap();
            assert!(header.contains(&format!("{name}(")), "{name} missing from header");
            count += 1;
        }
    }
    assert!(count >= 15);
    assert!(header.contains("SB_STATUS_OK = 0"));
    assert!(header.contains("typedef struct SbSolution SbSolution"));
}
