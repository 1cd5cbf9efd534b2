use std::ffi::{c_char, CStr, CString};
use std::ptr;

use mobi_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { mobi_string_free(s) };
    text
}

fn last_error() -> String {
    let p = mobi_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn build(name: &str, params: Option<&str>) -> (MobiStatus, *mut MobiStructure) {
    let name = CString::new(name).unwrap();
    let params = params.map(|p| CString::new(p).unwrap());
    let mut handle = ptr::null_mut();
    let status = unsafe {
        mobi_structure_new(
            name.as_ptr(),
            params.as_ref().map_or(ptr::null(), |p| p.as_ptr()),
            &mut handle,
        )
    };
    (status, handle)
}

fn check(handle: *const MobiStructure, samples: usize) -> (MobiStatus, serde_json::Value) {
    let mut out = ptr::null_mut();
    let status = unsafe { mobi_structure_check(handle, samples, 7, &mut out) };
    (status, serde_json::from_str(&take(out)).unwrap())
}

#[test]
fn catalog_listing_is_json() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { mobi_catalog_list(&mut out) }, MobiStatus::Ok);
    let list: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert!(list
        .as_array()
        .unwrap()
        .iter()
        .any(|e| e["name"] == "projectile-space"));
}

#[test]
fn structures_are_built_checked_and_freed() {
    let (status, h) = build("zmod-algebra", Some("m=5"));
    assert_eq!(status, MobiStatus::Ok);
    let mut kind = MobiKind::Space;
    assert_eq!(unsafe { mobi_structure_kind(h, &mut kind) }, MobiStatus::Ok);
    assert_eq!(kind, MobiKind::Algebra);
    let (status, reports) = check(h, 0);
    assert_eq!(status, MobiStatus::Ok);
    assert!(reports
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["verdict"] == "pass"));
    unsafe { mobi_structure_free(h) };

    let (status, h) = build("projectile-space", Some("n=2  k=1,3"));
    assert_eq!(status, MobiStatus::Ok, "{}", last_error());
    assert_eq!(check(h, 40).0, MobiStatus::Ok);
    unsafe { mobi_structure_free(h) };
}

#[test]
fn failing_laws_report_law_failed_with_a_report() {
    let (status, h) = build("nonaffine-complex-space", None);
    assert_eq!(status, MobiStatus::Ok);
    let (status, reports) = check(h, 40);
    // the space axioms hold; it is only the derived module that fails
    assert_eq!(status, MobiStatus::Ok);
    assert!(!reports.as_array().unwrap().is_empty());
    unsafe { mobi_structure_free(h) };

    let source = CString::new(
        "algebra proj {\n carrier: Q\n zero: 0\n half: 1/2\n one: 1\n p(a, b, c) = a\n}\n",
    )
    .unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { mobi_dsl_check(source.as_ptr(), 30, 1, &mut out) },
        MobiStatus::LawFailed
    );
    let reports: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert!(reports
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["verdict"] == "fail"));
}

#[test]
fn error_codes_and_messages() {
    assert_eq!(build("no-such-thing", None).0, MobiStatus::UnknownName);
    assert!(last_error().contains("no-such-thing"));
    assert_eq!(
        build("zmod-algebra", Some("m=4")).0,
        MobiStatus::InvalidParameter
    );
    assert_eq!(
        build("projectile-space", Some("bogus=1")).0,
        MobiStatus::InvalidParameter
    );

    let mut handle = ptr::null_mut();
    assert_eq!(
        unsafe { mobi_structure_new(ptr::null(), ptr::null(), &mut handle) },
        MobiStatus::NullArgument
    );
    assert!(handle.is_null());
    let bad = [0xffu8, 0];
    assert_eq!(
        unsafe { mobi_structure_new(bad.as_ptr().cast(), ptr::null(), &mut handle) },
        MobiStatus::InvalidUtf8
    );
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { mobi_structure_check(ptr::null(), 1, 0, &mut out) },
        MobiStatus::NullArgument
    );
    assert!(out.is_null());

    let source = CString::new("algebra a {\n carrier: Q\n p(a, b, c) = a +\n}\n").unwrap();
    assert_eq!(
        unsafe { mobi_dsl_check(source.as_ptr(), 10, 0, &mut out) },
        MobiStatus::ParseError
    );
    assert!(last_error().starts_with("4:1:"), "{}", last_error());

    // freeing null is a no-op
    unsafe {
        mobi_structure_free(ptr::null_mut());
        mobi_string_free(ptr::null_mut());
    }
}

#[test]
fn search_through_the_interface() {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { mobi_search(3, false, 0, &mut out) },
        MobiStatus::Ok
    );
    let models: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(models.as_array().unwrap().len(), 1);
    assert_eq!(
        unsafe { mobi_search(0, false, 0, &mut out) },
        MobiStatus::InvalidParameter
    );
}
