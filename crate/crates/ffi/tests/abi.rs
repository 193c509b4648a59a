use std::ffi::{CStr, CString};
use std::ptr;

use cram_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(cram_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn bound_and_json() {
    unsafe {
        let mut e = ptr::null_mut();
        assert_eq!(cram_engine_new(&mut e), CramStatus::Ok);
        let (mut lo, mut hi) = (0u32, 0u32);
        let m = [7u32, 4, 3];
        assert_eq!(cram_bound(e, m.as_ptr(), 3, &mut lo, &mut hi), CramStatus::Ok);
        assert_eq!((lo, hi), (9, 9));
        let mut s = ptr::null_mut();
        assert_eq!(cram_bound_json(e, m.as_ptr(), 3, &mut s), CramStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        assert_eq!(v["lo"], 9);
        cram_string_free(s);
        let open = [5u32, 5];
        assert_eq!(cram_bound(e, open.as_ptr(), 2, &mut lo, &mut hi), CramStatus::Ok);
        assert!(lo <= 43 && (hi == 0 || hi >= 43));
        cram_engine_free(e);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut e = ptr::null_mut();
        cram_engine_new(&mut e);
        let (mut lo, mut hi) = (0u32, 0u32);
        assert_eq!(cram_bound(ptr::null(), [3u32].as_ptr(), 1, &mut lo, &mut hi), CramStatus::NullPointer);
        assert!(last_error().contains("engine"));
        assert_eq!(cram_bound(e, ptr::null(), 2, &mut lo, &mut hi), CramStatus::NullPointer);
        assert_eq!(cram_bound(e, [0u32, 3].as_ptr(), 2, &mut lo, &mut hi), CramStatus::InvalidArgument);
        assert!(!last_error().is_empty());
        let missing = CString::new("/nonexistent/table.json").unwrap();
        assert_eq!(cram_engine_load_ramsey_table(e, missing.as_ptr()), CramStatus::Ok);
        let bad_table = std::env::temp_dir().join(format!("cram_ffi_bad_{}.json", std::process::id()));
        std::fs::write(&bad_table, "{ not json").unwrap();
        let path = CString::new(bad_table.to_str().unwrap()).unwrap();
        assert_eq!(cram_engine_load_ramsey_table(e, path.as_ptr()), CramStatus::Parse);
        std::fs::remove_file(&bad_table).unwrap();
        let mut c = ptr::null_mut();
        let bad = CString::new("{\"n\":3,\"k\":1,\"edges\":[]}").unwrap();
        assert_eq!(cram_coloring_from_json(bad.as_ptr(), &mut c), CramStatus::Parse);
        assert!(c.is_null());
        let id = CString::new("W9").unwrap();
        assert_eq!(cram_coloring_builtin(id.as_ptr(), &mut c), CramStatus::InvalidArgument);
        cram_engine_free(e);
        cram_engine_free(ptr::null_mut());
        cram_coloring_free(ptr::null_mut());
        cram_string_free(ptr::null_mut());
    }
}

#[test]
fn search_and_coloring_round_trip() {
    unsafe {
        let m = [4u32, 4, 3];
        let mut exists = false;
        let mut w = ptr::null_mut();
        assert_eq!(cram_exists_good_coloring(6, m.as_ptr(), 3, 0, &mut exists, &mut w), CramStatus::Ok);
        assert!(exists && !w.is_null());
        let (mut n, mut k) = (0usize, 0usize);
        cram_coloring_shape(w, &mut n, &mut k);
        assert_eq!((n, k), (6, 3));
        let mut alpha = [0usize; 3];
        assert_eq!(cram_coloring_alpha(w, alpha.as_mut_ptr(), 3), CramStatus::Ok);
        assert!(alpha.iter().zip(m).all(|(&a, m)| a < m as usize));
        assert_eq!(cram_coloring_alpha(w, alpha.as_mut_ptr(), 2), CramStatus::InvalidArgument);
        let mut json = ptr::null_mut();
        assert_eq!(cram_coloring_to_json(w, &mut json), CramStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(cram_coloring_from_json(json, &mut back), CramStatus::Ok);
        for u in 1..=6 {
            for v in u + 1..=6 {
                let (mut a, mut b) = (0, 0);
                cram_coloring_color(w, u, v, &mut a);
                cram_coloring_color(back, v, u, &mut b);
                assert_eq!(a, b);
            }
        }
        let mut c = 0;
        assert_eq!(cram_coloring_color(w, 0, 1, &mut c), CramStatus::InvalidArgument);
        cram_string_free(json);
        cram_coloring_free(back);
        cram_coloring_free(w);

        assert_eq!(cram_exists_good_coloring(7, m.as_ptr(), 3, 0, &mut exists, &mut w), CramStatus::Ok);
        assert!(!exists && w.is_null());
        assert_eq!(cram_exists_good_coloring(65, m.as_ptr(), 3, 0, &mut exists, &mut w), CramStatus::TooLarge);
    }
}

#[test]
fn exact_value_and_budget() {
    unsafe {
        let mut e = ptr::null_mut();
        cram_engine_new(&mut e);
        let (mut v, mut lo, mut hi) = (0u32, 0u32, 0u32);
        assert_eq!(cram_exact_value(e, [4u32, 4, 3].as_ptr(), 3, 0, &mut v, &mut lo, &mut hi), CramStatus::Ok);
        assert_eq!((v, lo, hi), (7, 7, 7));
        let s = cram_exact_value(e, [5u32, 5].as_ptr(), 2, 1, &mut v, &mut lo, &mut hi);
        assert_eq!(s, CramStatus::Undecided);
        assert_eq!(v, 0);
        assert!(lo <= 43);
        cram_engine_free(e);
    }
}

#[test]
fn builtin_witness() {
    unsafe {
        let id = CString::new("W1").unwrap();
        let mut c = ptr::null_mut();
        assert_eq!(cram_coloring_builtin(id.as_ptr(), &mut c), CramStatus::Ok);
        let mut alpha = [0usize; 3];
        cram_coloring_alpha(c, alpha.as_mut_ptr(), 3);
        assert_eq!(alpha, [4, 3, 2]);
        cram_coloring_free(c);
        assert!(CStr::from_ptr(cram_version()).to_str().unwrap().starts_with(env!("CARGO_PKG_VERSION")));
    }
}
