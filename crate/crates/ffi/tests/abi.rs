use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use radon_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(radon_last_error()) }.to_string_lossy().into_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { radon_string_free(p) };
    s
}

#[test]
fn average_of_a_delta_along_the_parabola() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(radon_mapping_moment_curve(2, &mut p), RadonStatus::Ok);
        assert_eq!((radon_mapping_source_dim(p), radon_mapping_target_dim(p)), (1, 2));
        let mut f = ptr::null_mut();
        assert_eq!(radon_function_new(2, &mut f), RadonStatus::Ok);
        assert_eq!(radon_function_add(f, [0i64, 0].as_ptr(), 1.0, 0.0), RadonStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(radon_apply_average(f, p, 8, &mut out), RadonStatus::Ok);
        assert_eq!(radon_function_len(out), 8);
        for y in 1..=8i64 {
            let (mut re, mut im) = (0.0, 0.0);
            assert_eq!(radon_function_get(out, [y, y * y].as_ptr(), &mut re, &mut im), RadonStatus::Ok);
            assert_eq!((re, im), (0.125, 0.0));
        }
        let grid = [1u64, 2, 4, 8];
        let mut m = ptr::null_mut();
        assert_eq!(radon_maximal_average(f, p, grid.as_ptr(), grid.len(), &mut m), RadonStatus::Ok);
        let (mut re, mut im) = (0.0, 0.0);
        radon_function_get(m, [1i64, 1].as_ptr(), &mut re, &mut im);
        assert_eq!(re, 1.0);
        for h in [f, out, m] {
            radon_function_free(h);
        }
        radon_mapping_free(p);
    }
}

#[test]
fn hilbert_transform_along_the_identity_is_odd() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(radon_mapping_identity(1, &mut p), RadonStatus::Ok);
        let json = CString::new(r#"{"dim":1,"points":[[0]],"values":[[1.0,0.0]]}"#).unwrap();
        let mut f = ptr::null_mut();
        assert_eq!(radon_function_from_json(json.as_ptr(), &mut f), RadonStatus::Ok);
        let kernel = CString::new("hilbert").unwrap();
        let mut t = ptr::null_mut();
        assert_eq!(radon_apply_truncated(f, p, kernel.as_ptr(), 5, &mut t), RadonStatus::Ok);
        for x in 1..=5i64 {
            let (mut a, mut b, mut im) = (0.0, 0.0, 0.0);
            radon_function_get(t, [x].as_ptr(), &mut a, &mut im);
            radon_function_get(t, [-x].as_ptr(), &mut b, &mut im);
            assert!(a != 0.0 && (a + b).abs() < 1e-15, "x={x}: {a} {b}");
        }
        radon_function_free(t);
        radon_function_free(f);
        radon_mapping_free(p);
    }
}

#[test]
fn json_round_trip() {
    unsafe {
        let mut p = ptr::null_mut();
        let spec = CString::new(r#"{"k":2,"components":[[{"coeff":1,"exp":[1,0]}],[{"coeff":3,"exp":[1,2]}]]}"#).unwrap();
        assert_eq!(radon_mapping_from_json(spec.as_ptr(), &mut p), RadonStatus::Ok);
        assert_eq!((radon_mapping_source_dim(p), radon_mapping_target_dim(p)), (2, 2));
        let mut f = ptr::null_mut();
        radon_function_new(2, &mut f);
        radon_function_add(f, [3i64, -1].as_ptr(), 0.5, -2.0);
        let mut s = ptr::null_mut();
        assert_eq!(radon_function_to_json(f, &mut s), RadonStatus::Ok);
        let text = CString::new(take_string(s)).unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(radon_function_from_json(text.as_ptr(), &mut g), RadonStatus::Ok);
        let (mut re, mut im) = (0.0, 0.0);
        radon_function_get(g, [3i64, -1].as_ptr(), &mut re, &mut im);
        assert_eq!((re, im), (0.5, -2.0));
        radon_function_free(f);
        radon_function_free(g);
        radon_mapping_free(p);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(radon_function_new(0, &mut f), RadonStatus::InvalidParameter);
        assert!(f.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(radon_function_new(1, ptr::null_mut()), RadonStatus::NullPointer);
        let mut out = ptr::null_mut();
        assert_eq!(radon_apply_average(ptr::null(), ptr::null(), 1, &mut out), RadonStatus::NullPointer);

        let garbage = CString::new("{not json").unwrap();
        assert_eq!(radon_function_from_json(garbage.as_ptr(), &mut f), RadonStatus::Parse);
        assert_eq!(radon_mapping_from_json(garbage.as_ptr(), &mut ptr::null_mut()), RadonStatus::Parse);

        let bad_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(radon_function_from_json(bad_utf8.as_ptr().cast(), &mut f), RadonStatus::Utf8);

        let mut p = ptr::null_mut();
        radon_mapping_moment_curve(2, &mut p);
        radon_function_new(3, &mut f);
        assert_eq!(radon_apply_average(f, p, 2, &mut out), RadonStatus::DimensionMismatch);
        assert!(out.is_null());
        let kernel = CString::new("riesz-0").unwrap();
        assert_eq!(radon_apply_truncated(f, p, kernel.as_ptr(), 2, &mut out), RadonStatus::InvalidParameter);

        let mut g = 0.0;
        assert_eq!(radon_gauss_max_moment_curve(0, 2, &mut g), RadonStatus::InvalidParameter);
        assert_eq!(radon_gauss_max_moment_curve(7, 2, &mut g), RadonStatus::Ok);
        assert!(last_error().is_empty());
        assert!((g - 7f64.powf(-0.5)).abs() < 1e-12);

        radon_function_free(f);
        radon_mapping_free(p);
        radon_function_free(ptr::null_mut());
        radon_mapping_free(ptr::null_mut());
        radon_string_free(ptr::null_mut());
    }
}

#[test]
fn rm_check_and_criteria() {
    unsafe {
        let re = [0.0, 1.0, -1.0, 0.5, 2.0];
        let im = [0.0; 5];
        let mut holds = -1;
        assert_eq!(radon_rm_check(re.as_ptr(), im.as_ptr(), 5, 0, &mut holds), RadonStatus::Ok);
        assert_eq!(holds, 1);
        assert_eq!(radon_rm_check(re.as_ptr(), im.as_ptr(), 4, 0, &mut holds), RadonStatus::InvalidParameter);

        let id = CString::new("5").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(radon_run_criterion(id.as_ptr(), 7, &mut s), RadonStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert_eq!(v["id"], "5");
        assert_eq!(v["passed"], true);

        let id = CString::new("99").unwrap();
        assert_ne!(radon_run_criterion(id.as_ptr(), 7, &mut s), RadonStatus::Ok);
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(radon_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_current_and_complete() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/radon.h")).unwrap();
    let src = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    for line in src.lines() {
        if let Some(rest) = line.strip_prefix("pub unsafe extern \"C\" fn ").or(line.strip_prefix("pub extern \"C\" fn ")) {
            let name = &rest[..rest.find('(').unwrap()];
            assert!(header.contains(&format!("{name}(")), "{name} missing from the header");
        }
    }
    assert!(header.contains("typedef struct RadonFunction RadonFunction;"));
    assert!(header.contains("RADON_STATUS_PANIC = 13"));
}

#[test]
fn c_program_links_against_the_static_library() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = deps.join("libradon_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("radon_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler named cc");
    assert!(status.success(), "compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dim"], 2);
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
}
