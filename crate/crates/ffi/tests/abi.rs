use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use ewatts_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ewatts_last_error()).to_str().unwrap().to_string() }
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    ewatts_string_free(s);
    out
}

#[test]
fn line_bundle_cohomology() {
    unsafe {
        for (d, h0, h1) in [(3i64, 4usize, 0usize), (-1, 0, 0), (-4, 0, 3)] {
            let mut s = ptr::null_mut();
            assert_eq!(ewatts_sheaf_parse(0, c(&format!("O({d})")).as_ptr(), 0, &mut s), EwattsStatus::Ok);
            let (mut a, mut b) = (99, 99);
            assert_eq!(ewatts_sheaf_h0(s, &mut a), EwattsStatus::Ok);
            assert_eq!(ewatts_sheaf_h1(s, &mut b), EwattsStatus::Ok);
            assert_eq!((a, b), (h0, h1), "O({d})");
            ewatts_sheaf_free(s);
        }
    }
}

#[test]
fn classify_over_a_prime_field() {
    unsafe {
        let mut s = ptr::null_mut();
        let text = c("scramble(O(2) + O(-1) + sky(t - 3, 2))");
        assert_eq!(ewatts_sheaf_parse(7, text.as_ptr(), 11, &mut s), EwattsStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(ewatts_sheaf_classify(s, &mut out), EwattsStatus::Ok);
        assert_eq!(take(out), "splitting: (2, -1)\ntorsion: sky(t + 4, 2)\n");
        ewatts_sheaf_free(s);
    }
}

#[test]
fn job_matches_library_report() {
    let text = "field GF(5); cohomology O(2) + sky(inf, 3);";
    let spec = ewatts::cli::parse_job(text).unwrap();
    let expected = ewatts::cli::run_job(&spec, &Default::default()).unwrap();
    unsafe {
        let mut job = ptr::null_mut();
        assert_eq!(ewatts_job_parse(c(text).as_ptr(), &mut job), EwattsStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(ewatts_job_render(job, &mut out), EwattsStatus::Ok);
        assert_eq!(take(out), spec.render());
        assert_eq!(ewatts_job_run(job, 0, false, &mut out), EwattsStatus::Ok);
        assert_eq!(take(out), expected.render());
        assert_eq!(ewatts_job_run(job, 0, true, &mut out), EwattsStatus::Ok);
        assert_eq!(take(out), expected.to_json(&spec).to_string());
        ewatts_job_free(job);
    }
}

#[test]
fn failures_set_status_and_message() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ewatts_sheaf_parse(6, c("O(1)").as_ptr(), 0, &mut s), EwattsStatus::Domain);
        assert_eq!(last_error(), "not prime: 6");
        assert!(s.is_null());

        assert_eq!(ewatts_sheaf_parse(0, c("O(1) +").as_ptr(), 0, &mut s), EwattsStatus::Parse);
        assert!(last_error().starts_with("parse error at line 1"));

        assert_eq!(ewatts_sheaf_parse(0, ptr::null(), 0, &mut s), EwattsStatus::NullArgument);
        assert_eq!(ewatts_sheaf_h0(ptr::null(), ptr::null_mut()), EwattsStatus::NullArgument);

        let bad = [0x4fu8, 0xff, 0x00];
        assert_eq!(ewatts_sheaf_parse(0, bad.as_ptr().cast(), 0, &mut s), EwattsStatus::InvalidUtf8);

        let mut job = ptr::null_mut();
        assert_eq!(ewatts_job_parse(c("frobnicate O;").as_ptr(), &mut job), EwattsStatus::Parse);
        assert!(last_error().contains("unknown command 'frobnicate'"));

        assert_eq!(ewatts_job_parse(c("classify-tg tensor(O(1));").as_ptr(), &mut job), EwattsStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(ewatts_job_run(job, 0, false, &mut out), EwattsStatus::Domain);
        assert_eq!(last_error(), "not totally global");
        assert!(out.is_null());
        ewatts_job_free(job);

        ewatts_sheaf_free(ptr::null_mut());
        ewatts_job_free(ptr::null_mut());
        ewatts_string_free(ptr::null_mut());
    }
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = std::env::temp_dir().join(format!("ewatts-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("probe.c");
    std::fs::write(
        &src,
        "#include \"ewatts.h\"\nint main(void) {\n  EwattsSheaf *s = 0;\n  size_t h0 = 0;\n  \
         EwattsStatus st = ewatts_sheaf_parse(0, \"O(2)\", 0, &s);\n  \
         if (st == EWATTS_STATUS_OK) { ewatts_sheaf_h0(s, &h0); ewatts_sheaf_free(s); }\n  return (int)h0;\n}\n",
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&header)
        .arg(&src)
        .status();
    match status {
        Ok(st) => assert!(st.success(), "ewatts.h failed to compile"),
        Err(e) => eprintln!("skipping: no C compiler ({e})"),
    }
}
