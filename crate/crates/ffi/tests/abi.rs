use std::ffi::{c_char, CStr, CString};
use std::ptr;

use accretion_lab_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    al_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = al_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_string()
}

#[test]
fn set_handles() {
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(al_set_parse(c("(0,3140) U {3150}").as_ptr(), &mut a), AlStatus::Ok);
        let mut bd = ptr::null_mut();
        assert_eq!(al_set_unary(a, AlSetUnary::Boundary, &mut bd), AlStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(al_set_to_string(bd, &mut s), AlStatus::Ok);
        assert_eq!(take(s), "{0,3140,3150}");

        let mut j = ptr::null_mut();
        assert_eq!(al_set_topology_json(a, &mut j), AlStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(j)).unwrap();
        assert_eq!(v["is_open"], false);
        assert_eq!(v["sup"], "3150");

        let mut inside = false;
        assert_eq!(al_set_contains(a, c("3140").as_ptr(), &mut inside), AlStatus::Ok);
        assert!(!inside);

        let mut b = ptr::null_mut();
        assert_eq!(al_set_parse(c("[1,2]").as_ptr(), &mut b), AlStatus::Ok);
        let mut i = ptr::null_mut();
        assert_eq!(al_set_binary(a, b, AlSetOp::Difference, &mut i), AlStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(al_set_to_string(i, &mut s), AlStatus::Ok);
        assert_eq!(take(s), "(0,1) U (2,3140) U {3150}");
        for h in [a, b, bd, i] {
            al_set_free(h);
        }
        al_set_free(ptr::null_mut());
    }
}

#[test]
fn errors() {
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(al_set_parse(c("[0,").as_ptr(), &mut a), AlStatus::ParseError);
        assert!(a.is_null());
        assert!(last_error().contains("parse error"));
        assert_eq!(al_set_parse(ptr::null(), &mut a), AlStatus::NullArgument);
        assert_eq!(al_set_parse(c("[0,1]").as_ptr(), ptr::null_mut()), AlStatus::NullArgument);
        let bad = [0xffu8, 0];
        assert_eq!(al_set_parse(bad.as_ptr() as *const c_char, &mut a), AlStatus::InvalidUtf8);

        let mut f = ptr::null_mut();
        assert_eq!(al_function_parse(c("1/x").as_ptr(), c("[-1,1]").as_ptr(), &mut f), AlStatus::Ok);
        let mut out = ptr::null_mut();
        let st = al_integrate_json(f, c("-1").as_ptr(), c("1").as_ptr(), c("1/100").as_ptr(), 20, &mut out);
        assert_eq!(st, AlStatus::EvaluationFailed);
        assert!(out.is_null());
        assert!(last_error().contains("not bounded"));
        al_function_free(f);
        assert_eq!(al_set_parse(c("[0,1]").as_ptr(), &mut a), AlStatus::Ok);
        assert!(al_last_error().is_null());
        al_set_free(a);
    }
}

#[test]
fn integrals_and_accretion() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(al_function_parse(c("indicatorQ(x)").as_ptr(), ptr::null(), &mut f), AlStatus::Ok);
        let mut out = ptr::null_mut();
        let st = al_integrate_json(f, c("0").as_ptr(), c("1").as_ptr(), c("1/1000").as_ptr(), 40, &mut out);
        assert_eq!(st, AlStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["status"], "not-integrable");
        assert_eq!(v["gap"], "1");
        al_function_free(f);

        let mut out = ptr::null_mut();
        let q = c(r#"{"f":"thomae(x)","c":"1/2"}"#);
        assert_eq!(al_fnacc_json(q.as_ptr(), 0, &mut out), AlStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        let reps: Vec<&str> = v["clusters"].as_array().unwrap().iter().map(|c| c["representative"][0].as_str().unwrap()).collect();
        assert_eq!(reps, ["0", "1/2"]);

        let mut out = ptr::null_mut();
        let spec = c(r#"{"kind":"formula","expr":"1/n + 3140 + (-1)^n"}"#);
        assert_eq!(al_sequence_analyze_json(spec.as_ptr(), ptr::null(), &mut out), AlStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["limsup"], "3141");
        assert_eq!(v["liminf"], "3139");
        assert_eq!(v["convergence"]["converges"], "no");

        let mut out = ptr::null_mut();
        let sched = c(r#"{"horizon":"ten"}"#);
        assert_eq!(al_sequence_analyze_json(spec.as_ptr(), sched.as_ptr(), &mut out), AlStatus::InvalidInput);
    }
}

#[test]
fn cli_passthrough() {
    unsafe {
        let args = [c("setop"), c("--expr"), c("closure((0,1))")];
        let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
        let (mut out, mut code) = (ptr::null_mut(), -1);
        assert_eq!(al_cli_run(argv.len() as i32, argv.as_ptr(), &mut out, &mut code), AlStatus::Ok);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["command"], "setop");

        let args = [c("corpus"), c("--name"), c("nope")];
        let argv: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
        assert_eq!(al_cli_run(argv.len() as i32, argv.as_ptr(), &mut out, &mut code), AlStatus::Ok);
        assert_eq!(code, 1);
        al_string_free(out);
        assert!(last_error().contains("unknown preset"));
    }
}
