#![no_main]

// Differential target: parse untrusted text, and when it yields a small
// instance, cross-check the saturation engine against exhaustive
// enumeration. A refutation of a satisfiable instance, or a trace that
// fails replay, aborts.

use libfuzzer_sys::fuzz_target;

use w3sat::engine::{saturate, EngineOptions};
use w3sat::oracle::solve_enumerate;
use w3sat::trace::check_trace;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(parsed) = w3sat::io::parse_paper_lists(text, None) else {
        return;
    };
    let inst = parsed.instance;
    if inst.n_vars() > 10 || inst.len() > 48 {
        return;
    }
    let Ok(verdict) = saturate(&inst, &EngineOptions::default()) else {
        return;
    };
    if verdict.is_refuted() {
        let oracle = solve_enumerate(&inst).expect("within the enumeration guard");
        assert!(!oracle.status.is_sat(), "refuted a satisfiable instance");
        assert!(
            check_trace(&inst, &verdict).unwrap().is_pass(),
            "trace failed replay"
        );
    }
});
