//! Runs every acceptance criterion and prints one line per criterion.
//!
//! Lines go straight to stdout, so they appear even when output is captured.

use std::io::Write;

use handlebody_core::selftest::{run_all_with, DEFAULT_SEED};

fn line(s: String) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{s}").unwrap();
    out.flush().unwrap();
}

#[test]
fn acceptance_criteria() {
    let reports = run_all_with(DEFAULT_SEED, |r| line(r.to_string()));
    assert_eq!(reports.len(), 10);
    let failed: Vec<u32> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    line(format!("{} of {} criteria passed", reports.len() - failed.len(), reports.len()));
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn seed_does_not_change_outcome() {
    for seed in [1, 2, 3] {
        let r = handlebody_core::selftest::twist_well_defined(seed, 50);
        assert!(r.passed, "{r}");
    }
}
