use mgk_core::suites::{run_suite, suite_names, CheckStatus, SuiteOptions};
use std::time::Instant;

#[test]
fn every_suite_passes() {
    let opts = SuiteOptions::default();
    for name in suite_names() {
        let started = Instant::now();
        let records = run_suite(name, &opts).unwrap();
        assert!(!records.is_empty(), "{name} ran no checks");
        for r in &records {
            println!(
                "{:<45} {:?} {:.2?} {}",
                r.name,
                r.status,
                started.elapsed(),
                r.witness
            );
            assert_eq!(
                r.status,
                CheckStatus::Pass,
                "{} failed: {}",
                r.name,
                r.witness
            );
        }
    }
}
