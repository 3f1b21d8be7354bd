//! End-to-end run of the built-in scenario registry: every entry must
//! execute and certify PASS, and its report must serialize with the fields
//! downstream tooling relies on.

use fsx_core::verify::{registry, run_scenario, Status};

#[test]
fn every_registered_scenario_certifies_pass() {
    let reg = registry();
    assert_eq!(reg.len(), 11);
    let mut failures = Vec::new();
    for spec in &reg {
        let report = run_scenario(spec).unwrap_or_else(|e| {
            panic!("scenario `{}` errored instead of reporting: {e}", spec.id)
        });
        println!("{}", report.summary_line());
        let v = report.to_json();
        assert_eq!(v["id"].as_str(), Some(spec.id.as_str()));
        assert!(v["status"].is_string());
        assert!(v["constants"].is_array());
        if report.status != Status::Pass {
            failures.push(format!("{}: {:?}", spec.id, report.notes));
        }
    }
    assert!(failures.is_empty(), "scenarios not certified:\n{}", failures.join("\n"));
}
