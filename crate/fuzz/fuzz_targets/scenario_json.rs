//! Scenario-registry decoder fuzz: arbitrary JSON must either be rejected
//! with an error or produce specs that satisfy the documented invariants.

#![no_main]

use fsx_core::verify::parse_scenarios;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(specs) = parse_scenarios(src) else { return };
    let mut seen = std::collections::BTreeSet::new();
    for s in &specs {
        assert!(!s.id.is_empty() && s.id.len() <= 128);
        assert!(s.id.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-'));
        assert!(seen.insert(s.id.clone()), "duplicate id survived validation");
        assert!(s.bank_size <= 10_000);
        for (key, value) in &s.thresholds {
            assert!(!key.is_empty());
            assert!(value.is_finite());
        }
    }
});
