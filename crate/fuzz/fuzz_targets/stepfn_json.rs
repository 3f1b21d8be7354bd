//! Step-function decoder fuzz: malformed JSON must error cleanly, and every
//! accepted function must be canonical and round-trip bit-exactly.

#![no_main]

use fsx_core::stepfn::StepFunction;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(f) = StepFunction::from_json(src) else { return };
    // canonical shape: strictly increasing breaks, no trailing zero piece
    let mut prev = 0.0;
    for p in f.pieces() {
        assert!(p.end > prev && p.end.is_finite());
        assert!(p.mag.is_finite());
        prev = p.end;
    }
    let back = StepFunction::from_json(&f.to_json()).expect("canonical form reparses");
    assert_eq!(back, f);
    // cheap kernel smoke on the accepted value
    let _ = f.rearrange().integral_abs();
});
