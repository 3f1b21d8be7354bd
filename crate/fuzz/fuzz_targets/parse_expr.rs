//! Grammar fuzz: parsing must never panic, and anything that parses must
//! survive a print/parse round trip unchanged.

#![no_main]

use fsx_core::expr::{parse_expr, print_expr};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(expr) = parse_expr(src) else { return };
    let printed = print_expr(&expr);
    let again = parse_expr(&printed)
        .unwrap_or_else(|e| panic!("printed form `{printed}` failed to parse: {e}"));
    assert_eq!(again, expr, "round trip changed `{printed}`");
});
