#![no_main]

use libfuzzer_sys::fuzz_target;
use sumset_core::expr::parse_expression;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(expr) = parse_expression(text) {
            let shown = expr.to_string();
            let again = parse_expression(&shown).expect("display output parses");
            assert_eq!(again.to_string(), shown);
        }
    }
});
