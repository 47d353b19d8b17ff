//! Anything the parser accepts must re-emit to text that parses back to the
//! same instance, and emitting twice must be stable.

#![no_main]

use dhl_core::instance::{emit_instance, parse_instance};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(inst) = parse_instance(text) else {
        return;
    };
    let emitted = emit_instance(&inst);
    let back = parse_instance(&emitted).expect("emitted instance parses");
    assert_eq!(back, inst);
    assert_eq!(emit_instance(&back), emitted);
});
