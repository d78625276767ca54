#![no_main]

use indepfam::format::{parse_assignment, print_assignment};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(s) = parse_assignment(data) else { return };
    assert_eq!(parse_assignment(&print_assignment(&s)).expect("printed assignment parses"), s);
});
