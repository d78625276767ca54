#![no_main]

use indepfam::format::{parse_theory, print_theory};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(theory) = parse_theory(data) else { return };
    assert_eq!(parse_theory(&print_theory(&theory, None)).expect("printed theory parses"), theory);
});
