#![no_main]

use indepfam::format::{parse_fo_theory, print_fo_theory};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(theory) = parse_fo_theory(data) else { return };
    assert_eq!(parse_fo_theory(&print_fo_theory(&theory)).expect("printed theory parses"), theory);
});
