#![no_main]

use indepfam::format::{parse_cell, print_cell};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(cell) = parse_cell(data) else { return };
    assert_eq!(parse_cell(&print_cell(&cell)).expect("printed cell parses"), cell);
});
