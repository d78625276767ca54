#![no_main]

use indepfam::format::{parse_family, print_family};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(file) = parse_family(data, 4, 64) else { return };
    let printed = print_family(&file);
    let again = parse_family(&printed, 4, 64).expect("printed family parses");
    assert_eq!(print_family(&again), printed);
});
