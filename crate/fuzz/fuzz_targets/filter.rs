#![no_main]

use indepfam::filters::FilterPresentation;
use indepfam::format::{parse_filter, print_filter};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(FilterPresentation::Finite(f)) = parse_filter(data, 4, 64) else { return };
    match parse_filter(&print_filter(&f), 4, 64).expect("printed filter parses") {
        FilterPresentation::Finite(again) => assert_eq!(again, f),
        FilterPresentation::Symbolic(_) => panic!("finite filter reparsed as symbolic"),
    }
});
