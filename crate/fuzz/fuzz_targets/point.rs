#![no_main]

use indepfam::format::parse_point;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(p) = parse_point(data) else { return };
    assert_eq!(parse_point(&p.to_string()).expect("printed point parses"), p);
});
