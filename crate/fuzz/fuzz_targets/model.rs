#![no_main]

use indepfam::format::parse_model;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(m) = parse_model(data) else { return };
    assert_eq!(parse_model(&m.to_string()).expect("printed model parses"), m);
});
