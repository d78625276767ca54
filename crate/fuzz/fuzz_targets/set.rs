#![no_main]

use indepfam::format::parse_set;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(set) = parse_set(data) else { return };
    let printed = set.to_string();
    let again = parse_set(&printed).expect("printed set parses");
    assert_eq!(printed, again.to_string());
    for x in 0..16 {
        assert_eq!(set.contains(x), again.contains(x));
    }
});
