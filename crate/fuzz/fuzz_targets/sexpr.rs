#![no_main]

use indepfam::sexpr::parse_all;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(forms) = parse_all(data) else { return };
    let printed: Vec<String> = forms.iter().map(|s| s.to_string()).collect();
    let again = parse_all(&printed.join("\n")).expect("printed s-expressions parse");
    let reprinted: Vec<String> = again.iter().map(|s| s.to_string()).collect();
    assert_eq!(printed, reprinted);
});
