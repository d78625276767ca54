#![no_main]

use indepfam_cli::commands::parse_field;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(field) = parse_field(data) else { return };
    let printed: Vec<String> = field.iter().map(|x| x.to_string()).collect();
    assert_eq!(parse_field(&printed.join(" ")).expect("printed field parses"), field);
});
