#![no_main]
use cubecolor::format::{coloring_json, parse_coloring};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(c) = parse_coloring(s) {
            let again = parse_coloring(&coloring_json(&c)).expect("written coloring parses");
            assert_eq!(again, c);
        }
    }
});
