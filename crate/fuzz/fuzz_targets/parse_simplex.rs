#![no_main]
use cubecolor::format::parse_simplex;
use cubecolor::Cell;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(simplex) = parse_simplex(s) {
            let _ = simplex.boundary();
        }
    }
});
