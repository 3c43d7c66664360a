#![no_main]
use cubecolor::format::parse_face;
use cubecolor::Cell;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(f) = parse_face(s) {
            assert_eq!(f.boundary().len(), 2 * f.dim());
        }
    }
});
