#![no_main]
use cubecolor::format::{parse_certificate, CertificateRepr};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(cert) = parse_certificate(s) {
            let text = serde_json::to_string(&CertificateRepr::new(&cert, true)).unwrap();
            assert_eq!(parse_certificate(&text).unwrap(), cert);
        }
    }
});
