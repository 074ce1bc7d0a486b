#![no_main]

use emcert::io::{certificate_to_json, parse_certificate};
use emcert::witness::verify_certificate;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cert) = parse_certificate(text) else { return };
    // verification reports, it never panics
    let _ = verify_certificate(&cert, None);
    let again = parse_certificate(&certificate_to_json(&cert)).expect("reparse of serialized certificate");
    assert_eq!(again, cert);
});
