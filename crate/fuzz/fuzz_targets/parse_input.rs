#![no_main]

use emcert::certify::certify;
use emcert::io::{parse_input, GridSpec};
use emcert::witness::verify_certificate;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = parse_input(text) else { return };

    // keep certification cheap: small lattices and point lists only
    let size = match &doc.grid {
        Some(GridSpec::Levels(l)) => (l.len() as f64).powi(doc.dim() as i32),
        Some(GridSpec::Points(p)) => p.len() as f64,
        None => 0.0,
    };
    if size > 64.0 || doc.dim() > 4 {
        return;
    }
    let Ok(g) = doc.grid_function() else { return };
    if g.len() > 64 {
        return;
    }
    if let Ok(v) = certify(&g) {
        if let Some(c) = v.certificate() {
            assert!(verify_certificate(c, None).passed(), "certify produced an unverifiable certificate");
        }
    }
});
