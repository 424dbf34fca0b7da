//! Fuzzes the monomial parser against a fixed ring: never panic, and every
//! accepted monomial must survive a render/reparse round trip.

#![no_main]

use std::sync::Arc;

use libfuzzer_sys::fuzz_target;
use vnum_core::{parse_monomial, Ring};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let ring = Arc::new(Ring::standard(&["X", "Y", "Z"]).unwrap());
    if let Ok(m) = parse_monomial(text, &ring) {
        let rendered = m.render(&ring);
        let back = parse_monomial(&rendered, &ring).expect("rendered monomial reparses");
        assert_eq!(m, back, "round trip changed {rendered}");
    }
});
