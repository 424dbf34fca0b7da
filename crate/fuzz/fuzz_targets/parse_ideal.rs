//! Fuzzes the ideal parser: never panic, and every accepted ideal must equal
//! its render/reparse image (minimal generators are canonical).

#![no_main]

use std::sync::Arc;

use libfuzzer_sys::fuzz_target;
use vnum_core::{parse_ideal, Ring};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let ring = Arc::new(Ring::standard(&["X", "Y", "Z"]).unwrap());
    if let Ok(ideal) = parse_ideal(text, &ring) {
        let rendered = ideal.render();
        let back = parse_ideal(&rendered, &ring).expect("rendered ideal reparses");
        assert_eq!(ideal, back, "round trip changed {rendered}");
    }
});
