//! Fuzzes the whole input-document parser: never panic, and the rendered
//! echo of every accepted document must be a parse/render fixed point.

#![no_main]

use libfuzzer_sys::fuzz_target;
use vnum_core::{parse_input, render_input};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = parse_input(text) {
        let echo = render_input(&spec);
        let back = parse_input(&echo).expect("rendered document reparses");
        assert_eq!(echo, render_input(&back), "echo is not a fixed point");
    }
});
