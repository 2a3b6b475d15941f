#![no_main]

use libfuzzer_sys::fuzz_target;
use ringwork::constructors::{dual, m2};

fuzz_target!(|data: &[u8]| {
    let Ok(name) = std::str::from_utf8(data) else { return };
    for ring in [m2(2).unwrap(), dual(6).unwrap()] {
        if let Ok(x) = ring.resolve(name) {
            assert!(x.index() < ring.size());
            assert_eq!(ring.resolve(&ring.label(x)), Ok(x));
        }
    }
});
