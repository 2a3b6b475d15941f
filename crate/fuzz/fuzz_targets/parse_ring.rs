#![no_main]

use libfuzzer_sys::fuzz_target;
use ringwork::{FiniteRing, ValidateOptions};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // keep the cubic axiom scans cheap
    let opts = ValidateOptions { max_size: 64 };
    if let Ok(ring) = FiniteRing::from_json(text, &opts) {
        let again = FiniteRing::from_json(&ring.to_json(), &opts).expect("canonical form revalidates");
        assert!(again.same_tables(&ring));
    }
});
