#![no_main]

use libfuzzer_sys::fuzz_target;
use ringwork::constructors::{dual, m2};
use ringwork::AntiAutomorphism;

fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let ring = if pick % 2 == 0 { m2(2) } else { dual(6) }.unwrap();
    if let Ok(inv) = AntiAutomorphism::from_json(&ring, text) {
        let again = AntiAutomorphism::from_json(&ring, &inv.to_json()).expect("round trip");
        assert_eq!(again, inv);
    }
});
