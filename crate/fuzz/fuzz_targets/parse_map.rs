#![no_main]

use libfuzzer_sys::fuzz_target;
use ringwork::constructors::dual;
use ringwork::{check_identity, IdentityKind, RingMap};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let ring = dual(2).unwrap();
    if let Ok(map) = RingMap::from_json(&ring, text) {
        assert_eq!(RingMap::from_json(&ring, &map.to_json()).unwrap(), map);
        let _ = check_identity(&ring, &map, IdentityKind::Additive).unwrap();
    }
});
