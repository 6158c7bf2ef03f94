#![no_main]

use libfuzzer_sys::fuzz_target;
use poincare::geometry::{compact_to_json, parse_compact};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(k) = parse_compact(text) else { return };
    let again = parse_compact(&compact_to_json(&k).to_string()).expect("serialized compact set parses");
    assert_eq!(again, k);
    if k.validate().is_ok() {
        let _ = k.point_count();
    }
});
