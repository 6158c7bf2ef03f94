#![no_main]

use libfuzzer_sys::fuzz_target;
use poincare::geometry::{parse_region, region_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(region) = parse_region(text) else { return };
    // Anything accepted must survive a write/read cycle unchanged.
    let out = region_to_json(&region).to_string();
    let again = parse_region(&out).expect("serialized region parses");
    assert_eq!(region_to_json(&again).to_string(), out);
    let _ = region.validate();
});
