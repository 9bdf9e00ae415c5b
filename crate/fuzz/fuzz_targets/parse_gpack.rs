#![no_main]

use grasspack::gpack::{parse_gpack, write_gpack};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(parsed) = parse_gpack(text) else { return };
    let Ok(packing) = parsed.clone().into_packing() else { return };
    // valid packings survive a write/parse round trip unchanged
    let again = parse_gpack(&write_gpack(&packing, &[])).expect("written file parses");
    assert_eq!(again.generators, parsed.generators);
});
