#![no_main]

use grasspack::binocular::{parse_pairs, write_pairs};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(pairs) = parse_pairs(text) else { return };
    let again = parse_pairs(&write_pairs(&pairs)).expect("written pairs parse");
    assert_eq!(again.len(), pairs.len());
});
