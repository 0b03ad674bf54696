#![no_main]

use coeffective::exterior::{format_form, parse_form};
use libfuzzer_sys::fuzz_target;

const NAMES: [&str; 6] = ["x1", "x2", "x3", "y1", "y2", "y3"];

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(form) = parse_form(text, &NAMES) {
        let printed = format_form(&form, &NAMES);
        let again = parse_form(&printed, &NAMES).expect("formatted forms parse");
        assert_eq!(again, form);
    }
});
