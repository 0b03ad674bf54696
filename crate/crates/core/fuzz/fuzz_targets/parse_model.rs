#![no_main]

use coeffective::model::{format_model, parse_model};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(model) = parse_model(text) {
        let again = parse_model(&format_model(&model)).expect("formatted models parse");
        assert_eq!(again, model);
        // building is bounded by the generator cap
        let _ = model.build(false, 8);
    }
});
