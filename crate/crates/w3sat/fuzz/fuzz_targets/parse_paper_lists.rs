#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(parsed) = w3sat::io::parse_paper_lists(text, None) {
        let emitted = w3sat::io::emit_paper_lists(&parsed.instance);
        let again = w3sat::io::parse_paper_lists(&emitted, Some(parsed.instance.n_vars()))
            .expect("emitted text must parse");
        assert_eq!(again.instance, parsed.instance);
    }
});
