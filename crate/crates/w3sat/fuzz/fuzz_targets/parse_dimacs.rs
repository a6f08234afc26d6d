#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(parsed) = w3sat::io::parse_dimacs(text) {
        // Anything accepted must survive an exact round trip.
        let emitted = w3sat::io::emit_dimacs(&parsed.instance);
        let again = w3sat::io::parse_dimacs(&emitted).expect("emitted text must parse");
        assert_eq!(again.instance, parsed.instance);
    }
});
