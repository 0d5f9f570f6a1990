#![no_main]
use libfuzzer_sys::fuzz_target;
use valvechain::parse_config;

// Anything that parses must survive a trip through its canonical form.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = parse_config(text) {
            let canonical = cfg.canonical();
            let again = parse_config(&canonical).expect("canonical config must parse");
            assert_eq!(again.canonical(), canonical);
        }
    }
});
