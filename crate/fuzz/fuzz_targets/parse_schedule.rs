#![no_main]
use libfuzzer_sys::fuzz_target;
use valvechain::{parse_schedule, write_schedule};

// Accepted schedules must write back to text that parses to the same
// schedule and rewrites byte for byte.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(schedule) = parse_schedule(text) {
            let written = write_schedule(&schedule);
            let back = parse_schedule(&written).expect("written schedule must parse");
            assert_eq!(write_schedule(&back), written);
        }
    }
});
