#![no_main]

use libfuzzer_sys::fuzz_target;
use tvbounds::Settings;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(s) = tvbounds::parse_config(text, Settings::default()) {
            assert!(s.optimizer.theta_min > 0.0);
        }
    }
});
