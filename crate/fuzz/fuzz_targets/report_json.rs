#![no_main]

use libfuzzer_sys::fuzz_target;
use tvbounds::BoundReport;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(report) = BoundReport::from_json(text) {
            // accepted reports survive a render/parse cycle
            let again = BoundReport::from_json(&report.to_json()).unwrap();
            assert_eq!(again.to_json(), report.to_json());
        }
    }
});
