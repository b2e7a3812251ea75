#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(p) = tvbounds::parse_prob_list(text) {
            assert!(p.probs().iter().all(|x| (0.0..=1.0).contains(x)));
            assert!(p.sum_p2() <= p.lambda() + 1e-9);
        }
    }
});
