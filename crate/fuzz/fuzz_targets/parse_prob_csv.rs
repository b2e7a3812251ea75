#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(p) = tvbounds::parse_prob_csv(text) {
            assert!(!p.is_empty());
            // the exact distance must stay a probability for any accepted instance
            if p.len() <= 64 {
                let tv = tvbounds::exact_tv_poisson_approx(&p).unwrap();
                assert!((0.0..=1.0).contains(&tv));
            }
        }
    }
});
