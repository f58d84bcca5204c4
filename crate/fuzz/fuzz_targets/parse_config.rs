#![no_main]

use libfuzzer_sys::fuzz_target;
use sumset_core::suite::SuiteConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = SuiteConfig::from_json(text) {
            let _ = cfg.validate();
            let _ = cfg.selected_checks();
        }
    }
});
