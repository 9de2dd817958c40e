#![no_main]

use biqpca_cli::parse_config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = parse_config(text) {
            assert!(cfg.params.violations().is_empty());
            assert!(cfg.repeats >= 1);
        }
    }
});
