#![no_main]

use biqpca::dataset::{decode_basis, encode_basis};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(basis) = decode_basis(data) {
        // accepted inputs are canonical
        assert_eq!(encode_basis(&basis), data);
    }
});
