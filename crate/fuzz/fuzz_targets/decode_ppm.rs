#![no_main]

use biqpca::dataset::{decode_ppm, encode_ppm, image_to_qmatrix, qmatrix_to_rgb8};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(img) = decode_ppm(data) {
        assert_eq!(img.data.len(), img.width * img.height * 3);
        // every decoded raster survives the quaternion round trip
        let back = qmatrix_to_rgb8(&image_to_qmatrix(&img));
        assert_eq!(back, img);
        assert_eq!(decode_ppm(&encode_ppm(&img)).unwrap(), img);
    }
});
