use std::fs;
use std::path::{Path, PathBuf};

use super::{Sample, SampleSet};
use crate::error::{Error, Result};
use crate::quaternion::{QMatrix, Quaternion};

/// 8-bit interleaved RGB raster, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        let needed = width
            .checked_mul(height)
            .and_then(|p| p.checked_mul(3))
            .ok_or_else(|| Error::Format(format!("image size {width}x{height} overflows")))?;
        if data.len() != needed {
            return Err(Error::Format(format!(
                "{width}x{height} RGB image needs {needed} bytes, got {}",
                data.len()
            )));
        }
        Ok(RgbImage { width, height, data })
    }
}

/// Decodes a binary (P6) PPM with maxval up to 255. Bytes after the raster are ignored.
pub fn decode_ppm(bytes: &[u8]) -> Result<RgbImage> {
    let mut pos = 0usize;
    if bytes.len() < 2 || &bytes[..2] != b"P6" {
        return Err(Error::Format("missing P6 magic".into()));
    }
    pos += 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        *field = next_header_number(bytes, &mut pos)?;
    }
    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(Error::Format(format!("empty PPM raster {width}x{height}")));
    }
    if maxval == 0 || maxval > 255 {
        return Err(Error::Format(format!(
            "PPM maxval {maxval} unsupported; need 1..=255"
        )));
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::Format("PPM header not terminated by whitespace".into())),
    }
    let needed = width
        .checked_mul(height)
        .and_then(|p| p.checked_mul(3))
        .ok_or_else(|| Error::Format(format!("PPM size {width}x{height} overflows")))?;
    let raster = bytes
        .get(pos..)
        .and_then(|r| r.get(..needed))
        .ok_or_else(|| Error::Format(format!("PPM raster truncated; need {needed} bytes")))?;
    let data = if maxval == 255 {
        raster.to_vec()
    } else {
        raster
            .iter()
            .map(|&v| {
                if v as usize > maxval {
                    Err(Error::Format(format!("PPM sample {v} exceeds maxval {maxval}")))
                } else {
                    Ok(((v as f64) * 255.0 / maxval as f64).round() as u8)
                }
            })
            .collect::<Result<Vec<u8>>>()?
    };
    RgbImage::new(width, height, data)
}

fn next_header_number(bytes: &[u8], pos: &mut usize) -> Result<usize> {
    loop {
        match bytes.get(*pos) {
            Some(b'#') => {
                while let Some(&b) = bytes.get(*pos) {
                    *pos += 1;
                    if b == b'\n' || b == b'\r' {
                        break;
                    }
                }
            }
            Some(b) if b.is_ascii_whitespace() => *pos += 1,
            Some(_) => break,
            None => return Err(Error::Format("PPM header truncated".into())),
        }
    }
    let start = *pos;
    while matches!(bytes.get(*pos), Some(b) if b.is_ascii_digit()) {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Format("expected a number in PPM header".into()));
    }
    std::str::from_utf8(&bytes[start..*pos])
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(|| Error::Format("PPM header number out of range".into()))
}

/// Canonical P6 encoding: `P6\n<w> <h>\n255\n` followed by the raster.
pub fn encode_ppm(img: &RgbImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.data);
    out
}

/// Each pixel becomes `r/255 i + g/255 j + b/255 k`; rows are image rows.
pub fn image_to_qmatrix(img: &RgbImage) -> QMatrix {
    QMatrix::from_fn(img.height, img.width, |i, j| {
        let o = 3 * (i * img.width + j);
        Quaternion::pure(
            img.data[o] as f64 / 255.0,
            img.data[o + 1] as f64 / 255.0,
            img.data[o + 2] as f64 / 255.0,
        )
    })
}

/// Inverse of [`image_to_qmatrix`]; the i, j, k parts are clipped to `[0, 1]`
/// and rounded onto the 8-bit grid. The real part is dropped.
pub fn qmatrix_to_rgb8(f: &QMatrix) -> RgbImage {
    let (m, n) = f.shape();
    let mut data = Vec::with_capacity(3 * m * n);
    for i in 0..m {
        for j in 0..n {
            let q = f.get(i, j);
            for c in [q.w1, q.w2, q.w3] {
                let c = if c.is_nan() { 0.0 } else { c.clamp(0.0, 1.0) };
                data.push((c * 255.0).round() as u8);
            }
        }
    }
    RgbImage {
        width: n,
        height: m,
        data,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Png,
    Ppm,
}

fn format_of(path: &Path) -> Option<Format> {
    let ext = path.extension()?.to_str()?.to_ascii_lowercase();
    match ext.as_str() {
        "png" => Some(Format::Png),
        "ppm" | "pnm" => Some(Format::Ppm),
        _ => None,
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Reads one PNG or binary PPM file as an RGB raster.
pub fn load_image(path: &Path) -> Result<RgbImage> {
    let format = format_of(path)
        .ok_or_else(|| Error::Format(format!("{}: unsupported image extension", path.display())))?;
    let bytes = fs::read(path).map_err(io_err(path))?;
    let with_path = |e: Error| match e {
        Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
        other => other,
    };
    match format {
        Format::Ppm => decode_ppm(&bytes).map_err(with_path),
        Format::Png => {
            let img = image::load_from_memory_with_format(&bytes, image::ImageFormat::Png)
                .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?
                .to_rgb8();
            let (w, h) = img.dimensions();
            RgbImage::new(w as usize, h as usize, img.into_raw())
        }
    }
}

/// Writes a quaternion image in the format implied by the path's extension.
pub fn export_image(path: &Path, f: &QMatrix) -> Result<()> {
    let img = qmatrix_to_rgb8(f);
    let format = format_of(path)
        .ok_or_else(|| Error::Format(format!("{}: unsupported image extension", path.display())))?;
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(io_err(dir))?;
        }
    }
    match format {
        Format::Ppm => fs::write(path, encode_ppm(&img)).map_err(io_err(path)),
        Format::Png => image::save_buffer(
            path,
            &img.data,
            img.width as u32,
            img.height as u32,
            image::ExtendedColorType::Rgb8,
        )
        .map_err(|e| Error::Format(format!("{}: {e}", path.display()))),
    }
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut entries = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .map(|e| e.map(|e| e.path()).map_err(io_err(dir)))
        .collect::<Result<Vec<_>>>()?;
    entries.retain(|p| {
        p.file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| !n.starts_with('.'))
    });
    entries.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(entries)
}

/// Loads `root/<label>/<image>` into an uncentered sample set.
///
/// Class directories and files are visited in byte-wise name order, so sample
/// order is the sorted `(label, filename)` order. Files with extensions other
/// than `.png`, `.ppm` and `.pnm` are skipped.
pub fn load_dataset(root: &Path) -> Result<SampleSet> {
    let mut samples = Vec::new();
    for class_dir in sorted_entries(root)? {
        if !class_dir.is_dir() {
            continue;
        }
        let label = class_dir
            .file_name()
            .and_then(|n| n.to_str())
            .ok_or_else(|| {
                Error::InvalidDataset(format!("{}: class name is not UTF-8", class_dir.display()))
            })?
            .to_string();
        for file in sorted_entries(&class_dir)? {
            if !file.is_file() || format_of(&file).is_none() {
                continue;
            }
            let img = load_image(&file)?;
            samples.push(Sample {
                label: label.clone(),
                image: image_to_qmatrix(&img),
                source: Some(file),
            });
        }
    }
    if samples.is_empty() {
        return Err(Error::InvalidDataset(format!(
            "{}: no images found in class subdirectories",
            root.display()
        )));
    }
    SampleSet::new(samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ppm(w: usize, h: usize, data: &[u8]) -> Vec<u8> {
        encode_ppm(&RgbImage::new(w, h, data.to_vec()).unwrap())
    }

    #[test]
    fn channel_mapping() {
        let red = decode_ppm(&ppm(1, 1, &[255, 0, 0])).unwrap();
        assert_eq!(image_to_qmatrix(&red).get(0, 0), Quaternion::I);
        let black = decode_ppm(&ppm(1, 1, &[0, 0, 0])).unwrap();
        assert_eq!(image_to_qmatrix(&black).get(0, 0), Quaternion::ZERO);
    }

    #[test]
    fn header_with_comments_and_low_maxval() {
        let bytes = b"P6 # comment\n2 1\n# another\n15\n\x0f\x00\x05\x00\x0f\x0f";
        let img = decode_ppm(bytes).unwrap();
        assert_eq!((img.width, img.height), (2, 1));
        assert_eq!(img.data, vec![255, 0, 85, 0, 255, 255]);
    }

    #[test]
    fn malformed_ppm_is_a_format_error() {
        for bad in [
            &b""[..],
            b"P5\n1 1\n255\n\0",
            b"P6\n1 1\n255\n\0\0",
            b"P6\n0 1\n255\n",
            b"P6\n1 1\n256\n\0\0\0\0\0\0",
            b"P6\n1 1\n255",
            b"P6\n99999999999999999999999 1\n255\n",
            b"P6\n4294967296 4294967296\n255\n",
            b"P6\n1 1\n7\n\x08\0\0",
        ] {
            assert!(matches!(decode_ppm(bad), Err(Error::Format(_))), "{bad:?}");
        }
    }

    #[test]
    fn qmatrix_export_clips_channels() {
        let f = QMatrix::from_fn(1, 2, |_, j| {
            if j == 0 {
                Quaternion::new(9.0, 1.5, -0.2, 0.5)
            } else {
                Quaternion::pure(0.0, 1.0, f64::NAN)
            }
        });
        assert_eq!(qmatrix_to_rgb8(&f).data, vec![255, 0, 128, 0, 255, 0]);
    }
}
