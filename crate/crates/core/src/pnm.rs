//! Binary PGM (P5) and PPM (P6) with maxval 255.

use crate::error::{Error, Result};

/// Raster image with real-valued samples, interleaved per pixel, rows
/// top to bottom.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    /// 1 (gray) or 3 (RGB).
    pub channels: usize,
    pub samples: Vec<f64>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, channels: usize, samples: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ImageMismatch("zero dimension".into()));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::ImageMismatch(format!("{channels} channels")));
        }
        if samples.len() != width * height * channels {
            return Err(Error::ImageMismatch(format!(
                "{} samples for {width}×{height}×{channels}",
                samples.len()
            )));
        }
        Ok(Self { width, height, channels, samples })
    }

    /// Builds a grayscale image from `f(col, row)`.
    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let samples = (0..width * height).map(|k| f(k % width, k / width)).collect();
        Self { width, height, channels: 1, samples }
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    /// One channel as a row-major plane.
    pub fn channel(&self, c: usize) -> Vec<f64> {
        self.samples.iter().skip(c).step_by(self.channels).copied().collect()
    }

    pub fn set_channel(&mut self, c: usize, plane: &[f64]) {
        for (dst, src) in self.samples.iter_mut().skip(c).step_by(self.channels).zip(plane) {
            *dst = *src;
        }
    }
}

struct Header {
    magic: u8,
    width: usize,
    height: usize,
    maxval: usize,
    data_start: usize,
}

fn parse_header(bytes: &[u8]) -> Result<Header> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(Error::Pnm("missing magic number".into()));
    }
    let magic = match bytes[1] {
        b'5' | b'6' => bytes[1],
        m => return Err(Error::Pnm(format!("unsupported format P{}", m as char))),
    };
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        // whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(c) if c.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&c| c != b'\n') {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err(Error::Pnm("truncated header".into())),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        let text = std::str::from_utf8(&bytes[start..pos]).unwrap();
        *field = text.parse().map_err(|_| Error::Pnm("expected a number in header".into()))?;
    }
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::Pnm("missing whitespace after maxval".into()));
    }
    let [width, height, maxval] = fields;
    Ok(Header { magic, width, height, maxval, data_start: pos + 1 })
}

/// Decodes a P5 or P6 file with maxval 255.
pub fn read_pnm(bytes: &[u8]) -> Result<RasterImage> {
    let header = parse_header(bytes)?;
    if header.maxval != 255 {
        return Err(Error::Pnm(format!("maxval {} (only 255 is supported)", header.maxval)));
    }
    if header.width == 0 || header.height == 0 {
        return Err(Error::Pnm("zero dimension".into()));
    }
    let channels = if header.magic == b'5' { 1 } else { 3 };
    let len = header.width * header.height * channels;
    let payload = bytes
        .get(header.data_start..header.data_start + len)
        .ok_or_else(|| Error::Pnm("truncated payload".into()))?;
    let samples = payload.iter().map(|&b| b as f64).collect();
    RasterImage::new(header.width, header.height, channels, samples)
}

/// Encodes as P5/P6. Samples are clamped to `[0, 255]` and rounded half
/// away from zero.
pub fn write_pnm(image: &RasterImage) -> Vec<u8> {
    let magic = if image.channels == 1 { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{} {}\n255\n", image.width, image.height).into_bytes();
    out.extend(image.samples.iter().map(|&v| quantize(v)));
    out
}

pub fn quantize(v: f64) -> u8 {
    v.clamp(0.0, 255.0).round() as u8
}

/// Reads a P5 mask: samples ≥ 128 mark missing pixels.
pub fn mask_from_pgm(image: &RasterImage) -> Result<Vec<bool>> {
    if image.channels != 1 {
        return Err(Error::ImageMismatch("mask must be a grayscale (P5) image".into()));
    }
    Ok(image.samples.iter().map(|&v| v >= 128.0).collect())
}

/// Encodes a mask as P5 with 255 for missing and 0 for known.
pub fn mask_to_pgm(width: usize, height: usize, mask: &[bool]) -> Vec<u8> {
    let samples = mask.iter().map(|&m| if m { 255.0 } else { 0.0 }).collect();
    write_pnm(&RasterImage { width, height, channels: 1, samples })
}
