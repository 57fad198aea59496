//! Bit-exact 8-bit PGM reading and writing, and the quantization bridge
//! between integer codes and the open gray-level interval (0, M).
//!
//! The writer emits one canonical byte form per format, so written files
//! are golden-file testable; the reader accepts the usual whitespace and
//! `#` comment variations found in files written by other tools.

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::lip::{GrayLevel, LipContext};

/// Fixed sample ceiling; this codec only handles 8-bit grayscale.
const MAXVAL: u32 = 255;

/// An 8-bit grayscale image as stored in a PGM file: integer codes 0..=255,
/// row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawImage {
    width: u32,
    height: u32,
    samples: Vec<u8>,
}

impl RawImage {
    pub fn new(width: u32, height: u32, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || samples.len() != width as usize * height as usize {
            return Err(Error::InvalidDimensions {
                width,
                height,
                pixels: samples.len(),
            });
        }
        Ok(RawImage {
            width,
            height,
            samples,
        })
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn samples(&self) -> &[u8] {
        &self.samples
    }
}

/// The two PGM encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmFormat {
    /// ASCII samples ("P2").
    P2,
    /// One byte per sample ("P5").
    P5,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn parse_error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    /// Skips whitespace runs and `#` comments (comment runs to end of line).
    fn skip_separators(&mut self) {
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_whitespace() => self.pos += 1,
                Some(b'#') => {
                    while let Some(b) = self.peek() {
                        self.pos += 1;
                        if b == b'\n' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }

    /// Reads the next run of non-whitespace, non-comment bytes.
    fn token(&mut self) -> Result<&'a [u8]> {
        self.skip_separators();
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() || b == b'#' {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start {
            Err(self.parse_error("unexpected end of header"))
        } else {
            Ok(&self.bytes[start..self.pos])
        }
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        let start_pos = self.pos;
        let token = self.token()?;
        std::str::from_utf8(token)
            .ok()
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or(Error::Parse {
                offset: start_pos,
                message: format!("expected {what}, got {:?}", String::from_utf8_lossy(token)),
            })
    }
}

/// Parses a P2 or P5 stream with a maxval of 255.
pub fn read_pgm(bytes: &[u8]) -> Result<RawImage> {
    let mut cur = Cursor { bytes, pos: 0 };
    let magic = cur.token()?;
    if cur.pos != magic.len() {
        return Err(Error::Parse {
            offset: 0,
            message: "data before the magic number".into(),
        });
    }
    let binary = match magic {
        b"P2" => false,
        b"P5" => true,
        b"P1" | b"P4" => {
            return Err(Error::Unsupported {
                message: "bitmap (PBM) input; only grayscale PGM is handled".into(),
            })
        }
        b"P3" | b"P6" => {
            return Err(Error::Unsupported {
                message: "color (PPM) input; only grayscale PGM is handled".into(),
            })
        }
        other => {
            return Err(Error::Parse {
                offset: 0,
                message: format!("bad magic number {:?}", String::from_utf8_lossy(other)),
            })
        }
    };

    let width = cur.number("width")?;
    let height = cur.number("height")?;
    if width == 0 || height == 0 {
        return Err(cur.parse_error(format!("dimensions must be positive, got {width}x{height}")));
    }
    let maxval = cur.number("maxval")?;
    if maxval != MAXVAL {
        return Err(Error::Unsupported {
            message: format!("maxval {maxval}; only 8-bit images (maxval 255) are handled"),
        });
    }
    let count = width as usize * height as usize;

    let samples = if binary {
        // Exactly one whitespace byte separates the header from the payload.
        match cur.peek() {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(cur.parse_error("expected whitespace before binary samples")),
        }
        let end = cur.pos + count;
        if end > bytes.len() {
            return Err(Error::Parse {
                offset: bytes.len(),
                message: format!(
                    "truncated payload: expected {count} sample byte(s), found {}",
                    bytes.len() - cur.pos
                ),
            });
        }
        let samples = bytes[cur.pos..end].to_vec();
        cur.pos = end;
        if cur.pos != bytes.len() {
            return Err(cur.parse_error("trailing data after pixel samples"));
        }
        samples
    } else {
        let mut samples = Vec::with_capacity(count);
        for _ in 0..count {
            let at = {
                cur.skip_separators();
                cur.pos
            };
            let value = cur.number("sample")?;
            if value > MAXVAL {
                return Err(Error::Parse {
                    offset: at,
                    message: format!("sample {value} exceeds maxval {MAXVAL}"),
                });
            }
            samples.push(value as u8);
        }
        cur.skip_separators();
        if cur.pos != bytes.len() {
            return Err(cur.parse_error("trailing data after pixel samples"));
        }
        samples
    };

    RawImage::new(width, height, samples)
}

/// Emits the canonical byte form: `P5\n<w> <h>\n255\n` plus the payload;
/// P2 payloads carry one image row per line with single spaces.
pub fn write_pgm(img: &RawImage, format: PgmFormat) -> Vec<u8> {
    let mut out = Vec::new();
    match format {
        PgmFormat::P5 => {
            out.extend_from_slice(format!("P5\n{} {}\n255\n", img.width, img.height).as_bytes());
            out.extend_from_slice(&img.samples);
        }
        PgmFormat::P2 => {
            out.extend_from_slice(format!("P2\n{} {}\n255\n", img.width, img.height).as_bytes());
            for row in img.samples.chunks(img.width as usize) {
                let mut first = true;
                for &s in row {
                    if !first {
                        out.push(b' ');
                    }
                    out.extend_from_slice(s.to_string().as_bytes());
                    first = false;
                }
                out.push(b'\n');
            }
        }
    }
    out
}

fn checked_offset(offset: f64) -> Result<f64> {
    if offset.is_finite() && offset > 0.0 && offset < 1.0 {
        Ok(offset)
    } else {
        Err(Error::InvalidOffset { offset })
    }
}

/// Maps integer codes to gray levels: code p becomes p + offset.
///
/// With the default offset 0.5 every code lands at its bin center, all
/// values are strictly inside (0, 256), and [`quantize`] inverts the map
/// exactly.
pub fn dequantize(ctx: &LipContext, raw: &RawImage, offset: f64) -> Result<GrayImage> {
    let offset = checked_offset(offset)?;
    if ctx.max() <= MAXVAL as f64 + offset {
        return Err(Error::QuantizationHeadroom {
            max: ctx.max(),
            offset,
        });
    }
    let pixels = raw
        .samples
        .iter()
        .map(|&code| GrayLevel::new_unchecked(code as f64 + offset))
        .collect();
    GrayImage::new(raw.width, raw.height, pixels)
}

/// Maps gray levels back to integer codes, clamping out-of-range values at
/// the extreme codes. Clamping happens here and only here; the algebra
/// itself never saturates.
pub fn quantize(f: &GrayImage, offset: f64) -> Result<RawImage> {
    let offset = checked_offset(offset)?;
    let lo = offset;
    let hi = MAXVAL as f64 + offset;
    let samples = f
        .pixels()
        .iter()
        .map(|p| (p.value().clamp(lo, hi) - offset).round() as u8)
        .collect();
    RawImage::new(f.width(), f.height(), samples)
}
