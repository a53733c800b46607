//! PGM (Netpbm graymap) reading and writing, plain `P2` and raw `P5`,
//! maxval 255 only.

use crate::error::{Error, Result};
use crate::image::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PgmFormat {
    /// `P2`, decimal samples, one image row per line.
    Ascii,
    /// `P5`, one byte per sample.
    #[default]
    Binary,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    /// Skips whitespace and `#` comments running to end of line.
    fn skip_separators(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    /// Next unsigned decimal token, or `None` at end of input.
    fn number(&mut self) -> Result<Option<u64>> {
        self.skip_separators();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.bytes.get(self.pos) {
                None => Ok(None),
                Some(&b) => Err(Error::MalformedHeader(format!(
                    "unexpected byte 0x{b:02x} at offset {start}"
                ))),
            };
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse::<u64>()
            .map(Some)
            .map_err(|_| Error::MalformedHeader(format!("number too large at offset {start}")))
    }

    fn header_field(&mut self, name: &str) -> Result<u64> {
        self.number()?
            .ok_or_else(|| Error::MalformedHeader(format!("missing {name}")))
    }
}

/// Parses a `P2` or `P5` graymap.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let format = match bytes.get(..2) {
        Some(b"P2") => PgmFormat::Ascii,
        Some(b"P5") => PgmFormat::Binary,
        _ => return Err(Error::BadMagic),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    if !cur
        .bytes
        .get(2)
        .is_some_and(|&b| b.is_ascii_whitespace() || b == b'#')
    {
        return Err(Error::BadMagic);
    }
    let width = cur.header_field("width")?;
    let height = cur.header_field("height")?;
    let maxval = cur.header_field("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader(format!(
            "zero dimension {width}x{height}"
        )));
    }
    if maxval != 255 {
        return Err(Error::UnsupportedMaxval(maxval));
    }
    let expected = usize::try_from(width)
        .ok()
        .zip(usize::try_from(height).ok())
        .and_then(|(w, h)| w.checked_mul(h))
        .ok_or_else(|| Error::MalformedHeader("image too large".into()))?;
    let (width, height) = (width as usize, height as usize);

    match format {
        PgmFormat::Binary => {
            // exactly one whitespace byte separates maxval from the raster
            match cur.bytes.get(cur.pos) {
                Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
                _ => {
                    return Err(Error::MalformedHeader(
                        "missing separator after maxval".into(),
                    ))
                }
            }
            let raster = &bytes[cur.pos..];
            if raster.len() < expected {
                return Err(Error::TruncatedData {
                    expected,
                    found: raster.len(),
                });
            }
            GrayImage::new(width, height, raster[..expected].to_vec())
        }
        PgmFormat::Ascii => {
            let mut values = Vec::with_capacity(expected);
            while values.len() < expected {
                match cur.number()? {
                    Some(v) => values.push(i64::try_from(v).unwrap_or(i64::MAX)),
                    None => {
                        return Err(Error::TruncatedData {
                            expected,
                            found: values.len(),
                        })
                    }
                }
            }
            GrayImage::from_values(width, height, &values)
        }
    }
}

/// Serializes `image` in canonical form: `P5\n<w> <h>\n255\n` followed by
/// the raster, or the `P2` equivalent with one text row per image row.
pub fn write_pgm(image: &GrayImage, format: PgmFormat) -> Vec<u8> {
    let header = |magic: &str| format!("{magic}\n{} {}\n255\n", image.width(), image.height());
    match format {
        PgmFormat::Binary => {
            let mut out = header("P5").into_bytes();
            out.extend_from_slice(image.pixels());
            out
        }
        PgmFormat::Ascii => {
            let mut out = header("P2");
            for row in image.pixels().chunks(image.width()) {
                let line: Vec<String> = row.iter().map(u8::to_string).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
            out.into_bytes()
        }
    }
}
