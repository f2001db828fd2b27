//! Binary NetPBM I/O: P6 (RGB, maxval 255) and P5 (grayscale).

use crate::error::{Error, Result};
use crate::image::Image;
use crate::round_half_away;

struct Header {
    width: usize,
    height: usize,
    maxval: u32,
    data_offset: usize,
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

/// Skips whitespace and `#` comments.
fn skip_separators(bytes: &[u8], mut pos: usize) -> usize {
    loop {
        match bytes.get(pos) {
            Some(b) if b.is_ascii_whitespace() => pos += 1,
            Some(b'#') => {
                while let Some(&b) = bytes.get(pos) {
                    pos += 1;
                    if b == b'\n' || b == b'\r' {
                        break;
                    }
                }
            }
            _ => return pos,
        }
    }
}

fn parse_uint(bytes: &[u8], pos: usize, what: &str) -> Result<(u32, usize)> {
    let start = skip_separators(bytes, pos);
    let mut end = start;
    while bytes.get(end).is_some_and(u8::is_ascii_digit) {
        end += 1;
    }
    if end == start {
        return Err(parse_err(start, format!("expected {what}")));
    }
    let text = std::str::from_utf8(&bytes[start..end]).expect("ascii digits");
    let v = text
        .parse::<u32>()
        .map_err(|_| parse_err(start, format!("{what} out of range")))?;
    Ok((v, end))
}

fn parse_header(bytes: &[u8], magic: &[u8; 2]) -> Result<Header> {
    if bytes.len() < 2 || &bytes[..2] != magic {
        return Err(parse_err(
            0,
            format!("expected magic {}", String::from_utf8_lossy(magic)),
        ));
    }
    let (width, pos) = parse_uint(bytes, 2, "width")?;
    let (height, pos) = parse_uint(bytes, pos, "height")?;
    let (maxval, pos) = parse_uint(bytes, pos, "maxval")?;
    if width == 0 || height == 0 {
        return Err(parse_err(2, format!("zero dimension {width}x{height}")));
    }
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => {}
        Some(_) => return Err(parse_err(pos, "expected whitespace after maxval")),
        None => return Err(parse_err(pos, "truncated header")),
    }
    Ok(Header {
        width: width as usize,
        height: height as usize,
        maxval,
        data_offset: pos + 1,
    })
}

fn payload<'a>(bytes: &'a [u8], header: &Header, channels: usize) -> Result<&'a [u8]> {
    if header.maxval != 255 {
        return Err(Error::UnsupportedMaxval(header.maxval));
    }
    let len = header
        .width
        .checked_mul(header.height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| parse_err(2, "dimensions overflow"))?;
    let data = &bytes[header.data_offset..];
    if data.len() < len {
        return Err(parse_err(
            bytes.len(),
            format!(
                "truncated payload: expected {len} bytes, found {}",
                data.len()
            ),
        ));
    }
    Ok(&data[..len])
}

/// Parses a binary P6 image with maxval 255.
pub fn read_ppm(bytes: &[u8]) -> Result<Image> {
    let header = parse_header(bytes, b"P6")?;
    let data = payload(bytes, &header, 3)?;
    Image::from_interleaved(header.width, header.height, data)
}

pub fn write_ppm(img: &Image) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(&img.to_interleaved());
    out
}

/// Grayscale raster as read from or written to a P5 file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub samples: Vec<u8>,
}

pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let header = parse_header(bytes, b"P5")?;
    let data = payload(bytes, &header, 1)?;
    Ok(GrayImage {
        width: header.width,
        height: header.height,
        samples: data.to_vec(),
    })
}

pub fn write_pgm(width: usize, height: usize, samples: &[u8]) -> Result<Vec<u8>> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidDimensions { width, height });
    }
    if samples.len() != width * height {
        return Err(Error::SampleCount {
            expected: width * height,
            actual: samples.len(),
        });
    }
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(samples);
    Ok(out)
}

/// Intensity mapping for [`write_pgm_heatmap`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HeatmapScale {
    /// `255 * v / max`.
    #[default]
    MaxTo255,
    /// `255 * ln(1 + v) / ln(1 + max)`.
    Log,
}

/// Renders a grid of non-negative values as a P5 image, one pixel per cell
/// (`grid[row][col]`). Exactly-zero cells map to 0; every other cell maps to
/// at least 1 so zero and non-zero cells never share an intensity.
pub fn write_pgm_heatmap(grid: &[Vec<f64>], scale: HeatmapScale) -> Result<Vec<u8>> {
    let height = grid.len();
    let width = grid.first().map_or(0, Vec::len);
    if height == 0 || width == 0 {
        return Err(Error::EmptyGrid);
    }
    if grid.iter().any(|row| row.len() != width) {
        return Err(Error::InvalidParameter("ragged heatmap grid".into()));
    }
    if grid.iter().flatten().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidParameter(
            "heatmap cells must be finite and non-negative".into(),
        ));
    }
    let max = grid.iter().flatten().copied().fold(0.0, f64::max);
    let map = |v: f64| -> u8 {
        if v == 0.0 {
            return 0;
        }
        let t = match scale {
            HeatmapScale::MaxTo255 => v / max,
            HeatmapScale::Log => v.ln_1p() / max.ln_1p(),
        };
        round_half_away(255.0 * t).clamp(1.0, 255.0) as u8
    };
    let samples: Vec<u8> = grid.iter().flatten().map(|&v| map(v)).collect();
    write_pgm(width, height, &samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_round_trip() {
        let img = Image::from_interleaved(2, 2, &(0..12).collect::<Vec<u8>>()).unwrap();
        let back = read_ppm(&write_ppm(&img)).unwrap();
        assert_eq!(back, img);
        assert_eq!(back.to_interleaved(), (0..12).collect::<Vec<u8>>());
    }

    #[test]
    fn reads_minimal_header() {
        let mut bytes = b"P6\n2 1\n255\n".to_vec();
        bytes.extend_from_slice(&[1, 2, 3, 4, 5, 6]);
        let img = read_ppm(&bytes).unwrap();
        assert_eq!(img.dims(), (2, 1));
        assert_eq!(img.pixel(0, 1), [4, 5, 6]);
    }

    #[test]
    fn header_comments_are_skipped() {
        let mut bytes = b"P6 # made by hand\n1 # w\n1\n255\n".to_vec();
        bytes.extend_from_slice(&[9, 8, 7]);
        assert_eq!(read_ppm(&bytes).unwrap().pixel(0, 0), [9, 8, 7]);
    }

    #[test]
    fn rejects_sixteen_bit() {
        let mut bytes = b"P6\n1 1\n65535\n".to_vec();
        bytes.extend_from_slice(&[0; 6]);
        let err = read_ppm(&bytes).unwrap_err();
        assert!(matches!(err, Error::UnsupportedMaxval(65535)));
        assert_eq!(err.to_string(), "unsupported maxval 65535");
    }

    #[test]
    fn truncated_payload_reports_offset() {
        let mut bytes = b"P6\n2 2\n255\n".to_vec();
        bytes.extend_from_slice(&[0; 5]);
        match read_ppm(&bytes) {
            Err(Error::Parse { offset, message }) => {
                assert_eq!(offset, bytes.len());
                assert!(message.contains("truncated"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_headers() {
        assert!(matches!(
            read_ppm(b"P5\n1 1\n255\n\0"),
            Err(Error::Parse { offset: 0, .. })
        ));
        assert!(matches!(
            read_ppm(b"P6\nx 1\n255\n"),
            Err(Error::Parse { offset: 3, .. })
        ));
        assert!(matches!(
            read_ppm(b"P6\n1 1\n255"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn heatmap_scaling() {
        let zeros = write_pgm_heatmap(&vec![vec![0.0; 3]; 2], HeatmapScale::MaxTo255).unwrap();
        assert_eq!(read_pgm(&zeros).unwrap().samples, vec![0; 6]);

        let single = write_pgm_heatmap(&[vec![5.0]], HeatmapScale::MaxTo255).unwrap();
        assert_eq!(read_pgm(&single).unwrap().samples, vec![255]);

        // 255 * 1/2 = 127.5 rounds away from zero.
        let ramp = write_pgm_heatmap(&[vec![0.0, 1.0, 2.0]], HeatmapScale::MaxTo255).unwrap();
        let pgm = read_pgm(&ramp).unwrap();
        assert_eq!((pgm.width, pgm.height), (3, 1));
        assert_eq!(pgm.samples, vec![0, 128, 255]);
    }

    #[test]
    fn tiny_nonzero_cells_stay_visible() {
        let grid = vec![vec![0.0, 1e-9, 1000.0]];
        for scale in [HeatmapScale::MaxTo255, HeatmapScale::Log] {
            let pgm = read_pgm(&write_pgm_heatmap(&grid, scale).unwrap()).unwrap();
            assert_eq!(pgm.samples, vec![0, 1, 255]);
        }
    }

    #[test]
    fn heatmap_rejects_empty_and_negative() {
        assert!(matches!(
            write_pgm_heatmap(&[], HeatmapScale::MaxTo255),
            Err(Error::EmptyGrid)
        ));
        assert!(write_pgm_heatmap(&[vec![-1.0]], HeatmapScale::Log).is_err());
    }
}
