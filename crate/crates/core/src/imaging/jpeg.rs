//! Pixel-domain model of baseline JPEG with 4:2:0 chroma.
//!
//! The pipeline is RGB -> Y'CbCr -> 2x2 chroma mean -> replicate-pad each
//! plane on the right and bottom to a multiple of 8 -> level shift, DCT,
//! quantize, dequantize, inverse DCT -> unpad -> chroma replication ->
//! RGB. Every stage rounds once to 8 bits. Entropy coding is lossless and
//! is omitted.

use super::color::{rgb_to_ycbcr, ycbcr_to_rgb};
use super::dct::{dct8_forward, dct8_inverse, Block};
use super::quant::{dequantize, quantize, QuantTable};
use crate::error::{Error, Result};
use crate::image::Image;
use crate::op::{Operator, ProcessingOp};
use crate::{div_round_half_away, to_u8};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JpegConfig {
    quality: u8,
}

impl JpegConfig {
    pub fn new(quality: u8) -> Result<Self> {
        if !(1..=100).contains(&quality) {
            return Err(Error::InvalidParameter(format!(
                "JPEG quality {quality} outside 1..=100"
            )));
        }
        Ok(Self { quality })
    }

    pub fn quality(&self) -> u8 {
        self.quality
    }
}

impl Default for JpegConfig {
    fn default() -> Self {
        Self { quality: 75 }
    }
}

/// A single 8-bit plane.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Plane {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl Plane {
    fn at(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.width + c]
    }

    /// Mean of each 2x2 cell, anchored at the top-left; an odd last row or
    /// column is paired with itself.
    fn downsample(&self) -> Plane {
        let (w, h) = (self.width.div_ceil(2), self.height.div_ceil(2));
        let mut data = Vec::with_capacity(w * h);
        for r in 0..h {
            let (r0, r1) = (2 * r, (2 * r + 1).min(self.height - 1));
            for c in 0..w {
                let (c0, c1) = (2 * c, (2 * c + 1).min(self.width - 1));
                let sum = i32::from(self.at(r0, c0))
                    + i32::from(self.at(r0, c1))
                    + i32::from(self.at(r1, c0))
                    + i32::from(self.at(r1, c1));
                data.push(div_round_half_away(sum, 4) as u8);
            }
        }
        Plane {
            width: w,
            height: h,
            data,
        }
    }

    /// Pixel replication back to `width x height`.
    fn upsample(&self, width: usize, height: usize) -> Plane {
        let mut data = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                data.push(self.at(r / 2, c / 2));
            }
        }
        Plane {
            width,
            height,
            data,
        }
    }

    /// Replicates the last column and row out to multiples of 8.
    fn pad_to_blocks(&self) -> Plane {
        let (w, h) = (
            self.width.next_multiple_of(8),
            self.height.next_multiple_of(8),
        );
        let mut data = Vec::with_capacity(w * h);
        for r in 0..h {
            let sr = r.min(self.height - 1);
            for c in 0..w {
                data.push(self.at(sr, c.min(self.width - 1)));
            }
        }
        Plane {
            width: w,
            height: h,
            data,
        }
    }

    fn crop(&self, width: usize, height: usize) -> Plane {
        let mut data = Vec::with_capacity(width * height);
        for r in 0..height {
            data.extend_from_slice(&self.data[r * self.width..r * self.width + width]);
        }
        Plane {
            width,
            height,
            data,
        }
    }

    /// Block transform, quantization round trip, inverse transform.
    fn code(&self, table: &QuantTable) -> Plane {
        let padded = self.pad_to_blocks();
        let mut out = padded.clone();
        for by in (0..padded.height).step_by(8) {
            for bx in (0..padded.width).step_by(8) {
                let block: Block = std::array::from_fn(|r| {
                    std::array::from_fn(|c| f64::from(padded.at(by + r, bx + c)) - 128.0)
                });
                let levels = quantize(&dct8_forward(&block), table);
                let recon = dct8_inverse(&dequantize(&levels, table));
                for (r, row) in recon.iter().enumerate() {
                    for (c, &v) in row.iter().enumerate() {
                        out.data[(by + r) * padded.width + bx + c] = to_u8(v + 128.0);
                    }
                }
            }
        }
        out.crop(self.width, self.height)
    }
}

/// Runs the lossy JPEG pipeline on `x` at the configured quality.
pub fn jpeg_compress(x: &Image, cfg: JpegConfig) -> Image {
    let (w, h) = x.dims();
    let n = w * h;
    let mut ycc = [vec![0u8; n], vec![0u8; n], vec![0u8; n]];
    for i in 0..n {
        let conv = rgb_to_ycbcr([x.plane(0)[i], x.plane(1)[i], x.plane(2)[i]]);
        for (plane, v) in ycc.iter_mut().zip(conv) {
            plane[i] = v;
        }
    }
    let [y, cb, cr] = ycc.map(|data| Plane {
        width: w,
        height: h,
        data,
    });
    let luma_table = QuantTable::luma(cfg.quality);
    let chroma_table = QuantTable::chroma(cfg.quality);
    let y = y.code(&luma_table);
    let cb = cb.downsample().code(&chroma_table).upsample(w, h);
    let cr = cr.downsample().code(&chroma_table).upsample(w, h);

    let mut samples = vec![0u8; 3 * n];
    for i in 0..n {
        let rgb = ycbcr_to_rgb([y.data[i], cb.data[i], cr.data[i]]);
        for c in 0..3 {
            samples[c * n + i] = rgb[c];
        }
    }
    Image::from_planar(w, h, samples).expect("dimensions preserved")
}

struct Jpeg(JpegConfig);

impl Operator for Jpeg {
    fn name(&self) -> String {
        "jpeg".into()
    }

    fn output_dims(&self, width: usize, height: usize) -> Result<(usize, usize)> {
        Ok((width, height))
    }

    fn apply(&self, x: &Image) -> Result<Image> {
        Ok(jpeg_compress(x, self.0))
    }

    fn quality(&self) -> Option<u8> {
        Some(self.0.quality)
    }
}

pub fn jpeg_op(cfg: JpegConfig) -> ProcessingOp {
    ProcessingOp::new(Jpeg(cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::color;
    use crate::synthgen::uniform_image;
    use crate::transforms::flip_h;

    fn commutes(w: usize, h: usize, quality: u8, seed: u64) -> bool {
        let cfg = JpegConfig::new(quality).unwrap();
        let x = uniform_image(w, h, seed);
        jpeg_compress(&flip_h(&x), cfg) == flip_h(&jpeg_compress(&x, cfg))
    }

    #[test]
    fn quality_is_validated() {
        assert!(JpegConfig::new(0).is_err());
        assert!(JpegConfig::new(101).is_err());
        assert_eq!(JpegConfig::default().quality(), 75);
    }

    #[test]
    fn widths_divisible_by_sixteen_commute() {
        for w in [16, 32, 48, 64] {
            for h in [8, 13, 16] {
                assert!(commutes(w, h, 75, (w * h) as u64), "{w}x{h}");
            }
        }
    }

    #[test]
    fn other_widths_do_not() {
        for w in [99, 100, 8, 24, 40, 17] {
            assert!(!commutes(w, 16, 75, w as u64), "{w}");
        }
    }

    #[test]
    fn constant_blocks_survive_at_quality_100() {
        // Brute force over every gray level and a spread of colours: a DC-only
        // block has nothing to lose at unit quantizer steps, so the output
        // equals the colour round trip (exact for grays).
        let cfg = JpegConfig::new(100).unwrap();
        for v in 0..=255u8 {
            let x = Image::filled(16, 16, [v; 3]).unwrap();
            assert_eq!(jpeg_compress(&x, cfg), x);
        }
        for (i, rgb) in [
            [10, 20, 30],
            [255, 0, 0],
            [0, 255, 0],
            [0, 0, 255],
            [200, 17, 99],
        ]
        .into_iter()
        .enumerate()
        {
            let x = Image::filled(24, 8 + i, rgb).unwrap();
            let expected = color::ycbcr_to_rgb(color::rgb_to_ycbcr(rgb));
            let out = jpeg_compress(&x, cfg);
            assert!(out
                .samples()
                .chunks(out.width() * out.height())
                .zip(expected)
                .all(|(plane, e)| plane.iter().all(|&s| s == e)));
        }
    }

    #[test]
    fn chroma_resampling_is_phase_explicit() {
        let p = Plane {
            width: 3,
            height: 1,
            data: vec![10, 20, 31],
        };
        let d = p.downsample();
        assert_eq!((d.width, d.height), (2, 1));
        // (10 + 20 + 10 + 20) / 4 = 15; (31 * 4) / 4 = 31.
        assert_eq!(d.data, vec![15, 31]);
        assert_eq!(d.upsample(3, 1).data, vec![15, 15, 31]);
        let odd = Plane {
            width: 2,
            height: 1,
            data: vec![1, 2],
        };
        // 6 / 4 = 1.5 rounds up.
        assert_eq!(odd.downsample().data, vec![2]);
    }

    #[test]
    fn deterministic() {
        let x = uniform_image(37, 29, 4);
        let cfg = JpegConfig::default();
        assert_eq!(jpeg_compress(&x, cfg), jpeg_compress(&x, cfg));
    }
}
