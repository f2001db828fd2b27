//! GRBG colour-filter sampling and Malvar–He–Cutler linear demosaicing.

use crate::error::{Error, Result};
use crate::image::Image;
use crate::op::{Operator, ProcessingOp};
use crate::{div_round_half_away, image::CHANNELS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfaChannel {
    Red = 0,
    Green = 1,
    Blue = 2,
}

impl CfaChannel {
    /// Filter colour at `(row, col)` of the GRBG tile
    /// `[[G, R], [B, G]]`.
    pub fn at(row: usize, col: usize) -> Self {
        match (row & 1, col & 1) {
            (0, 0) | (1, 1) => Self::Green,
            (0, 1) => Self::Red,
            _ => Self::Blue,
        }
    }
}

/// One sample per pixel, colour given by [`CfaChannel::at`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BayerMosaic {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl BayerMosaic {
    pub fn from_samples(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions { width, height });
        }
        if samples.len() != width * height {
            return Err(Error::SampleCount {
                expected: width * height,
                actual: samples.len(),
            });
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.samples[row * self.width + col]
    }
}

/// Keeps, at every pixel, only the channel its filter passes.
pub fn bayer_sample(x: &Image) -> BayerMosaic {
    let (w, h) = x.dims();
    let mut samples = Vec::with_capacity(w * h);
    for r in 0..h {
        for c in 0..w {
            samples.push(x.get(CfaChannel::at(r, c) as usize, r, c));
        }
    }
    BayerMosaic {
        width: w,
        height: h,
        samples,
    }
}

pub const KERNEL_SUPPORT: usize = 5;
const HALF: usize = KERNEL_SUPPORT / 2;

/// Filter weights in sixteenths (each kernel sums to 16).
type Kernel = [[i32; KERNEL_SUPPORT]; KERNEL_SUPPORT];

/// Green at a red or blue site.
const GREEN_AT_RB: Kernel = [
    [0, 0, -2, 0, 0],
    [0, 0, 4, 0, 0],
    [-2, 4, 8, 4, -2],
    [0, 0, 4, 0, 0],
    [0, 0, -2, 0, 0],
];

/// Red or blue at a green site whose horizontal neighbours carry that colour.
const SAME_ROW: Kernel = [
    [0, 0, 1, 0, 0],
    [0, -2, 0, -2, 0],
    [-2, 8, 10, 8, -2],
    [0, -2, 0, -2, 0],
    [0, 0, 1, 0, 0],
];

/// Red or blue at a green site whose vertical neighbours carry that colour.
const SAME_COL: Kernel = [
    [0, 0, -2, 0, 0],
    [0, -2, 8, -2, 0],
    [1, 0, 10, 0, 1],
    [0, -2, 8, -2, 0],
    [0, 0, -2, 0, 0],
];

/// Red at a blue site, or blue at a red site.
const OPPOSITE: Kernel = [
    [0, 0, -3, 0, 0],
    [0, 4, 0, 4, 0],
    [-3, 0, 12, 0, -3],
    [0, 4, 0, 4, 0],
    [0, 0, -3, 0, 0],
];

/// Mosaic with `HALF` replicated pixels on each side.
struct Padded {
    stride: usize,
    data: Vec<i32>,
}

impl Padded {
    fn new(m: &BayerMosaic) -> Self {
        let stride = m.width + 2 * HALF;
        let rows = m.height + 2 * HALF;
        let mut data = Vec::with_capacity(stride * rows);
        for pr in 0..rows {
            let r = pr.saturating_sub(HALF).min(m.height - 1);
            for pc in 0..stride {
                let c = pc.saturating_sub(HALF).min(m.width - 1);
                data.push(i32::from(m.get(r, c)));
            }
        }
        Self { stride, data }
    }

    /// Kernel centred on original pixel `(row, col)`, rounded to 8 bits.
    fn filter(&self, k: &Kernel, row: usize, col: usize) -> u8 {
        let mut acc = 0;
        for (kr, krow) in k.iter().enumerate() {
            let base = (row + kr) * self.stride + col;
            for (kc, &wgt) in krow.iter().enumerate() {
                acc += wgt * self.data[base + kc];
            }
        }
        div_round_half_away(acc, 16).clamp(0, 255) as u8
    }
}

/// Reconstructs full RGB from a GRBG mosaic with the five 5x5 Malvar
/// filters. Borders are handled by replicating the outermost mosaic samples
/// two pixels outward; measured samples pass through unchanged.
pub fn malvar_demosaic(m: &BayerMosaic) -> Result<Image> {
    let (w, h) = (m.width, m.height);
    if w < KERNEL_SUPPORT || h < KERNEL_SUPPORT {
        return Err(Error::TooSmall {
            width: w,
            height: h,
            min: KERNEL_SUPPORT,
        });
    }
    let padded = Padded::new(m);
    let mut out = Image::new(w, h)?;
    for r in 0..h {
        for c in 0..w {
            let measured = m.get(r, c);
            let (red, green, blue) = match CfaChannel::at(r, c) {
                CfaChannel::Green => {
                    // Even rows are G R G R, odd rows B G B G.
                    let (row_k, col_k) = (
                        padded.filter(&SAME_ROW, r, c),
                        padded.filter(&SAME_COL, r, c),
                    );
                    if r % 2 == 0 {
                        (row_k, measured, col_k)
                    } else {
                        (col_k, measured, row_k)
                    }
                }
                CfaChannel::Red => (
                    measured,
                    padded.filter(&GREEN_AT_RB, r, c),
                    padded.filter(&OPPOSITE, r, c),
                ),
                CfaChannel::Blue => (
                    padded.filter(&OPPOSITE, r, c),
                    padded.filter(&GREEN_AT_RB, r, c),
                    measured,
                ),
            };
            out.set(0, r, c, red);
            out.set(1, r, c, green);
            out.set(2, r, c, blue);
        }
    }
    debug_assert_eq!(out.samples().len(), w * h * CHANNELS);
    Ok(out)
}

struct Demosaic;

impl Operator for Demosaic {
    fn name(&self) -> String {
        "demosaic".into()
    }

    fn output_dims(&self, width: usize, height: usize) -> Result<(usize, usize)> {
        if width < KERNEL_SUPPORT || height < KERNEL_SUPPORT {
            return Err(Error::TooSmall {
                width,
                height,
                min: KERNEL_SUPPORT,
            });
        }
        Ok((width, height))
    }

    fn apply(&self, x: &Image) -> Result<Image> {
        malvar_demosaic(&bayer_sample(x))
    }
}

/// `malvar_demosaic ∘ bayer_sample` as a processing operator.
pub fn demosaic_op() -> ProcessingOp {
    ProcessingOp::new(Demosaic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthgen::uniform_image;
    use crate::transforms::flip_h;

    /// Independent float implementation with the published coefficients in
    /// eighths, written out position by position.
    fn reference_demosaic(m: &BayerMosaic) -> Vec<[f64; 3]> {
        let (w, h) = (m.width() as isize, m.height() as isize);
        let at = |r: isize, c: isize| -> f64 {
            f64::from(m.get(r.clamp(0, h - 1) as usize, c.clamp(0, w - 1) as usize))
        };
        let green_at_rb = |r, c| {
            (4.0 * at(r, c) + 2.0 * (at(r - 1, c) + at(r + 1, c) + at(r, c - 1) + at(r, c + 1))
                - (at(r - 2, c) + at(r + 2, c) + at(r, c - 2) + at(r, c + 2)))
                / 8.0
        };
        let horizontal = |r, c| {
            (5.0 * at(r, c) + 4.0 * (at(r, c - 1) + at(r, c + 1))
                - (at(r - 1, c - 1) + at(r - 1, c + 1) + at(r + 1, c - 1) + at(r + 1, c + 1))
                - (at(r, c - 2) + at(r, c + 2))
                + 0.5 * (at(r - 2, c) + at(r + 2, c)))
                / 8.0
        };
        let vertical = |r, c| {
            (5.0 * at(r, c) + 4.0 * (at(r - 1, c) + at(r + 1, c))
                - (at(r - 1, c - 1) + at(r - 1, c + 1) + at(r + 1, c - 1) + at(r + 1, c + 1))
                - (at(r - 2, c) + at(r + 2, c))
                + 0.5 * (at(r, c - 2) + at(r, c + 2)))
                / 8.0
        };
        let opposite = |r, c| {
            (6.0 * at(r, c)
                + 2.0 * (at(r - 1, c - 1) + at(r - 1, c + 1) + at(r + 1, c - 1) + at(r + 1, c + 1))
                - 1.5 * (at(r - 2, c) + at(r + 2, c) + at(r, c - 2) + at(r, c + 2)))
                / 8.0
        };
        let mut out = Vec::new();
        for r in 0..h {
            for c in 0..w {
                let v = at(r, c);
                out.push(match (r % 2, c % 2) {
                    (0, 0) => [horizontal(r, c), v, vertical(r, c)],
                    (1, 1) => [vertical(r, c), v, horizontal(r, c)],
                    (0, 1) => [v, green_at_rb(r, c), opposite(r, c)],
                    _ => [opposite(r, c), green_at_rb(r, c), v],
                });
            }
        }
        out
    }

    #[test]
    fn tile_layout() {
        let x = Image::filled(2, 2, [10, 20, 30]).unwrap();
        assert_eq!(bayer_sample(&x).samples(), &[20, 10, 30, 20]);
        let gray = Image::filled(6, 4, [77; 3]).unwrap();
        assert!(bayer_sample(&gray).samples().iter().all(|&v| v == 77));
    }

    #[test]
    fn flipping_even_width_shifts_the_tile_phase() {
        // After flipping an even-width image, column 0 holds what sat under
        // a red filter, so the flipped mosaic is not the mosaic of any
        // reflection-consistent tile.
        let x = Image::from_fn(4, 2, |c, _, col| (c * 50 + col) as u8).unwrap();
        let flipped = bayer_sample(&flip_h(&x));
        let mosaic = bayer_sample(&x);
        assert_eq!(CfaChannel::at(0, 3), CfaChannel::Red);
        let mirrored: Vec<u8> = (0..2)
            .flat_map(|r| (0..4).rev().map(move |c| (r, c)))
            .map(|(r, c)| mosaic.get(r, c))
            .collect();
        assert_ne!(flipped.samples(), &mirrored[..]);

        let x = Image::from_fn(5, 2, |c, _, col| (c * 50 + col) as u8).unwrap();
        let flipped = bayer_sample(&flip_h(&x));
        let mosaic = bayer_sample(&x);
        let mirrored: Vec<u8> = (0..2)
            .flat_map(|r| (0..5).rev().map(move |c| (r, c)))
            .map(|(r, c)| mosaic.get(r, c))
            .collect();
        assert_eq!(flipped.samples(), &mirrored[..]);
    }

    #[test]
    fn kernels_have_unit_gain_and_mirror_symmetry() {
        for k in [GREEN_AT_RB, SAME_ROW, SAME_COL, OPPOSITE] {
            assert_eq!(k.iter().flatten().sum::<i32>(), 16);
            for row in &k {
                let mut rev = *row;
                rev.reverse();
                assert_eq!(&rev, row);
            }
            let mut rows = k;
            rows.reverse();
            assert_eq!(rows, k);
        }
    }

    #[test]
    fn constant_image_is_fixed() {
        for v in [0u8, 1, 127, 254, 255] {
            let x = Image::filled(9, 7, [v; 3]).unwrap();
            assert_eq!(malvar_demosaic(&bayer_sample(&x)).unwrap(), x);
        }
    }

    #[test]
    fn constant_per_channel_interior_is_exact() {
        let x = Image::filled(12, 10, [10, 20, 30]).unwrap();
        let mosaic = bayer_sample(&x);
        let out = malvar_demosaic(&mosaic).unwrap();
        let oracle = reference_demosaic(&mosaic);
        for r in 2..8 {
            for c in 2..10 {
                assert_eq!(out.pixel(r, c), [10, 20, 30], "({r},{c})");
                assert_eq!(oracle[r * 12 + c], [10.0, 20.0, 30.0]);
            }
        }
    }

    #[test]
    fn matches_float_reference() {
        for (seed, (w, h)) in [(1, (5, 5)), (2, (17, 9)), (3, (32, 31))] {
            let mosaic = bayer_sample(&uniform_image(w, h, seed));
            let out = malvar_demosaic(&mosaic).unwrap();
            let oracle = reference_demosaic(&mosaic);
            for r in 0..h {
                for c in 0..w {
                    let expect = oracle[r * w + c].map(|v| v.round().clamp(0.0, 255.0) as u8);
                    assert_eq!(out.pixel(r, c), expect, "({r},{c})");
                }
            }
        }
    }

    #[test]
    fn measured_samples_pass_through() {
        let x = uniform_image(16, 12, 21);
        let mosaic = bayer_sample(&x);
        let out = malvar_demosaic(&mosaic).unwrap();
        for r in 0..12 {
            for c in 0..16 {
                assert_eq!(
                    out.get(CfaChannel::at(r, c) as usize, r, c),
                    mosaic.get(r, c)
                );
            }
        }
    }

    #[test]
    fn rejects_images_below_support() {
        let m = bayer_sample(&uniform_image(4, 8, 0));
        assert!(matches!(malvar_demosaic(&m), Err(Error::TooSmall { .. })));
        assert!(demosaic_op().output_dims(8, 4).is_err());
    }

    #[test]
    fn flip_commutes_only_for_odd_widths() {
        let op = demosaic_op();
        for (w, commutes) in [(99, true), (98, false), (5, true), (6, false)] {
            let x = uniform_image(w, 13, w as u64);
            let lhs = op.apply(&flip_h(&x)).unwrap();
            let rhs = flip_h(&op.apply(&x).unwrap());
            assert_eq!(lhs == rhs, commutes, "width {w}");
        }
        let x = uniform_image(20, 20, 0);
        assert_eq!(op.apply(&x).unwrap(), op.apply(&x).unwrap());
    }
}
