//! Planar 8-bit RGB rasters and signed residual rasters.

use crate::error::{Error, Result};

pub const CHANNELS: usize = 3;

/// A three-channel 8-bit image stored plane by plane (`R`, then `G`, then
/// `B`), each plane row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Image {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl std::fmt::Debug for Image {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Image")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidDimensions { width, height });
    }
    Ok(())
}

impl Image {
    /// A black image.
    pub fn new(width: usize, height: usize) -> Result<Self> {
        check_dims(width, height)?;
        Ok(Self {
            width,
            height,
            samples: vec![0; width * height * CHANNELS],
        })
    }

    /// Every pixel set to `rgb`.
    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self> {
        check_dims(width, height)?;
        let plane = width * height;
        let mut samples = Vec::with_capacity(plane * CHANNELS);
        for v in rgb {
            samples.extend(std::iter::repeat_n(v, plane));
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    /// Wraps planar samples (`R` plane, `G` plane, `B` plane).
    pub fn from_planar(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        check_dims(width, height)?;
        let expected = width * height * CHANNELS;
        if samples.len() != expected {
            return Err(Error::SampleCount {
                expected,
                actual: samples.len(),
            });
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    /// Builds an image from interleaved `RGBRGB...` samples.
    pub fn from_interleaved(width: usize, height: usize, rgb: &[u8]) -> Result<Self> {
        check_dims(width, height)?;
        let plane = width * height;
        if rgb.len() != plane * CHANNELS {
            return Err(Error::SampleCount {
                expected: plane * CHANNELS,
                actual: rgb.len(),
            });
        }
        let mut samples = vec![0; plane * CHANNELS];
        for (i, px) in rgb.chunks_exact(CHANNELS).enumerate() {
            for c in 0..CHANNELS {
                samples[c * plane + i] = px[c];
            }
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize, usize) -> u8,
    ) -> Result<Self> {
        let mut img = Self::new(width, height)?;
        for c in 0..CHANNELS {
            for r in 0..height {
                for x in 0..width {
                    img.set(c, r, x, f(c, r, x));
                }
            }
        }
        Ok(img)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// All samples in planar order.
    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    pub fn plane(&self, channel: usize) -> &[u8] {
        let n = self.width * self.height;
        &self.samples[channel * n..(channel + 1) * n]
    }

    pub fn plane_mut(&mut self, channel: usize) -> &mut [u8] {
        let n = self.width * self.height;
        &mut self.samples[channel * n..(channel + 1) * n]
    }

    #[inline]
    pub fn get(&self, channel: usize, row: usize, col: usize) -> u8 {
        self.samples[(channel * self.height + row) * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, channel: usize, row: usize, col: usize, v: u8) {
        self.samples[(channel * self.height + row) * self.width + col] = v;
    }

    pub fn pixel(&self, row: usize, col: usize) -> [u8; 3] {
        [
            self.get(0, row, col),
            self.get(1, row, col),
            self.get(2, row, col),
        ]
    }

    /// Interleaved `RGBRGB...` copy of the samples.
    pub fn to_interleaved(&self) -> Vec<u8> {
        let plane = self.width * self.height;
        let mut out = vec![0; plane * CHANNELS];
        for c in 0..CHANNELS {
            for (i, &v) in self.plane(c).iter().enumerate() {
                out[i * CHANNELS + c] = v;
            }
        }
        out
    }
}

/// Signed per-sample difference of two equally sized images.
#[derive(Clone, PartialEq, Eq)]
pub struct ResidualImage {
    width: usize,
    height: usize,
    samples: Vec<i16>,
}

impl std::fmt::Debug for ResidualImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ResidualImage")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

impl ResidualImage {
    /// `lhs - rhs`, sample by sample.
    pub fn difference(lhs: &Image, rhs: &Image) -> Result<Self> {
        if lhs.dims() != rhs.dims() {
            return Err(Error::InvalidParameter(format!(
                "cannot subtract a {:?} image from a {:?} image",
                rhs.dims(),
                lhs.dims()
            )));
        }
        let samples = lhs
            .samples
            .iter()
            .zip(&rhs.samples)
            .map(|(&a, &b)| i16::from(a) - i16::from(b))
            .collect();
        Ok(Self {
            width: lhs.width,
            height: lhs.height,
            samples,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[i16] {
        &self.samples
    }

    #[inline]
    pub fn get(&self, channel: usize, row: usize, col: usize) -> i16 {
        self.samples[(channel * self.height + row) * self.width + col]
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|&v| v == 0)
    }

    /// `|E|` as a grayscale raster with the three planes stacked vertically
    /// (`R` on top), so the output is `width x 3*height`.
    pub fn abs_planes(&self) -> Vec<u8> {
        self.samples
            .iter()
            .map(|v| v.unsigned_abs() as u8)
            .collect()
    }

    /// 255 where the residual is negative, 0 elsewhere; same layout as
    /// [`ResidualImage::abs_planes`].
    pub fn sign_planes(&self) -> Vec<u8> {
        self.samples
            .iter()
            .map(|&v| if v < 0 { 255 } else { 0 })
            .collect()
    }
}
