//! Reflections, translation on a padded canvas, cropping, and the
//! phase-shifted operator wrappers used by the glide scan.

use crate::error::{Error, Result};
use crate::image::{Image, CHANNELS};
use crate::op::{ProcessingOp, SymmetryTransform};
use crate::synthgen::PixelRng;

/// Mirrors columns: `c -> width - 1 - c`.
pub fn flip_h(x: &Image) -> Image {
    let (w, h) = x.dims();
    let mut out = x.clone();
    for c in 0..CHANNELS {
        let src = x.plane(c);
        let dst = out.plane_mut(c);
        for r in 0..h {
            let row = r * w;
            for col in 0..w {
                dst[row + col] = src[row + w - 1 - col];
            }
        }
    }
    out
}

/// Mirrors rows: `r -> height - 1 - r`.
pub fn flip_v(x: &Image) -> Image {
    let (w, h) = x.dims();
    let mut out = x.clone();
    for c in 0..CHANNELS {
        let src = x.plane(c);
        let dst = out.plane_mut(c);
        for r in 0..h {
            dst[r * w..(r + 1) * w].copy_from_slice(&src[(h - 1 - r) * w..(h - r) * w]);
        }
    }
    out
}

/// An image embedded in a constant-valued border. The canvas tracks where the
/// original content currently sits so that translation can refuse shifts
/// that would push content off the canvas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canvas {
    image: Image,
    pad: (usize, usize),
    pad_value: u8,
    content_left: usize,
    content_top: usize,
    content_width: usize,
    content_height: usize,
}

impl Canvas {
    /// Surrounds `x` with `pad_x` columns and `pad_y` rows of `pad_value` on
    /// every side.
    pub fn pad(x: &Image, pad_x: usize, pad_y: usize, pad_value: u8) -> Self {
        let (w, h) = x.dims();
        let (cw, ch) = (w + 2 * pad_x, h + 2 * pad_y);
        let mut image = Image::filled(cw, ch, [pad_value; 3]).expect("non-empty canvas");
        for c in 0..CHANNELS {
            let src = x.plane(c);
            let dst = image.plane_mut(c);
            for r in 0..h {
                let d = (r + pad_y) * cw + pad_x;
                dst[d..d + w].copy_from_slice(&src[r * w..(r + 1) * w]);
            }
        }
        Self {
            image,
            pad: (pad_x, pad_y),
            pad_value,
            content_left: pad_x,
            content_top: pad_y,
            content_width: w,
            content_height: h,
        }
    }

    pub fn image(&self) -> &Image {
        &self.image
    }

    pub fn pad_value(&self) -> u8 {
        self.pad_value
    }

    /// Current top-left corner of the content window.
    pub fn content_origin(&self) -> (usize, usize) {
        (self.content_left, self.content_top)
    }

    /// Shifts the whole canvas by `(dx, dy)`; uncovered pixels take the pad
    /// value. Fails if the content window would leave the canvas.
    pub fn translate(&self, dx: isize, dy: isize) -> Result<Self> {
        let (cw, ch) = self.image.dims();
        let new_left = self.content_left as isize + dx;
        let new_top = self.content_top as isize + dy;
        let fits = new_left >= 0
            && new_top >= 0
            && new_left as usize + self.content_width <= cw
            && new_top as usize + self.content_height <= ch;
        if !fits {
            return Err(Error::ShiftExceedsPad {
                shift: (dx, dy),
                pad: self.pad,
            });
        }
        let mut image = Image::filled(cw, ch, [self.pad_value; 3])?;
        for c in 0..CHANNELS {
            let src = self.image.plane(c);
            let dst = image.plane_mut(c);
            for r in 0..ch {
                let sr = r as isize - dy;
                if sr < 0 || sr >= ch as isize {
                    continue;
                }
                for col in 0..cw {
                    let sc = col as isize - dx;
                    if sc >= 0 && sc < cw as isize {
                        dst[r * cw + col] = src[sr as usize * cw + sc as usize];
                    }
                }
            }
        }
        Ok(Self {
            image,
            content_left: new_left as usize,
            content_top: new_top as usize,
            ..self.clone()
        })
    }

    pub fn flip_h(&self) -> Self {
        let cw = self.image.width();
        Self {
            image: flip_h(&self.image),
            content_left: cw - self.content_left - self.content_width,
            ..self.clone()
        }
    }

    pub fn flip_v(&self) -> Self {
        let ch = self.image.height();
        Self {
            image: flip_v(&self.image),
            content_top: ch - self.content_top - self.content_height,
            ..self.clone()
        }
    }

    /// Runs `op` over the whole canvas. The operator must preserve size.
    pub fn map(&self, op: &ProcessingOp) -> Result<Self> {
        let (cw, ch) = self.image.dims();
        op.require_same_dims(cw, ch)?;
        Ok(Self {
            image: op.apply(&self.image)?,
            ..self.clone()
        })
    }

    /// The pixels currently under the content window.
    pub fn content(&self) -> Result<Image> {
        crop(
            &self.image,
            self.content_left,
            self.content_top,
            self.content_width,
            self.content_height,
        )
    }
}

/// Free-function form of [`Canvas::translate`].
pub fn translate_padded(canvas: &Canvas, v: (isize, isize)) -> Result<Canvas> {
    canvas.translate(v.0, v.1)
}

/// Horizontal phase offset in pixels.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhaseShift(pub usize);

/// Padding used by the phase-shifted wrappers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GlideConfig {
    pub pad: usize,
    pub pad_value: u8,
}

impl Default for GlideConfig {
    fn default() -> Self {
        Self {
            pad: 32,
            pad_value: 128,
        }
    }
}

/// Which of the two compositions a phase-shifted evaluation performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// `T` first, then `J`.
    TransformThenOp,
    /// `J` first, then `T`.
    OpThenTransform,
}

/// Evaluates `J` and `T` as if `x` sat at horizontal offset `phi`:
/// pad, translate by `phi`, apply the pair in `order`, translate by
/// `T(-phi)`, crop the padding.
///
/// `phi` must be strictly below the pad width so at least one pad-valued
/// column always separates content from the canvas edge; every operator in
/// the crate extends its borders by replication, so that column makes the
/// finite canvas indistinguishable from an unbounded constant plane.
pub fn phase_shifted(
    op: &ProcessingOp,
    x: &Image,
    phi: PhaseShift,
    order: Order,
    cfg: GlideConfig,
) -> Result<Image> {
    if phi.0 >= cfg.pad {
        return Err(Error::InvalidParameter(format!(
            "phase {} needs a pad wider than {}",
            phi.0, cfg.pad
        )));
    }
    let t = SymmetryTransform::HorizontalFlip;
    let shift = (phi.0 as isize, 0);
    let canvas = Canvas::pad(x, cfg.pad, cfg.pad, cfg.pad_value);
    let shifted = translate_padded(&canvas, shift)?;
    let processed = match order {
        Order::TransformThenOp => t.apply_canvas(&shifted)?.map(op)?,
        Order::OpThenTransform => t.apply_canvas(&shifted.map(op)?)?,
    };
    let back = t.map_vector((-shift.0, -shift.1));
    let restored = translate_padded(&processed, back)?;
    debug_assert_eq!(restored.content_origin(), (cfg.pad, cfg.pad));
    restored.content()
}

/// `J T_phi (x)`: reflect, then process, at phase `phi`.
pub fn phase_shifted_jt(
    op: &ProcessingOp,
    x: &Image,
    phi: PhaseShift,
    cfg: GlideConfig,
) -> Result<Image> {
    phase_shifted(op, x, phi, Order::TransformThenOp, cfg)
}

/// `T J_phi (x)`: process, then reflect, at phase `phi`.
pub fn phase_shifted_tj(
    op: &ProcessingOp,
    x: &Image,
    phi: PhaseShift,
    cfg: GlideConfig,
) -> Result<Image> {
    phase_shifted(op, x, phi, Order::OpThenTransform, cfg)
}

/// Copies the `width x height` window whose top-left corner is
/// `(left, top)`.
pub fn crop(x: &Image, left: usize, top: usize, width: usize, height: usize) -> Result<Image> {
    let oob = || Error::CropOutOfBounds {
        left,
        top,
        width,
        height,
        image_width: x.width(),
        image_height: x.height(),
    };
    if width == 0 || height == 0 || left + width > x.width() || top + height > x.height() {
        return Err(oob());
    }
    let mut out = Image::new(width, height)?;
    let sw = x.width();
    for c in 0..CHANNELS {
        let src = x.plane(c);
        let dst = out.plane_mut(c);
        for r in 0..height {
            let s = (top + r) * sw + left;
            dst[r * width..(r + 1) * width].copy_from_slice(&src[s..s + width]);
        }
    }
    Ok(out)
}

/// Legal top-left offsets for a `size`-long window that avoids `margin`
/// pixels at both ends of an `extent`-long axis.
fn crop_offsets(extent: usize, size: usize, margin: usize) -> Option<(usize, usize)> {
    let hi = extent.checked_sub(margin)?.checked_sub(size)?;
    (margin <= hi).then_some((margin, hi))
}

/// Crop offsets drawn uniformly from the window positions that stay at
/// least `margin` pixels from every edge. Returns `(left, top)`.
pub fn random_crop_offsets(
    x_width: usize,
    x_height: usize,
    width: usize,
    height: usize,
    margin: usize,
    seed: u64,
) -> Result<(usize, usize)> {
    let (Some((lx, hx)), Some((ly, hy))) = (
        crop_offsets(x_width, width, margin),
        crop_offsets(x_height, height, margin),
    ) else {
        return Err(Error::CropOutOfBounds {
            left: margin,
            top: margin,
            width,
            height,
            image_width: x_width,
            image_height: x_height,
        });
    };
    let mut rng = PixelRng::new(seed);
    let left = lx + rng.below((hx - lx + 1) as u64) as usize;
    let top = ly + rng.below((hy - ly + 1) as u64) as usize;
    Ok((left, top))
}

/// Seeded random crop that keeps clear of a `margin`-pixel border.
pub fn random_crop(
    x: &Image,
    width: usize,
    height: usize,
    margin: usize,
    seed: u64,
) -> Result<Image> {
    let (left, top) = random_crop_offsets(x.width(), x.height(), width, height, margin, seed)?;
    crop(x, left, top, width, height)
}
