//! The processing-operator abstraction and the symmetry transforms it is
//! tested against.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::transforms::{flip_h, flip_v, Canvas};

/// A deterministic image operator `J`. It need not be invertible and may
/// change the image size.
pub trait Operator: Send + Sync {
    fn name(&self) -> String;

    /// Output size for an input of `width x height`, or the error `apply`
    /// would raise for that size.
    fn output_dims(&self, width: usize, height: usize) -> Result<(usize, usize)>;

    fn apply(&self, x: &Image) -> Result<Image>;

    /// JPEG quality used by this operator, if any stage compresses.
    fn quality(&self) -> Option<u8> {
        None
    }
}

/// Shared handle to an [`Operator`].
#[derive(Clone)]
pub struct ProcessingOp(Arc<dyn Operator>);

impl ProcessingOp {
    pub fn new(op: impl Operator + 'static) -> Self {
        Self(Arc::new(op))
    }

    pub fn name(&self) -> String {
        self.0.name()
    }

    pub fn output_dims(&self, width: usize, height: usize) -> Result<(usize, usize)> {
        self.0.output_dims(width, height)
    }

    pub fn apply(&self, x: &Image) -> Result<Image> {
        self.0.apply(x)
    }

    pub fn quality(&self) -> Option<u8> {
        self.0.quality()
    }

    pub fn identity() -> Self {
        Self::new(Identity)
    }

    /// Horizontal reflection wrapped as a processing operator.
    pub fn flip_h() -> Self {
        Self::new(FlipOp)
    }

    /// Returns an error unless the operator maps `width x height` to itself.
    pub fn require_same_dims(&self, width: usize, height: usize) -> Result<()> {
        let out = self.output_dims(width, height)?;
        if out != (width, height) {
            return Err(Error::DimensionChanged {
                name: self.name(),
                from: (width, height),
                to: out,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for ProcessingOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ProcessingOp").field(&self.name()).finish()
    }
}

struct Identity;

impl Operator for Identity {
    fn name(&self) -> String {
        "identity".into()
    }

    fn output_dims(&self, width: usize, height: usize) -> Result<(usize, usize)> {
        Ok((width, height))
    }

    fn apply(&self, x: &Image) -> Result<Image> {
        Ok(x.clone())
    }
}

struct FlipOp;

impl Operator for FlipOp {
    fn name(&self) -> String {
        "flip-h".into()
    }

    fn output_dims(&self, width: usize, height: usize) -> Result<(usize, usize)> {
        Ok((width, height))
    }

    fn apply(&self, x: &Image) -> Result<Image> {
        Ok(flip_h(x))
    }
}

struct Composite {
    stages: Vec<ProcessingOp>,
}

impl Operator for Composite {
    fn name(&self) -> String {
        self.stages
            .iter()
            .map(ProcessingOp::name)
            .collect::<Vec<_>>()
            .join("+")
    }

    fn output_dims(&self, width: usize, height: usize) -> Result<(usize, usize)> {
        let mut dims = (width, height);
        for (index, stage) in self.stages.iter().enumerate() {
            dims = stage
                .output_dims(dims.0, dims.1)
                .map_err(|e| stage_error(index, stage, dims, e))?;
        }
        Ok(dims)
    }

    fn apply(&self, x: &Image) -> Result<Image> {
        self.output_dims(x.width(), x.height())?;
        let mut cur = x.clone();
        for (index, stage) in self.stages.iter().enumerate() {
            let dims = cur.dims();
            cur = stage
                .apply(&cur)
                .map_err(|e| stage_error(index, stage, dims, e))?;
        }
        Ok(cur)
    }

    fn quality(&self) -> Option<u8> {
        self.stages.iter().find_map(ProcessingOp::quality)
    }
}

fn stage_error(index: usize, stage: &ProcessingOp, dims: (usize, usize), e: Error) -> Error {
    Error::Stage {
        index,
        name: stage.name(),
        width: dims.0,
        height: dims.1,
        source: Box::new(e),
    }
}

/// Left-to-right composition: `compose([a, b])` applies `a` then `b`.
/// Its name joins the stage names with `+`.
pub fn compose(ops: impl IntoIterator<Item = ProcessingOp>) -> Result<ProcessingOp> {
    let stages: Vec<_> = ops.into_iter().collect();
    if stages.is_empty() {
        return Err(Error::EmptyComposition);
    }
    Ok(ProcessingOp::new(Composite { stages }))
}

/// An invertible symmetry transform `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryTransform {
    HorizontalFlip,
    VerticalFlip,
    /// Shift by `(dx, dy)` pixels; only defined on a padded [`Canvas`].
    Translation(isize, isize),
}

impl SymmetryTransform {
    pub fn inverse(self) -> Self {
        match self {
            Self::Translation(dx, dy) => Self::Translation(-dx, -dy),
            flip => flip,
        }
    }

    pub fn apply(self, x: &Image) -> Result<Image> {
        match self {
            Self::HorizontalFlip => Ok(flip_h(x)),
            Self::VerticalFlip => Ok(flip_v(x)),
            Self::Translation(..) => Err(Error::TranslationNeedsCanvas),
        }
    }

    pub fn apply_canvas(self, canvas: &Canvas) -> Result<Canvas> {
        match self {
            Self::HorizontalFlip => Ok(canvas.flip_h()),
            Self::VerticalFlip => Ok(canvas.flip_v()),
            Self::Translation(dx, dy) => canvas.translate(dx, dy),
        }
    }

    /// The linear part of `T` acting on a displacement vector.
    pub fn map_vector(self, (dx, dy): (isize, isize)) -> (isize, isize) {
        match self {
            Self::HorizontalFlip => (-dx, dy),
            Self::VerticalFlip => (dx, -dy),
            Self::Translation(..) => (dx, dy),
        }
    }
}
