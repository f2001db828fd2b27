use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions {width}x{height}")]
    InvalidDimensions { width: usize, height: usize },

    #[error("expected {expected} samples, got {actual}")]
    SampleCount { expected: usize, actual: usize },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unsupported maxval {0}")]
    UnsupportedMaxval(u32),

    #[error("image {width}x{height} is smaller than the {min}x{min} kernel support")]
    TooSmall {
        width: usize,
        height: usize,
        min: usize,
    },

    #[error("composition is empty")]
    EmptyComposition,

    #[error("stage {index} ({name}) of composition rejected a {width}x{height} input: {source}")]
    Stage {
        index: usize,
        name: String,
        width: usize,
        height: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(
        "operator {name} changed dimensions from {from:?} to {to:?}; use the glide scan or crop-aware tooling"
    )]
    DimensionChanged {
        name: String,
        from: (usize, usize),
        to: (usize, usize),
    },

    #[error("translation {shift:?} moves content outside the padded canvas (pad {pad:?})")]
    ShiftExceedsPad {
        shift: (isize, isize),
        pad: (usize, usize),
    },

    #[error("translation is only defined on a padded canvas")]
    TranslationNeedsCanvas,

    #[error("crop window ({left},{top}) {width}x{height} is outside the {image_width}x{image_height} image")]
    CropOutOfBounds {
        left: usize,
        top: usize,
        width: usize,
        height: usize,
        image_width: usize,
        image_height: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("heatmap grid is empty")]
    EmptyGrid,

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("csv schema: {0}")]
    CsvSchema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
