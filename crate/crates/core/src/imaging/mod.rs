//! The operators under study: Bayer sampling with linear demosaicing, and a
//! block-DCT JPEG model without entropy coding.

pub mod bayer;
pub mod color;
pub mod dct;
pub mod jpeg;
pub mod quant;

pub use self::bayer::{bayer_sample, demosaic_op, malvar_demosaic, BayerMosaic, CfaChannel};
pub use self::dct::{dct8_forward, dct8_inverse, Block};
pub use self::jpeg::{jpeg_compress, jpeg_op, JpegConfig};
pub use self::quant::{dequantize, quantize, QuantTable};
