//! Commutative-residual analysis of image-processing operators.
//!
//! `chirascope` measures whether a deterministic image operator `J` commutes
//! with a symmetry transform `T` (horizontal reflection by default). When the
//! residual `J(T(x)) - T(J(x))` vanishes on every element of a reflection
//! symmetric distribution, the processed distribution stays symmetric.
//!
//! The crate bundles:
//!
//! * an 8-bit planar [`Image`] type with bit-exact NetPBM I/O ([`netpbm`]),
//! * the operators under study: GRBG Bayer sampling with linear 5x5
//!   demosaicing and a block-DCT JPEG model ([`imaging`]),
//! * symmetry transforms, padded-canvas translation and phase-shifted
//!   operator wrappers ([`transforms`]),
//! * residuals, size sweeps, glide scans and chirality verdicts ([`residual`]),
//! * seeded synthetic image distributions ([`synthgen`]),
//! * brute-force checks of the finite group-theoretic statements behind the
//!   residual test ([`symlab`]),
//! * the `chirascope` command line ([`cli`]).
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod cli;
pub mod error;
pub mod image;
pub mod imaging;
pub mod netpbm;
pub mod op;
pub mod residual;
pub mod symlab;
pub mod synthgen;
pub mod transforms;

pub use crate::error::{Error, Result};
pub use crate::image::{Image, ResidualImage};
pub use crate::op::{compose, ProcessingOp, SymmetryTransform};

/// Rounds half away from zero. `f64::round` already has this tie rule; the
/// alias documents that every rounding site in the crate shares it.
#[inline]
pub(crate) fn round_half_away(v: f64) -> f64 {
    v.round()
}

/// Integer division by a positive divisor, rounding half away from zero.
#[inline]
pub(crate) fn div_round_half_away(num: i32, den: i32) -> i32 {
    debug_assert!(den > 0);
    if num >= 0 {
        (num + den / 2) / den
    } else {
        -((-num + den / 2) / den)
    }
}

/// Clamps a real value to `[0, 255]` after rounding.
#[inline]
pub(crate) fn to_u8(v: f64) -> u8 {
    round_half_away(v).clamp(0.0, 255.0) as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_rounding_is_odd_symmetric() {
        for den in 1..40 {
            for num in -500..500 {
                assert_eq!(
                    div_round_half_away(-num, den),
                    -div_round_half_away(num, den)
                );
            }
        }
        assert_eq!(div_round_half_away(8, 16), 1);
        assert_eq!(div_round_half_away(-8, 16), -1);
        assert_eq!(div_round_half_away(7, 16), 0);
        assert_eq!(div_round_half_away(25, 10), 3);
    }

    #[test]
    fn real_rounding_ties_go_away_from_zero() {
        assert_eq!(round_half_away(2.5), 3.0);
        assert_eq!(round_half_away(-2.5), -3.0);
        assert_eq!(to_u8(127.5), 128);
        assert_eq!(to_u8(-3.0), 0);
        assert_eq!(to_u8(300.0), 255);
    }
}
