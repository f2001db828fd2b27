//! Quantization tables and (de)quantization of DCT blocks.

use super::dct::Block;
use crate::round_half_away;

/// Quantizer step per coefficient, `[v][u]`, entries in `1..=255`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuantTable(pub [[u16; 8]; 8]);

/// Baseline luminance table in natural (row-major) order.
pub const LUMA_BASE: [[u16; 8]; 8] = [
    [16, 11, 10, 16, 24, 40, 51, 61],
    [12, 12, 14, 19, 26, 58, 60, 55],
    [14, 13, 16, 24, 40, 57, 69, 56],
    [14, 17, 22, 29, 51, 87, 80, 62],
    [18, 22, 37, 56, 68, 109, 103, 77],
    [24, 35, 55, 64, 81, 104, 113, 92],
    [49, 64, 78, 87, 103, 121, 120, 101],
    [72, 92, 95, 98, 112, 100, 103, 99],
];

/// Baseline chrominance table in natural (row-major) order.
pub const CHROMA_BASE: [[u16; 8]; 8] = [
    [17, 18, 24, 47, 99, 99, 99, 99],
    [18, 21, 26, 66, 99, 99, 99, 99],
    [24, 26, 56, 99, 99, 99, 99, 99],
    [47, 66, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
];

impl QuantTable {
    /// Scales a base table by the usual quality rule: `5000 / q` below 50,
    /// `200 - 2q` otherwise, then `(entry * scale + 50) / 100` clamped to
    /// `1..=255`.
    pub fn scaled(base: &[[u16; 8]; 8], quality: u8) -> Self {
        let q = u32::from(quality.clamp(1, 100));
        let scale = if q < 50 { 5000 / q } else { 200 - 2 * q };
        let mut t = [[0u16; 8]; 8];
        for (dst, src) in t.iter_mut().flatten().zip(base.iter().flatten()) {
            *dst = ((u32::from(*src) * scale + 50) / 100).clamp(1, 255) as u16;
        }
        Self(t)
    }

    pub fn luma(quality: u8) -> Self {
        Self::scaled(&LUMA_BASE, quality)
    }

    pub fn chroma(quality: u8) -> Self {
        Self::scaled(&CHROMA_BASE, quality)
    }
}

/// `round(c / q)`, ties away from zero, so `quantize(-c) == -quantize(c)`.
pub fn quantize(coeffs: &Block, table: &QuantTable) -> [[i32; 8]; 8] {
    std::array::from_fn(|v| {
        std::array::from_fn(|u| round_half_away(coeffs[v][u] / f64::from(table.0[v][u])) as i32)
    })
}

pub fn dequantize(levels: &[[i32; 8]; 8], table: &QuantTable) -> Block {
    std::array::from_fn(|v| {
        std::array::from_fn(|u| f64::from(levels[v][u]) * f64::from(table.0[v][u]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(c: f64, q: u16) -> i32 {
        let mut b = [[0.0; 8]; 8];
        b[0][0] = c;
        quantize(&b, &QuantTable([[q; 8]; 8]))[0][0]
    }

    #[test]
    fn scalar_cases() {
        assert_eq!(one(0.0, 7), 0);
        assert_eq!(one(50.0, 20), 3);
        assert_eq!(one(-50.0, 20), -3);
        assert_eq!(one(49.9, 20), 2);
    }

    #[test]
    fn odd_symmetric() {
        let mut c = -300.0;
        while c < 300.0 {
            for q in [1, 2, 3, 7, 16, 99, 255] {
                assert_eq!(one(-c, q), -one(c, q));
            }
            c += 0.25;
        }
    }

    #[test]
    fn quality_scaling() {
        assert_eq!(QuantTable::luma(50).0, LUMA_BASE);
        assert!(QuantTable::luma(100).0.iter().flatten().all(|&v| v == 1));
        assert!(QuantTable::chroma(1).0.iter().flatten().all(|&v| v == 255));
        // q = 75: scale 50, (16 * 50 + 50) / 100 = 8.
        assert_eq!(QuantTable::luma(75).0[0][0], 8);
        // q = 10: scale 500, (11 * 500 + 50) / 100 = 55.
        assert_eq!(QuantTable::luma(10).0[0][1], 55);
    }

    #[test]
    fn dequantize_multiplies() {
        let mut levels = [[0; 8]; 8];
        levels[2][5] = -4;
        let t = QuantTable::luma(50);
        assert_eq!(dequantize(&levels, &t)[2][5], -4.0 * 57.0);
    }
}
