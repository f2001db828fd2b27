//! Full-range BT.601 Y'CbCr conversion, rounded to 8 bits in each direction.

use crate::to_u8;

pub fn rgb_to_ycbcr([r, g, b]: [u8; 3]) -> [u8; 3] {
    let (r, g, b) = (f64::from(r), f64::from(g), f64::from(b));
    let y = 0.299 * r + 0.587 * g + 0.114 * b;
    let cb = 128.0 - 0.168_736 * r - 0.331_264 * g + 0.5 * b;
    let cr = 128.0 + 0.5 * r - 0.418_688 * g - 0.081_312 * b;
    [to_u8(y), to_u8(cb), to_u8(cr)]
}

pub fn ycbcr_to_rgb([y, cb, cr]: [u8; 3]) -> [u8; 3] {
    let y = f64::from(y);
    let cb = f64::from(cb) - 128.0;
    let cr = f64::from(cr) - 128.0;
    let r = y + 1.402 * cr;
    let g = y - 0.344_136 * cb - 0.714_136 * cr;
    let b = y + 1.772 * cb;
    [to_u8(r), to_u8(g), to_u8(b)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_within_one_everywhere() {
        // Exhaustive over all 2^24 colours.
        let mut worst = 0;
        for r in 0..=255u8 {
            for g in 0..=255u8 {
                for b in 0..=255u8 {
                    let back = ycbcr_to_rgb(rgb_to_ycbcr([r, g, b]));
                    for (x, y) in [r, g, b].iter().zip(back) {
                        worst = worst.max(x.abs_diff(y));
                    }
                }
            }
        }
        assert!(worst <= 1, "worst deviation {worst}");
    }

    #[test]
    fn grays_are_exact() {
        for v in 0..=255u8 {
            assert_eq!(rgb_to_ycbcr([v; 3]), [v, 128, 128]);
            assert_eq!(ycbcr_to_rgb([v, 128, 128]), [v; 3]);
        }
    }
}
