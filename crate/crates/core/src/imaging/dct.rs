//! Orthonormal 8x8 DCT-II and its inverse.
//!
//! Blocks are indexed `[row][col]`; after the forward transform `[v][u]`
//! holds vertical frequency `v` and horizontal frequency `u`. The 1-D passes
//! fold the input into mirror pairs (`x[n] ± x[7-n]`) before weighting, so a
//! mirrored input produces exactly `(-1)^k` times the same floating-point
//! coefficients, not merely approximately. The inverse splits into even and
//! odd frequency sums with the same effect.

use std::sync::OnceLock;

pub type Block = [[f64; 8]; 8];

/// `BASIS[k][n] = a(k) cos((2n + 1) k pi / 16)` with `a(0) = sqrt(1/8)` and
/// `a(k) = 1/2` otherwise; only `n < 4` is read.
fn basis() -> &'static [[f64; 8]; 8] {
    static BASIS: OnceLock<[[f64; 8]; 8]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut b = [[0.0; 8]; 8];
        for (k, row) in b.iter_mut().enumerate() {
            let scale = if k == 0 { (1.0f64 / 8.0).sqrt() } else { 0.5 };
            for (n, v) in row.iter_mut().enumerate() {
                let angle = ((2 * n + 1) * k) as f64 * std::f64::consts::PI / 16.0;
                *v = scale * angle.cos();
            }
        }
        b
    })
}

fn forward_1d(x: &[f64; 8]) -> [f64; 8] {
    let b = basis();
    let mut sum = [0.0; 4];
    let mut diff = [0.0; 4];
    for n in 0..4 {
        sum[n] = x[n] + x[7 - n];
        diff[n] = x[n] - x[7 - n];
    }
    let mut out = [0.0; 8];
    for (k, o) in out.iter_mut().enumerate() {
        let folded = if k % 2 == 0 { &sum } else { &diff };
        let mut acc = 0.0;
        for n in 0..4 {
            acc += b[k][n] * folded[n];
        }
        *o = acc;
    }
    out
}

fn inverse_1d(c: &[f64; 8]) -> [f64; 8] {
    let b = basis();
    let mut out = [0.0; 8];
    for n in 0..4 {
        let mut even = 0.0;
        let mut odd = 0.0;
        for k in (0..8).step_by(2) {
            even += b[k][n] * c[k];
        }
        for k in (1..8).step_by(2) {
            odd += b[k][n] * c[k];
        }
        out[n] = even + odd;
        out[7 - n] = even - odd;
    }
    out
}

fn transpose(b: &Block) -> Block {
    let mut t = [[0.0; 8]; 8];
    for (r, row) in b.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            t[c][r] = v;
        }
    }
    t
}

/// Separable 2-D pass: rows first, then columns.
fn separable(block: &Block, pass: fn(&[f64; 8]) -> [f64; 8]) -> Block {
    let rows: Block = std::array::from_fn(|r| pass(&block[r]));
    let cols = transpose(&rows);
    let done: Block = std::array::from_fn(|c| pass(&cols[c]));
    transpose(&done)
}

pub fn dct8_forward(block: &Block) -> Block {
    separable(block, forward_1d)
}

pub fn dct8_inverse(coeffs: &Block) -> Block {
    separable(coeffs, inverse_1d)
}
