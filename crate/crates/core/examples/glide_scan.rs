//! Phase-shift scans: evaluates `J T` and `T J` as if the image had been
//! translated by `phi1` and `phi2` pixels and looks for exact-zero
//! patterns.
//!
//! `cargo run --release --example glide_scan`

use chirascope::imaging::{demosaic_op, jpeg_op, JpegConfig};
use chirascope::residual::{glide_scan, glide_verdict};
use chirascope::synthgen::uniform_image;
use chirascope::transforms::GlideConfig;
use chirascope::{compose, ProcessingOp};

fn main() -> chirascope::Result<()> {
    let x = uniform_image(64, 64, 3);
    let phases: Vec<usize> = (0..32).collect();
    for op in [
        ProcessingOp::identity(),
        demosaic_op(),
        jpeg_op(JpegConfig::default()),
        compose([demosaic_op(), jpeg_op(JpegConfig::default())])?,
    ] {
        let grid = glide_scan(&op, &x, &phases, &phases, GlideConfig::default())?;
        let zeros = grid.zero_cells();
        println!(
            "{:<14} {:<28} zero cells {:>4}, first few {:?}",
            op.name(),
            glide_verdict(&grid)?.to_string(),
            zeros.len(),
            &zeros[..zeros.len().min(4)]
        );
    }
    Ok(())
}
