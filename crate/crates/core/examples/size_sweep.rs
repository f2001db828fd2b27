//! Worst-case residual as a function of image width.
//!
//! `cargo run --release --example size_sweep`

use chirascope::compose;
use chirascope::imaging::{demosaic_op, jpeg_op, JpegConfig};
use chirascope::residual::size_sweep;

fn main() -> chirascope::Result<()> {
    let widths: Vec<usize> = (90..=130).collect();
    let heights = [64, 65];
    for op in [
        demosaic_op(),
        jpeg_op(JpegConfig::new(90)?),
        compose([demosaic_op(), jpeg_op(JpegConfig::default())])?,
    ] {
        let grid = size_sweep(&op, &widths, &heights, 4, 42)?;
        println!(
            "{:<14} commutes at widths {:?}",
            op.name(),
            grid.zero_widths()
        );
    }

    let grid = size_sweep(&demosaic_op(), &[99, 100], &[8], 2, 42)?;
    print!("\n{}", String::from_utf8_lossy(&grid.to_csv()?));
    Ok(())
}
