//! A/C verdicts for square Gaussian-noise images: `A` when every sampled
//! residual is exactly zero, `C` otherwise.
//!
//! `cargo run --release --example chirality_table`

use chirascope::compose;
use chirascope::imaging::{demosaic_op, jpeg_op, JpegConfig};
use chirascope::residual::predict_chirality;

fn main() -> chirascope::Result<()> {
    let sizes = [99, 100, 112, 128];
    let ops = [
        demosaic_op(),
        jpeg_op(JpegConfig::default()),
        compose([demosaic_op(), jpeg_op(JpegConfig::default())])?,
    ];
    print!("{:<14}", "");
    for s in sizes {
        print!("{s:>5}");
    }
    println!();
    for op in &ops {
        print!("{:<14}", op.name());
        for s in sizes {
            print!("{:>5}", predict_chirality(op, s, s, 8, 0)?.letter());
        }
        println!();
    }
    Ok(())
}
