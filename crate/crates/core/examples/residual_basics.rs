//! Commutative residuals of the demosaic and JPEG operators on noise images.
//!
//! Run with `cargo run --example residual_basics`. Pass a directory to also
//! write the input and the `|E|` image of the composed pipeline.

use chirascope::imaging::{demosaic_op, jpeg_op, JpegConfig};
use chirascope::netpbm::{write_pgm, write_ppm};
use chirascope::residual::commutative_residual;
use chirascope::synthgen::{gaussian_image, uniform_image, GaussianSpec};
use chirascope::{compose, ProcessingOp};

fn main() -> chirascope::Result<()> {
    let ops: Vec<ProcessingOp> = vec![
        demosaic_op(),
        jpeg_op(JpegConfig::default()),
        compose([demosaic_op(), jpeg_op(JpegConfig::default())])?,
    ];
    println!("{:<14} {:>9}  summary", "op", "size");
    for op in &ops {
        for (w, h) in [(99, 99), (100, 100), (112, 112)] {
            let x = uniform_image(w, h, 1);
            let r = commutative_residual(op, &x)?;
            println!(
                "{:<14} {:>9}  {}",
                op.name(),
                format!("{w}x{h}"),
                r.summary_line()
            );
        }
    }

    if let Some(dir) = std::env::args().nth(1) {
        let x = gaussian_image(&GaussianSpec::reference(100, 100, 7))?;
        let r = commutative_residual(&ops[2], &x)?;
        let dir = std::path::Path::new(&dir);
        std::fs::write(dir.join("input.ppm"), write_ppm(&x))?;
        std::fs::write(
            dir.join("residual.pgm"),
            write_pgm(100, 300, &r.residual.abs_planes())?,
        )?;
        println!("wrote input.ppm and residual.pgm to {}", dir.display());
    }
    Ok(())
}
