//! The numerical building blocks: an 8x8 DCT, the reflection sign rule,
//! quantization and a JPEG round trip through PPM.
//!
//! `cargo run --example jpeg_pipeline`

use chirascope::imaging::{dct8_forward, jpeg_compress, quantize, Block, JpegConfig, QuantTable};
use chirascope::netpbm::{read_ppm, write_ppm};
use chirascope::synthgen::gaussian_image;
use chirascope::synthgen::GaussianSpec;
use chirascope::transforms::flip_h;

fn main() -> chirascope::Result<()> {
    let ramp: Block = std::array::from_fn(|r| std::array::from_fn(|c| (8 * r + c) as f64 - 32.0));
    let mirrored: Block = std::array::from_fn(|r| std::array::from_fn(|c| ramp[r][7 - c]));
    let (a, b) = (dct8_forward(&ramp), dct8_forward(&mirrored));
    println!(
        "first row of DCT(ramp):          {:?}",
        a[0].map(|v| (v * 100.0).round() / 100.0)
    );
    println!(
        "first row of DCT(mirrored ramp): {:?}",
        b[0].map(|v| (v * 100.0).round() / 100.0)
    );
    println!(
        "quantized at q=75: {:?}",
        quantize(&a, &QuantTable::luma(75))[0]
    );

    let cfg = JpegConfig::new(75)?;
    for w in [64, 72] {
        let x = gaussian_image(&GaussianSpec::reference(w, 40, 5))?;
        let y = read_ppm(&write_ppm(&jpeg_compress(&x, cfg)))?;
        let commutes = jpeg_compress(&flip_h(&x), cfg) == flip_h(&y);
        println!("width {w}: JPEG commutes with a horizontal flip: {commutes}");
    }
    Ok(())
}
