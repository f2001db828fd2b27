//! Commutative residuals `E_J(x) = J(T(x)) - T(J(x))`, size sweeps, glide
//! scans and chirality verdicts.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{Image, ResidualImage};
use crate::netpbm::{write_pgm_heatmap, HeatmapScale};
use crate::op::{ProcessingOp, SymmetryTransform};
use crate::synthgen::{derive_seed, gaussian_image, uniform_image, GaussianSpec};
use crate::transforms::{phase_shifted_jt, phase_shifted_tj, GlideConfig, PhaseShift};

/// A residual image and its summaries.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub residual: ResidualImage,
    /// Mean of `|E|` over every sample of every channel.
    pub mean_abs: f64,
    pub max_abs: u16,
    pub nonzero_count: usize,
}

impl ResidualReport {
    pub fn from_residual(residual: ResidualImage) -> Self {
        let mut total: u64 = 0;
        let mut max_abs = 0;
        let mut nonzero_count = 0;
        for &v in residual.samples() {
            let a = v.unsigned_abs();
            total += u64::from(a);
            max_abs = max_abs.max(a);
            nonzero_count += usize::from(a != 0);
        }
        let mean_abs = total as f64 / residual.samples().len() as f64;
        Self {
            residual,
            mean_abs,
            max_abs,
            nonzero_count,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero_count == 0
    }

    /// `mean_abs=... max_abs=... nonzero=...`
    pub fn summary_line(&self) -> String {
        format!(
            "mean_abs={} max_abs={} nonzero={}",
            self.mean_abs, self.max_abs, self.nonzero_count
        )
    }
}

/// Residual of `op` against horizontal reflection.
pub fn commutative_residual(op: &ProcessingOp, x: &Image) -> Result<ResidualReport> {
    commutative_residual_with(op, x, SymmetryTransform::HorizontalFlip)
}

/// Residual of `op` against an arbitrary reflection `t`.
pub fn commutative_residual_with(
    op: &ProcessingOp,
    x: &Image,
    t: SymmetryTransform,
) -> Result<ResidualReport> {
    op.require_same_dims(x.width(), x.height())?;
    let jt = op.apply(&t.apply(x)?)?;
    let tj = t.apply(&op.apply(x)?)?;
    Ok(ResidualReport::from_residual(ResidualImage::difference(
        &jt, &tj,
    )?))
}

/// Seed of the `sample`-th noise image at a given size. Independent of the
/// operator so every operator sees the same inputs.
fn image_seed(seed: u64, width: usize, height: usize, sample: usize) -> u64 {
    derive_seed(seed, &[width as u64, height as u64, sample as u64])
}

/// Worst-case `mean_abs` per image size, over seeded uniform noise.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub op: String,
    pub quality: Option<u8>,
    pub widths: Vec<usize>,
    pub heights: Vec<usize>,
    pub n_samples: usize,
    pub seed: u64,
    /// `cells[wi][hi]`
    pub cells: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct SweepRow {
    width: usize,
    height: usize,
    op: String,
    quality: Option<u8>,
    n_samples: usize,
    seed: u64,
    max_mean_abs_residual: f64,
}

impl SweepGrid {
    pub fn cell(&self, width: usize, height: usize) -> Option<f64> {
        let wi = self.widths.iter().position(|&w| w == width)?;
        let hi = self.heights.iter().position(|&h| h == height)?;
        Some(self.cells[wi][hi])
    }

    /// Widths at which every sampled height gave an exactly zero residual.
    pub fn zero_widths(&self) -> Vec<usize> {
        self.widths
            .iter()
            .zip(&self.cells)
            .filter(|(_, col)| col.iter().all(|&v| v == 0.0))
            .map(|(&w, _)| w)
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        for (wi, &width) in self.widths.iter().enumerate() {
            for (hi, &height) in self.heights.iter().enumerate() {
                wtr.serialize(SweepRow {
                    width,
                    height,
                    op: self.op.clone(),
                    quality: self.quality,
                    n_samples: self.n_samples,
                    seed: self.seed,
                    max_mean_abs_residual: self.cells[wi][hi],
                })?;
            }
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(buf)
    }

    /// Heatmap with width along x and height along y.
    pub fn to_pgm(&self, scale: HeatmapScale) -> Result<Vec<u8>> {
        let rows: Vec<Vec<f64>> = (0..self.heights.len())
            .map(|hi| self.cells.iter().map(|col| col[hi]).collect())
            .collect();
        write_pgm_heatmap(&rows, scale)
    }
}

/// Evaluates `op` on `n_samples` noise images per `(width, height)` and
/// keeps the largest `mean_abs`, so a single non-commuting sample marks the
/// cell.
pub fn size_sweep(
    op: &ProcessingOp,
    widths: &[usize],
    heights: &[usize],
    n_samples: usize,
    seed: u64,
) -> Result<SweepGrid> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter(
            "n_samples must be at least 1".into(),
        ));
    }
    if widths.is_empty() || heights.is_empty() {
        return Err(Error::InvalidParameter("empty size range".into()));
    }
    let jobs: Vec<(usize, usize)> = widths
        .iter()
        .flat_map(|&w| heights.iter().map(move |&h| (w, h)))
        .collect();
    let values = jobs
        .par_iter()
        .map(|&(w, h)| {
            (0..n_samples).try_fold(0.0f64, |acc, k| {
                let x = uniform_image(w, h, image_seed(seed, w, h, k));
                Ok::<_, Error>(acc.max(commutative_residual(op, &x)?.mean_abs))
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let cells = values.chunks(heights.len()).map(<[f64]>::to_vec).collect();
    Ok(SweepGrid {
        op: op.name(),
        quality: op.quality(),
        widths: widths.to_vec(),
        heights: heights.to_vec(),
        n_samples,
        seed,
        cells,
    })
}

/// Minimum scan extent (per axis) accepted by [`glide_verdict`].
pub const MIN_VERDICT_RANGE: usize = 32;

/// `mean_abs` of `J T_phi1 (x) - T J_phi2 (x)` over a grid of phases.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseScanGrid {
    pub op: String,
    pub phi1: Vec<usize>,
    pub phi2: Vec<usize>,
    /// Seed of the scanned image, when it was generated.
    pub seed: Option<u64>,
    /// `cells[i1][i2]`
    pub cells: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct GlideRow {
    phi1: usize,
    phi2: usize,
    op: String,
    mean_abs_residual: f64,
}

impl PhaseScanGrid {
    pub fn cell(&self, phi1: usize, phi2: usize) -> Option<f64> {
        let i = self.phi1.iter().position(|&p| p == phi1)?;
        let j = self.phi2.iter().position(|&p| p == phi2)?;
        Some(self.cells[i][j])
    }

    pub fn zero_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &p1) in self.phi1.iter().enumerate() {
            for (j, &p2) in self.phi2.iter().enumerate() {
                if self.cells[i][j] == 0.0 {
                    out.push((p1, p2));
                }
            }
        }
        out
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        for (i, &phi1) in self.phi1.iter().enumerate() {
            for (j, &phi2) in self.phi2.iter().enumerate() {
                wtr.serialize(GlideRow {
                    phi1,
                    phi2,
                    op: self.op.clone(),
                    mean_abs_residual: self.cells[i][j],
                })?;
            }
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(buf)
    }

    /// Parses the glide CSV schema `phi1,phi2,op,mean_abs_residual`. Rows
    /// must cover a full `phi1 x phi2` grid for a single operator.
    pub fn from_csv(bytes: &[u8]) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(bytes);
        let headers = rdr.headers()?.clone();
        for col in ["phi1", "phi2", "op", "mean_abs_residual"] {
            if !headers.iter().any(|h| h == col) {
                return Err(Error::CsvSchema(format!("missing column {col}")));
            }
        }
        let rows = rdr
            .deserialize::<GlideRow>()
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let Some(first) = rows.first() else {
            return Err(Error::CsvSchema("no rows".into()));
        };
        let op = first.op.clone();
        if rows.iter().any(|r| r.op != op) {
            return Err(Error::CsvSchema("rows mix several operators".into()));
        }
        let mut phi1: Vec<usize> = rows.iter().map(|r| r.phi1).collect();
        let mut phi2: Vec<usize> = rows.iter().map(|r| r.phi2).collect();
        phi1.sort_unstable();
        phi1.dedup();
        phi2.sort_unstable();
        phi2.dedup();
        let mut cells = vec![vec![None; phi2.len()]; phi1.len()];
        for r in &rows {
            let i = phi1.binary_search(&r.phi1).expect("collected");
            let j = phi2.binary_search(&r.phi2).expect("collected");
            if cells[i][j].replace(r.mean_abs_residual).is_some() {
                return Err(Error::CsvSchema(format!(
                    "duplicate cell ({}, {})",
                    r.phi1, r.phi2
                )));
            }
        }
        let cells = cells
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(j, v)| {
                        v.ok_or_else(|| {
                            Error::CsvSchema(format!("missing cell ({}, {})", phi1[i], phi2[j]))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            op,
            phi1,
            phi2,
            seed: None,
            cells,
        })
    }

    /// Heatmap with `phi2` along x and `phi1` along y.
    pub fn to_pgm(&self, scale: HeatmapScale) -> Result<Vec<u8>> {
        write_pgm_heatmap(&self.cells, scale)
    }
}

/// Scans `E_J(x, phi1, phi2)` over every pair of horizontal phases.
pub fn glide_scan(
    op: &ProcessingOp,
    x: &Image,
    phi1: &[usize],
    phi2: &[usize],
    cfg: GlideConfig,
) -> Result<PhaseScanGrid> {
    if phi1.is_empty() || phi2.is_empty() {
        return Err(Error::InvalidParameter("empty phase range".into()));
    }
    let jt: Vec<Image> = phi1
        .par_iter()
        .map(|&p| phase_shifted_jt(op, x, PhaseShift(p), cfg))
        .collect::<Result<_>>()?;
    let tj: Vec<Image> = phi2
        .par_iter()
        .map(|&p| phase_shifted_tj(op, x, PhaseShift(p), cfg))
        .collect::<Result<_>>()?;
    let cells = jt
        .par_iter()
        .map(|a| {
            tj.iter()
                .map(|b| {
                    Ok(ResidualReport::from_residual(ResidualImage::difference(a, b)?).mean_abs)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseScanGrid {
        op: op.name(),
        phi1: phi1.to_vec(),
        phi2: phi2.to_vec(),
        seed: None,
        cells,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlideVerdict {
    /// Every cell with `phi2 ≡ phi1 + offset (mod period)` is exactly zero.
    GlideCommutative {
        period: usize,
        offset: usize,
    },
    NotGlideCommutative,
}

impl fmt::Display for GlideVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::GlideCommutative { period, .. } => write!(f, "glide-commutative period={period}"),
            Self::NotGlideCommutative => f.write_str("not-glide-commutative"),
        }
    }
}

/// Looks for the smallest period `p` (dividing both scan extents, at most
/// half of each) and offset `d` such that every cell with
/// `phi2 ≡ phi1 + d (mod p)` is exactly zero, with at least one such cell in
/// every `phi1` row.
pub fn glide_verdict(grid: &PhaseScanGrid) -> Result<GlideVerdict> {
    let (n1, n2) = (grid.phi1.len(), grid.phi2.len());
    if n1 < MIN_VERDICT_RANGE || n2 < MIN_VERDICT_RANGE {
        return Err(Error::InvalidParameter(format!(
            "glide verdict needs at least {MIN_VERDICT_RANGE} phases per axis, got {n1}x{n2}"
        )));
    }
    // Two full periods must fit on each axis.
    for p in (1..=n1.min(n2) / 2).filter(|p| n1 % p == 0 && n2 % p == 0) {
        for d in 0..p {
            let on_pattern = |p1: usize, p2: usize| (p2 + p - (p1 + d) % p).is_multiple_of(p);
            let mut ok = true;
            for (i, &p1) in grid.phi1.iter().enumerate() {
                let mut hits = 0;
                for (j, &p2) in grid.phi2.iter().enumerate() {
                    if on_pattern(p1, p2) {
                        if grid.cells[i][j] != 0.0 {
                            ok = false;
                            break;
                        }
                        hits += 1;
                    }
                }
                if !ok || hits == 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(GlideVerdict::GlideCommutative {
                    period: p,
                    offset: d,
                });
            }
        }
    }
    Ok(GlideVerdict::NotGlideCommutative)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chirality {
    /// Every sampled residual was zero. Consistent with symmetry being
    /// preserved; not a proof of it.
    AchiralConsistent,
    /// Some sampled residual was nonzero.
    Chiral,
}

impl Chirality {
    /// `A` or `C`.
    pub fn letter(self) -> char {
        match self {
            Self::AchiralConsistent => 'A',
            Self::Chiral => 'C',
        }
    }
}

/// Samples `n_samples` reference Gaussian images of the given size and
/// reports [`Chirality::Chiral`] as soon as one has a nonzero residual.
pub fn predict_chirality(
    op: &ProcessingOp,
    width: usize,
    height: usize,
    n_samples: usize,
    seed: u64,
) -> Result<Chirality> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter(
            "n_samples must be at least 1".into(),
        ));
    }
    for k in 0..n_samples {
        let spec = GaussianSpec::reference(width, height, image_seed(seed, width, height, k));
        if !commutative_residual(op, &gaussian_image(&spec)?)?.is_zero() {
            return Ok(Chirality::Chiral);
        }
    }
    Ok(Chirality::AchiralConsistent)
}
