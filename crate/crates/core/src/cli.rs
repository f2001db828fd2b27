//! The `chirascope` command line.
//!
//! Every command computes its outputs in memory first; files are then
//! written atomically next to a JSON [`RunManifest`] from which
//! `chirascope replay` regenerates them byte for byte.
//!
//! Exit codes: 0 on success, 1 when a property check fails or a command
//! errors at run time, 2 on a usage error.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::{demosaic_op, jpeg_op, JpegConfig};
use crate::netpbm::{read_ppm, write_pgm, HeatmapScale};
use crate::op::{compose, ProcessingOp, SymmetryTransform};
use crate::residual::{
    commutative_residual_with, glide_scan, glide_verdict, predict_chirality, size_sweep,
    PhaseScanGrid,
};
use crate::symlab::{run_suite, SuiteConfig};
use crate::synthgen::{gaussian_image, uniform_image, GaussianSpec};
use crate::transforms::GlideConfig;

pub const SEED_ENV: &str = "CHIRASCOPE_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "chirascope",
    version,
    about = "Commutative-residual analysis of image operators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Where to write the run manifest; defaults to `<first output>.manifest.json`.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Worst-case residual over a grid of image sizes.
    Sweep(SweepArgs),
    /// Residuals of phase-shifted operators over a grid of phases.
    Glide(GlideArgs),
    /// Glide verdict of a phase-scan CSV.
    GlideVerdict(GlideVerdictArgs),
    /// A/C chirality table over sizes and operators.
    Predict(PredictArgs),
    /// Residual image of one input.
    Residual(ResidualArgs),
    /// Randomized checks of the finite symmetry-preservation statements.
    VerifyProps(VerifyPropsArgs),
    /// Re-runs the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpName {
    Identity,
    Demosaic,
    Jpeg,
    DemosaicJpeg,
}

impl OpName {
    pub const STUDIED: [OpName; 3] = [OpName::Demosaic, OpName::Jpeg, OpName::DemosaicJpeg];

    pub fn build(self, quality: u8) -> Result<ProcessingOp> {
        let jpeg = || JpegConfig::new(quality).map(jpeg_op);
        Ok(match self {
            Self::Identity => ProcessingOp::identity(),
            Self::Demosaic => demosaic_op(),
            Self::Jpeg => jpeg()?,
            Self::DemosaicJpeg => compose([demosaic_op(), jpeg()?])?,
        })
    }
}

impl FromStr for OpName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Self as ValueEnum>::from_str(s, false)
    }
}

/// Inclusive integer range `A..B`, or a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SizeRange {
    pub first: usize,
    pub last: usize,
}

impl SizeRange {
    pub fn values(&self) -> Vec<usize> {
        (self.first..=self.last).collect()
    }
}

impl FromStr for SizeRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (first, last) = match s.split_once("..") {
            Some((a, b)) => (parse_num(a)?, parse_num(b)?),
            None => {
                let v = parse_num(s)?;
                (v, v)
            }
        };
        if first == 0 || first > last {
            return Err(format!("size range {s} must satisfy 1 <= A <= B"));
        }
        Ok(Self { first, last })
    }
}

/// Half-open phase range `A..B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PhaseRange {
    pub start: usize,
    pub end: usize,
}

impl PhaseRange {
    pub fn values(&self) -> Vec<usize> {
        (self.start..self.end).collect()
    }
}

impl FromStr for PhaseRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("phase range {s} must look like A..B"))?;
        let (start, end) = (parse_num(a)?, parse_num(b)?);
        if start >= end {
            return Err(format!("phase range {s} is empty"));
        }
        Ok(Self { start, end })
    }
}

/// `WxH`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Dims {
    pub width: usize,
    pub height: usize,
}

impl FromStr for Dims {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (w, h) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("size {s} must look like WxH"))?;
        let (width, height) = (parse_num(w)?, parse_num(h)?);
        if width == 0 || height == 0 {
            return Err(format!("size {s} has a zero dimension"));
        }
        Ok(Self { width, height })
    }
}

/// Comma-separated operator names, or `all` for the three studied operators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct OpList(pub Vec<OpName>);

impl FromStr for OpList {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "all" {
            return Ok(Self(OpName::STUDIED.to_vec()));
        }
        let ops = s
            .split(',')
            .map(str::parse)
            .collect::<std::result::Result<Vec<OpName>, _>>()?;
        Ok(Self(ops))
    }
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match parse_num(s)? {
        0 => Err("must be at least 1".into()),
        v => Ok(v),
    }
}

fn parse_num(s: &str) -> std::result::Result<usize, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a non-negative integer"))
}

macro_rules! string_serde {
    ($($ty:ty),*) => {$(
        impl TryFrom<String> for $ty {
            type Error = String;
            fn try_from(s: String) -> std::result::Result<Self, String> {
                s.parse()
            }
        }
        impl From<$ty> for String {
            fn from(v: $ty) -> String {
                v.to_string()
            }
        }
    )*};
}
string_serde!(SizeRange, PhaseRange, Dims, OpList);

impl fmt::Display for SizeRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.first, self.last)
    }
}

impl fmt::Display for PhaseRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

impl fmt::Display for OpList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self
            .0
            .iter()
            .map(|op| {
                op.to_possible_value()
                    .expect("no skipped variants")
                    .get_name()
                    .to_owned()
            })
            .collect();
        f.write_str(&names.join(","))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

impl From<Scale> for HeatmapScale {
    fn from(s: Scale) -> Self {
        match s {
            Scale::Linear => HeatmapScale::MaxTo255,
            Scale::Log => HeatmapScale::Log,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reflection {
    #[default]
    FlipH,
    FlipV,
}

impl From<Reflection> for SymmetryTransform {
    fn from(r: Reflection) -> Self {
        match r {
            Reflection::FlipH => SymmetryTransform::HorizontalFlip,
            Reflection::FlipV => SymmetryTransform::VerticalFlip,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub op: OpName,
    /// Inclusive width range `A..B`.
    #[arg(long)]
    pub widths: SizeRange,
    /// Inclusive height range `A..B`.
    #[arg(long)]
    pub heights: SizeRange,
    /// Noise images per cell.
    #[arg(long, default_value_t = 4, value_parser = positive)]
    pub samples: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 75, value_parser = clap::value_parser!(u8).range(1..=100))]
    pub quality: u8,
    #[arg(long)]
    pub out_csv: PathBuf,
    #[arg(long)]
    pub out_pgm: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Scale::Linear)]
    pub scale: Scale,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct GlideArgs {
    #[arg(long)]
    pub op: OpName,
    #[arg(long, default_value = "64x64")]
    pub size: Dims,
    /// Half-open phase range applied before `J ∘ T`.
    #[arg(long, default_value = "0..32")]
    pub phi1: PhaseRange,
    /// Half-open phase range applied before `T ∘ J`.
    #[arg(long, default_value = "0..32")]
    pub phi2: PhaseRange,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 75, value_parser = clap::value_parser!(u8).range(1..=100))]
    pub quality: u8,
    /// Canvas padding on each side.
    #[arg(long, default_value_t = 32)]
    pub pad: usize,
    #[arg(long)]
    pub out_csv: PathBuf,
    #[arg(long)]
    pub out_pgm: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Scale::Linear)]
    pub scale: Scale,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct GlideVerdictArgs {
    #[arg(long)]
    pub in_csv: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct PredictArgs {
    #[arg(long, value_delimiter = ',', default_value = "99,100,112")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value = "all")]
    pub ops: OpList,
    #[arg(long, default_value_t = 8, value_parser = positive)]
    pub samples: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 75, value_parser = clap::value_parser!(u8).range(1..=100))]
    pub quality: u8,
    /// Also write the table to this file.
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct ResidualArgs {
    #[arg(long)]
    pub op: OpName,
    /// Binary PPM input.
    #[arg(long, conflicts_with_all = ["gaussian", "uniform"], required_unless_present_any = ["gaussian", "uniform"])]
    pub input: Option<PathBuf>,
    /// Generate the reference Gaussian noise image of this size.
    #[arg(long, conflicts_with = "uniform")]
    pub gaussian: Option<Dims>,
    /// Generate a uniform noise image of this size.
    #[arg(long)]
    pub uniform: Option<Dims>,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 75, value_parser = clap::value_parser!(u8).range(1..=100))]
    pub quality: u8,
    #[arg(long, value_enum, default_value_t = Reflection::FlipH)]
    pub transform: Reflection,
    /// `|E|` as PGM, colour planes stacked vertically.
    #[arg(long)]
    pub out_residual: Option<PathBuf>,
    /// Sign mask as PGM (255 where `E < 0`), same layout.
    #[arg(long)]
    pub out_sign: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct VerifyPropsArgs {
    /// Largest domain size.
    #[arg(long, default_value_t = 12, value_parser = positive)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Negative control: use a generator whose maps do not commute.
    #[arg(long, hide = true)]
    pub inject_faulty_generator: bool,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest_path: PathBuf,
    /// Compare regenerated outputs with the files on disk instead of
    /// overwriting them.
    #[arg(long)]
    pub check: bool,
}

/// Everything needed to regenerate a command's outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub params: Command,
    pub outputs: Vec<PathBuf>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Sweep(_) => "sweep",
            Self::Glide(_) => "glide",
            Self::GlideVerdict(_) => "glide-verdict",
            Self::Predict(_) => "predict",
            Self::Residual(_) => "residual",
            Self::VerifyProps(_) => "verify-props",
            Self::Replay(_) => "replay",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Self::Sweep(a) => Some(a.seed),
            Self::Glide(a) => Some(a.seed),
            Self::Predict(a) => Some(a.seed),
            Self::Residual(a) => Some(a.seed),
            Self::VerifyProps(a) => Some(a.seed),
            Self::GlideVerdict(_) | Self::Replay(_) => None,
        }
    }
}

/// Result of a command before anything touches the file system.
#[derive(Debug, Default)]
pub struct Execution {
    pub stdout: String,
    pub files: Vec<(PathBuf, Vec<u8>)>,
    /// A checked property did not hold.
    pub failed: bool,
}

/// Runs a command and returns its outputs without writing them.
pub fn execute(cmd: &Command) -> Result<Execution> {
    match cmd {
        Command::Sweep(a) => sweep(a),
        Command::Glide(a) => glide(a),
        Command::GlideVerdict(a) => {
            let grid = PhaseScanGrid::from_csv(&std::fs::read(&a.in_csv)?)?;
            Ok(Execution {
                stdout: format!("{}\n", glide_verdict(&grid)?),
                ..Execution::default()
            })
        }
        Command::Predict(a) => predict(a),
        Command::Residual(a) => residual(a),
        Command::VerifyProps(a) => {
            let report = run_suite(&SuiteConfig {
                max_n: a.n,
                trials: a.trials,
                seed: a.seed,
                faulty_generator: a.inject_faulty_generator,
            })?;
            Ok(Execution {
                stdout: report.to_string(),
                files: Vec::new(),
                failed: !report.all_passed(),
            })
        }
        Command::Replay(a) => replay(a),
    }
}

fn sweep(a: &SweepArgs) -> Result<Execution> {
    let op = a.op.build(a.quality)?;
    let grid = size_sweep(
        &op,
        &a.widths.values(),
        &a.heights.values(),
        a.samples,
        a.seed,
    )?;
    let mut files = vec![(a.out_csv.clone(), grid.to_csv()?)];
    if let Some(p) = &a.out_pgm {
        files.push((p.clone(), grid.to_pgm(a.scale.into())?));
    }
    let zero = grid.zero_widths();
    Ok(Execution {
        stdout: format!(
            "op={} cells={} zero_widths={}\n",
            grid.op,
            grid.widths.len() * grid.heights.len(),
            join(&zero)
        ),
        files,
        failed: false,
    })
}

fn glide(a: &GlideArgs) -> Result<Execution> {
    let op = a.op.build(a.quality)?;
    let x = uniform_image(a.size.width, a.size.height, a.seed);
    let cfg = GlideConfig {
        pad: a.pad,
        ..GlideConfig::default()
    };
    let mut grid = glide_scan(&op, &x, &a.phi1.values(), &a.phi2.values(), cfg)?;
    grid.seed = Some(a.seed);
    let mut files = vec![(a.out_csv.clone(), grid.to_csv()?)];
    if let Some(p) = &a.out_pgm {
        files.push((p.clone(), grid.to_pgm(a.scale.into())?));
    }
    let verdict = match glide_verdict(&grid) {
        Ok(v) => v.to_string(),
        Err(_) => "scan too small for a verdict".to_owned(),
    };
    Ok(Execution {
        stdout: format!("zero_cells={}\n{verdict}\n", grid.zero_cells().len()),
        files,
        failed: false,
    })
}

fn predict(a: &PredictArgs) -> Result<Execution> {
    let mut table = String::from("op,size,verdict\n");
    for name in &a.ops.0 {
        let op = name.build(a.quality)?;
        for &s in &a.sizes {
            let v = predict_chirality(&op, s, s, a.samples, a.seed)?;
            table.push_str(&format!("{},{s},{}\n", op.name(), v.letter()));
        }
    }
    let files = a
        .out_csv
        .iter()
        .map(|p| (p.clone(), table.clone().into_bytes()))
        .collect();
    Ok(Execution {
        stdout: table,
        files,
        failed: false,
    })
}

fn residual(a: &ResidualArgs) -> Result<Execution> {
    let x = match (&a.input, a.gaussian, a.uniform) {
        (Some(path), None, None) => read_ppm(&std::fs::read(path)?)?,
        (None, Some(d), None) => {
            gaussian_image(&GaussianSpec::reference(d.width, d.height, a.seed))?
        }
        (None, None, Some(d)) => uniform_image(d.width, d.height, a.seed),
        _ => {
            return Err(Error::InvalidParameter(
                "exactly one of --input, --gaussian, --uniform is required".into(),
            ))
        }
    };
    let op = a.op.build(a.quality)?;
    let report = commutative_residual_with(&op, &x, a.transform.into())?;
    let (w, h) = (report.residual.width(), report.residual.height() * 3);
    let mut files = Vec::new();
    if let Some(p) = &a.out_residual {
        files.push((p.clone(), write_pgm(w, h, &report.residual.abs_planes())?));
    }
    if let Some(p) = &a.out_sign {
        files.push((p.clone(), write_pgm(w, h, &report.residual.sign_planes())?));
    }
    Ok(Execution {
        stdout: format!("{}\n", report.summary_line()),
        files,
        failed: false,
    })
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    Ok(serde_json::from_slice(&std::fs::read(path)?)?)
}

fn replay(a: &ReplayArgs) -> Result<Execution> {
    let manifest = read_manifest(&a.manifest_path)?;
    if matches!(manifest.params, Command::Replay(_)) {
        return Err(Error::InvalidParameter(
            "a manifest cannot record a replay".into(),
        ));
    }
    let mut run = execute(&manifest.params)?;
    if !a.check {
        return Ok(run);
    }
    let mut report = String::new();
    for (path, bytes) in std::mem::take(&mut run.files) {
        let same = std::fs::read(&path).is_ok_and(|old| old == bytes);
        run.failed |= !same;
        let status = if same { "identical" } else { "differs" };
        report.push_str(&format!("{status} {}\n", path.display()));
    }
    run.stdout = report;
    Ok(run)
}

/// Writes via a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn commit(cli: &Cli, cmd: &Command, run: &Execution) -> Result<()> {
    for (path, bytes) in &run.files {
        write_atomic(path, bytes)?;
    }
    let manifest_path = match (&cli.manifest, run.files.first()) {
        (Some(p), _) => p.clone(),
        (None, Some((first, _))) => {
            let mut s = first.clone().into_os_string();
            s.push(".manifest.json");
            PathBuf::from(s)
        }
        (None, None) => return Ok(()),
    };
    let manifest = RunManifest {
        tool: "chirascope".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cmd.name().into(),
        seed: cmd.seed(),
        params: cmd.clone(),
        outputs: run.files.iter().map(|(p, _)| p.clone()).collect(),
    };
    let mut json = serde_json::to_vec_pretty(&manifest)?;
    json.push(b'\n');
    write_atomic(&manifest_path, &json)
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = execute(&cli.command).and_then(|run| {
        let is_replay = matches!(cli.command, Command::Replay(_));
        match &cli.command {
            Command::Replay(a) if !a.check => {
                let manifest = read_manifest(&a.manifest_path)?;
                commit(&cli, &manifest.params, &run)?;
            }
            _ if !is_replay => commit(&cli, &cli.command, &run)?,
            _ => {}
        }
        Ok(run)
    });
    match result {
        Ok(run) => {
            let _ = write!(out, "{}", run.stdout);
            i32::from(run.failed)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}
