use std::path::PathBuf;

use cbc_core::nvd::{DEFAULT_PAD, DEFAULT_SAMPLES, DEFAULT_TOL};
use cbc_core::schemes::{SchemeConfig, DEFAULT_CLIP_SLOPE, DEFAULT_EPSILON};
use cbc_core::solver::{Integrator, Splitting};
use cbc_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "cbc",
    version,
    about = "Boundedness diagnostics for finite-volume reconstruction schemes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate a normalised variable diagram
    #[command(allow_negative_numbers = true)]
    Nvd(NvdArgs),
    /// Largest admissible CFL number read off the diagram
    #[command(allow_negative_numbers = true)]
    Cmax(CmaxArgs),
    /// Square-wave advection on a periodic 1D grid
    #[command(allow_negative_numbers = true)]
    Advect1d(Advect1dArgs),
    /// Slotted-disk rotation on the unit square
    #[command(allow_negative_numbers = true)]
    Zalesak(ZalesakArgs),
    /// Single-step brute-force check of isolated discontinuities
    #[command(allow_negative_numbers = true)]
    Oracle(OracleArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeName {
    Upwind,
    Thinc,
    ThincClipped,
    WenoJs,
    WenoZ,
    Teno,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegratorName {
    Euler,
    SspRk3,
}

impl From<IntegratorName> for Integrator {
    fn from(v: IntegratorName) -> Self {
        match v {
            IntegratorName::Euler => Integrator::EulerForward,
            IntegratorName::SspRk3 => Integrator::SspRk3,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplittingName {
    Alternating,
    Unsplit,
}

impl From<SplittingName> for Splitting {
    fn from(v: SplittingName) -> Self {
        match v {
            SplittingName::Alternating => Splitting::Alternating,
            SplittingName::Unsplit => Splitting::Unsplit,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SchemeArgs {
    #[arg(long, value_enum)]
    pub scheme: SchemeName,
    /// THINC steepness
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    /// Slope of the clipping line
    #[arg(long, default_value_t = DEFAULT_CLIP_SLOPE)]
    pub slope: f64,
    /// TENO cutoff, required for `--scheme teno`
    #[arg(long)]
    pub ct: Option<f64>,
    /// Division guard in the nonlinear weights
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub eps: f64,
    /// TENO constant C
    #[arg(long = "c-teno", default_value_t = 1.0)]
    pub c_teno: f64,
    /// TENO exponent q
    #[arg(long, default_value_t = 6)]
    pub q: u32,
    /// Exponent on the WENO-Z ratio
    #[arg(long, default_value_t = 1)]
    pub z_power: u32,
    /// Ideal weights d0,d1,d2
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.6,0.3")]
    pub d: Vec<f64>,
}

impl SchemeArgs {
    pub fn config(&self) -> cbc_core::Result<SchemeConfig> {
        let base = match self.scheme {
            SchemeName::Upwind => SchemeConfig::upwind(),
            SchemeName::Thinc => SchemeConfig::thinc(self.beta)?,
            SchemeName::ThincClipped => SchemeConfig::thinc_clipped(self.beta, self.slope)?,
            SchemeName::WenoJs => SchemeConfig::weno_js(),
            SchemeName::WenoZ => SchemeConfig::weno_z(),
            SchemeName::Teno => {
                let ct = self
                    .ct
                    .ok_or_else(|| Error::Config("--ct is required for --scheme teno".into()))?;
                SchemeConfig::teno(ct)?
            }
        };
        let d: [f64; 3] = self.d.as_slice().try_into().map_err(|_| {
            Error::Config(format!("--d takes exactly 3 values, got {}", self.d.len()))
        })?;
        base.with_epsilon(self.eps)?
            .with_teno_params(self.c_teno, self.q)?
            .with_ideal_weights(d)?
            .with_z_power(self.z_power)
    }
}

#[derive(Args, Debug)]
pub struct NvdArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Number of samples
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub n: usize,
    /// CSV destination; a plot script and run manifest are written next to it
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CmaxArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub n: usize,
    /// Also list the violated intervals at these CFL numbers
    #[arg(long, value_delimiter = ',')]
    pub at: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Advect1dArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// CFL number; a comma-separated list runs a parallel sweep (needs --out)
    #[arg(long, value_delimiter = ',', required = true)]
    pub cfl: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    pub n_cells: usize,
    #[arg(long, default_value_t = 0.1)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1.0)]
    pub velocity: f64,
    #[arg(long, value_enum, default_value_t = IntegratorName::Euler)]
    pub integrator: IntegratorName,
    /// Boundedness tolerance
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ZalesakArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long)]
    pub cfl: f64,
    /// Cells per side
    #[arg(long, default_value_t = 100)]
    pub nx: usize,
    #[arg(long, default_value_t = 1.0)]
    pub revolutions: f64,
    #[arg(long, value_enum, default_value_t = SplittingName::Alternating)]
    pub splitting: SplittingName,
    #[arg(long, value_enum, default_value_t = IntegratorName::Euler)]
    pub integrator: IntegratorName,
    /// Replace the slotted disk by this constant value
    #[arg(long)]
    pub constant: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"
    )]
    pub cfl: Vec<f64>,
    /// Cell values k/(samples+1), k = 1..=samples
    #[arg(long, default_value_t = 99)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_PAD)]
    pub pad: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
