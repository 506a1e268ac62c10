use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pgal_core::Tolerances;

use crate::grid_spec::GridSpec;

#[derive(Debug, Parser)]
#[command(
    name = "pgal",
    version,
    about = "Curvature, Laplacian and audit reports for homothetical surfaces in G³₁"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fundamental forms and curvatures on a grid.
    Curvature(SurfaceArgs),
    /// Second-form Laplacian of the coordinate functions on a grid.
    Laplacian(LaplacianArgs),
    /// Run catalogued non-existence audits.
    Audit(AuditArgs),
    /// Compare K, H and W before and after a rigid motion.
    Invariance(InvarianceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
    /// Write the report here instead of stdout.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    /// Seed for the audit sweep jitter and the random invariance motion.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    /// Minimum |LN - M²| for the Laplacian to be defined.
    #[arg(long)]
    pub tol_nondeg: Option<f64>,
    /// Maximum |D| for a pair to count as degenerate.
    #[arg(long)]
    pub tol_deg: Option<f64>,
    /// Minimum relative residual for a reduced equation to fail.
    #[arg(long)]
    pub tol_resid_floor: Option<f64>,
    /// Minimum W for an admissible point.
    #[arg(long)]
    pub tol_admissible: Option<f64>,
}

impl TolArgs {
    pub fn resolve(&self) -> Tolerances {
        let mut t = Tolerances::default();
        if let Some(v) = self.tol_nondeg {
            t.nondeg = v;
        }
        if let Some(v) = self.tol_deg {
            t.deg = v;
        }
        if let Some(v) = self.tol_resid_floor {
            t.resid_floor = v;
        }
        if let Some(v) = self.tol_admissible {
            t.admissible = v;
        }
        t
    }
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Surface type: I, II or III.
    #[arg(long = "type", default_value = "I")]
    pub stype: String,
    /// First factor, e.g. `pow(2)` or `exp(c=1,d=0.5)`.
    #[arg(long)]
    pub phi1: String,
    /// Second factor.
    #[arg(long)]
    pub phi2: String,
    /// Parameter grid, `v1=lo:hi:n,v2=lo:hi:n`.
    #[arg(long, default_value = "v1=0.5:1.5:10,v2=0.5:1.5:10")]
    pub grid: GridSpec,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct LaplacianArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Fit Δᴵᴵ xᵢ = λᵢ xᵢ by least squares and report the residuals.
    #[arg(long)]
    pub fit_lambda: bool,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Case id such as `I.2`, `II.4`, `III.7`, or `all`.
    #[arg(value_name = "CASE", conflicts_with = "case")]
    pub case_pos: Option<String>,
    /// Same as the positional case id.
    #[arg(long)]
    pub case: Option<String>,
    /// key=value file overriding family parameters.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Grid for the candidate checks; the default is `v1=0.5:1.5:10,v2=0.5:1.5:10`.
    #[arg(long)]
    pub grid: Option<GridSpec>,
    #[command(flatten)]
    pub common: Common,
}

impl AuditArgs {
    pub fn case(&self) -> &str {
        self.case_pos
            .as_deref()
            .or(self.case.as_deref())
            .unwrap_or("all")
    }
}

#[derive(Debug, Args)]
pub struct InvarianceArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Motion `a,b,c,d,e,theta`; drawn from the seed when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub motion: Option<String>,
}
