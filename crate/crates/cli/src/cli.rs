use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "parc", version, about = "Reach-avoid sets for piecewise-affine planning models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the reach-avoid set of a scenario and write it as JSON.
    Compute(ComputeArgs),
    /// Sample plans from a computed set and verify each one.
    Sample(SampleArgs),
    /// Verify the plans of a plan file.
    Verify(VerifyArgs),
    /// Fit a time-variant affine planning model to trajectory data.
    Fit(FitArgs),
    /// Estimate tracking-error envelopes from trajectory pairs.
    Error(ErrorArgs),
    /// Write 2-D projections of computed sets and plans as CSV.
    Plotdata(PlotArgs),
}

/// Options that select the PWA system and the numerical settings.
#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// Scenario JSON file.
    #[arg(long)]
    pub scenario: PathBuf,
    /// dubins, integrator3d, near-hover, polynomial[:t_pk] or affine-fit:<file>.
    #[arg(long, default_value = "dubins")]
    pub model: String,
    #[arg(long, default_value_t = 0.5)]
    pub dt: f64,
    /// Overrides the scenario final time.
    #[arg(long)]
    pub tf: Option<f64>,
    /// Linearization points per augmented coordinate, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<usize>>,
    /// Tracking-error profile JSON file.
    #[arg(long)]
    pub error_profile: Option<PathBuf>,
    /// Worker threads (0 uses every core).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Primal feasibility tolerance of the LP solver.
    #[arg(long)]
    pub tol_lp: Option<f64>,
    /// Half-width of the box that clips unbounded sets.
    #[arg(long)]
    pub clip: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Expert parameters, comma separated; skips the expert search.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub expert_k: Option<Vec<f64>>,
    /// Parameter samples tried by the expert search.
    #[arg(long, default_value_t = parc_core::DEFAULT_EXPERT_BUDGET)]
    pub expert_budget: usize,
    /// Seed of the expert search.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Compute avoid sets for every obstacle and timestep.
    #[arg(long)]
    pub skip_filter: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Result JSON written by `compute`.
    #[arg(long)]
    pub result: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rejection-sampling attempt budget.
    #[arg(long, default_value_t = parc_core::DEFAULT_REJECTION_BUDGET)]
    pub budget: usize,
    /// Interpolation substeps per timestep used by verification.
    #[arg(long, default_value_t = parc_core::DEFAULT_SUBSTEPS)]
    pub substeps: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Plan file written by `sample`.
    #[arg(long)]
    pub plans: PathBuf,
    #[arg(long, default_value_t = parc_core::DEFAULT_SUBSTEPS)]
    pub substeps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Scenario JSON file supplying the layout and the domain.
    #[arg(long)]
    pub scenario: PathBuf,
    /// JSON list of trajectories (`k`, `t`, `states`) or trajectory pairs.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub dt: f64,
    #[arg(long)]
    pub tf: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ErrorArgs {
    /// Scenario JSON file supplying the layout and the default valid region.
    #[arg(long)]
    pub scenario: PathBuf,
    /// JSON list of trajectory pairs.
    #[arg(long)]
    pub pairs: PathBuf,
    /// Polytope JSON over the augmented state; defaults to the scenario domain.
    #[arg(long)]
    pub valid_region: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    pub dt: f64,
    #[arg(long)]
    pub tf: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Result JSON written by `compute`.
    #[arg(long)]
    pub result: PathBuf,
    /// The two augmented coordinates to project onto.
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    pub dims: Vec<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Plan file whose rollouts are written as trajectories.
    #[arg(long, requires = "scenario")]
    pub plans: Option<PathBuf>,
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long, default_value = "dubins")]
    pub model: String,
    #[arg(long, default_value_t = 0.5)]
    pub dt: f64,
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<usize>>,
    #[arg(long, default_value_t = parc_core::DEFAULT_SUBSTEPS)]
    pub substeps: usize,
}
