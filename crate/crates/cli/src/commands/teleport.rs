use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use gaussnet::channels::{thermal_tmsv, tmsv};
use gaussnet::oracle::{kernel_fidelity, wigner_of, PhaseGrid};
use gaussnet::teleport::{fidelity, optimal_delta};
use gaussnet::GaussianState;
use rayon::prelude::*;

use super::{comment, Context, InputArgs};
use crate::error::CliError;
use crate::output::Table;

#[derive(Subcommand, Debug)]
pub enum TeleportCommand {
    /// Closed-form fidelity of one channel.
    Fidelity(FidelityArgs),
    /// Closed-form and grid-oracle fidelity over a range of squeezing values.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct FidelityArgs {
    /// Two-mode channel state JSON file.
    #[arg(long)]
    channel: Option<PathBuf>,
    #[command(flatten)]
    input: InputArgs,
    /// Real part of Bob's extra displacement [default: optimal].
    #[arg(long, allow_hyphen_values = true, requires = "delta_im")]
    delta_re: Option<f64>,
    /// Imaginary part of Bob's extra displacement [default: optimal].
    #[arg(long, allow_hyphen_values = true, requires = "delta_re")]
    delta_im: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Tmsv,
    ThermalTmsv,
}

impl std::str::FromStr for SweepKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <SweepKind as ValueEnum>::from_str(s, true)
    }
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    r_min: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    /// Number of squeezing values, end points included.
    #[arg(long)]
    steps: Option<usize>,
    /// Channel family [default: tmsv].
    #[arg(long, value_enum)]
    kind: Option<SweepKind>,
    #[arg(long)]
    n_a: Option<f64>,
    #[arg(long)]
    n_b: Option<f64>,
    /// Oracle grid points per axis [default: 128].
    #[arg(long)]
    resolution: Option<usize>,
    #[command(flatten)]
    input: InputArgs,
}

/// Grid-quadrature fidelity at the optimal displacement.
pub fn oracle_fidelity(
    channel: &GaussianState,
    v_in: &nalgebra::Matrix2<f64>,
    delta: [f64; 2],
    resolution: usize,
) -> Result<f64, CliError> {
    let grid = PhaseGrid::covering(&[channel], resolution);
    let w = wigner_of(channel, &grid)?;
    Ok(kernel_fidelity(&w, v_in, delta)?)
}

fn sweep(args: SweepArgs, ctx: &Context) -> Result<(), CliError> {
    let f = &ctx.file;
    let r_min = f.resolve(args.r_min, "r-min", 0.0)?;
    let r_max = f.resolve(args.r_max, "r-max", 2.0)?;
    let steps = f.resolve(args.steps, "steps", 11)?;
    let resolution = f.resolve(args.resolution, "resolution", 128)?;
    let kind = f.resolve(args.kind, "kind", SweepKind::Tmsv)?;
    if steps == 0 || !(r_max >= r_min) {
        return Err(CliError::Usage("sweep range is empty".into()));
    }
    let (n_a, n_b) = match kind {
        SweepKind::Tmsv => (0.5, 0.5),
        SweepKind::ThermalTmsv => (f.require(args.n_a, "n-a")?, f.require(args.n_b, "n-b")?),
    };
    let input = args.input.spec(f)?;
    let v_in = input.cm()?;
    let rs: Vec<f64> = (0..steps)
        .map(|k| {
            if steps == 1 {
                r_min
            } else {
                r_min + (r_max - r_min) * k as f64 / (steps - 1) as f64
            }
        })
        .collect();
    let rows = rs
        .par_iter()
        .map(|&r| {
            let channel = match kind {
                SweepKind::Tmsv => tmsv(r)?,
                SweepKind::ThermalTmsv => thermal_tmsv(r, n_a, n_b)?,
            };
            let closed = fidelity(&v_in, &channel, None)?.fidelity;
            let delta = optimal_delta(channel.displacement())?;
            Ok(vec![r, closed, oracle_fidelity(&channel, &v_in, delta, resolution)?])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let kind_name = match kind {
        SweepKind::Tmsv => "tmsv".to_string(),
        SweepKind::ThermalTmsv => format!("thermal-tmsv n_a={n_a} n_b={n_b}"),
    };
    ctx.emit_table(&Table {
        comment: comment(
            "teleport sweep",
            &format!(
                "kind={kind_name} r_min={r_min} r_max={r_max} steps={steps} resolution={resolution} {}",
                InputArgs::describe(&input)
            ),
        ),
        columns: vec!["r", "F_closed_form", "F_oracle"],
        rows,
    })
}

pub fn run(cmd: TeleportCommand, ctx: &Context) -> Result<(), CliError> {
    match cmd {
        TeleportCommand::Fidelity(args) => {
            let path: PathBuf = ctx.file.require(args.channel, "channel")?;
            let channel = ctx.read_state(&path)?;
            let input = args.input.spec(&ctx.file)?;
            let delta = match (args.delta_re, args.delta_im) {
                (Some(re), Some(im)) => Some([re, im]),
                _ => None,
            };
            ctx.emit_json(&fidelity(&input.cm()?, &channel, delta)?)
        }
        TeleportCommand::Sweep(args) => sweep(args, ctx),
    }
}
