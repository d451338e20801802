use std::path::PathBuf;

use clap::{Args, Subcommand};
use gaussnet::oracle::{montecarlo_protocol_with_delta, MonteCarloEstimate};
use gaussnet::teleport::{fidelity, optimal_delta};
use serde::Serialize;

use super::teleport::oracle_fidelity;
use super::{comment, Context, Format, InputArgs};
use crate::error::CliError;
use crate::output::Table;

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Compare the closed-form fidelity with grid quadrature and Monte Carlo.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Two-mode channel state JSON file.
    #[arg(long)]
    channel: Option<PathBuf>,
    /// Grid points per axis [default: 128].
    #[arg(long)]
    resolution: Option<usize>,
    /// Monte Carlo samples [default: 10000].
    #[arg(long)]
    samples: Option<usize>,
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, allow_hyphen_values = true, requires = "delta_im")]
    delta_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "delta_re")]
    delta_im: Option<f64>,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    closed_form: f64,
    oracle: f64,
    gap: f64,
    resolution: usize,
    delta: [f64; 2],
    montecarlo: MonteCarloEstimate,
    seed: u64,
}

pub fn run(cmd: OracleCommand, ctx: &Context) -> Result<(), CliError> {
    let OracleCommand::Verify(args) = cmd;
    let f = &ctx.file;
    let path: PathBuf = f.require(args.channel, "channel")?;
    let channel = ctx.read_state(&path)?;
    let resolution = f.resolve(args.resolution, "resolution", 128)?;
    let samples = f.resolve(args.samples, "samples", 10_000)?;
    let input = args.input.spec(f)?;
    let v_in = input.cm()?;
    let delta = match (args.delta_re, args.delta_im) {
        (Some(re), Some(im)) => [re, im],
        _ => optimal_delta(channel.displacement())?,
    };
    let closed_form = fidelity(&v_in, &channel, Some(delta))?.fidelity;
    let oracle = oracle_fidelity(&channel, &v_in, delta, resolution)?;
    let montecarlo = montecarlo_protocol_with_delta(&channel, &input, delta, samples, ctx.seed)?;
    let report = VerifyReport {
        closed_form,
        oracle,
        gap: (oracle - closed_form).abs(),
        resolution,
        delta,
        montecarlo,
        seed: ctx.seed,
    };
    if ctx.format == Some(Format::Csv) {
        return ctx.emit_table(&Table {
            comment: comment(
                "oracle verify",
                &format!(
                    "channel={} resolution={resolution} samples={samples} seed={} {}",
                    path.display(),
                    ctx.seed,
                    InputArgs::describe(&input)
                ),
            ),
            columns: vec!["closed_form", "oracle", "gap", "mc_estimate", "mc_std_error"],
            rows: vec![vec![
                report.closed_form,
                report.oracle,
                report.gap,
                montecarlo.f_estimate,
                montecarlo.std_error,
            ]],
        });
    }
    ctx.emit_json(&report)
}
