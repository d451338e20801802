use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use gaussnet::channels::{cheap_three_mode, nmsv};
use gaussnet::network::{optimize_measurement, ThreeModeBlocks};
use rayon::prelude::*;

use super::{comment, Context, InputArgs};
use crate::config::Range;
use crate::error::CliError;
use crate::output::Table;

#[derive(Subcommand, Debug)]
pub enum NetworkCommand {
    /// Best Gaussian measurement at Charlie's mode for one three-mode state.
    Optimize(OptimizeArgs),
    /// Non-assisted and assisted fidelity over a squeezing range.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    /// Three-mode state JSON file.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Modes playing Alice, Bob and Charlie [default: 0,1,2].
    #[arg(long, value_parser = parse_roles)]
    roles: Option<[usize; 3]>,
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NetworkKind {
    /// One squeezed mode and two vacua through the 3-splitter.
    Cheap,
    /// Three-mode squeezed vacuum.
    Nmsv,
}

impl std::str::FromStr for NetworkKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <NetworkKind as ValueEnum>::from_str(s, true)
    }
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    kind: Option<NetworkKind>,
    /// Squeezing values `start:stop:step`, stop included.
    #[arg(long)]
    r: Option<Range>,
    #[command(flatten)]
    input: InputArgs,
}

fn sweep(args: SweepArgs, ctx: &Context) -> Result<(), CliError> {
    let f = &ctx.file;
    let kind = f.resolve(args.kind, "kind", NetworkKind::Cheap)?;
    let range = f.require(args.r, "r")?;
    let input = args.input.spec(f)?;
    let v_in = input.cm()?;
    let rows = range
        .points()
        .par_iter()
        .map(|&r| {
            let state = match kind {
                NetworkKind::Cheap => cheap_three_mode(r)?,
                NetworkKind::Nmsv => nmsv(3, r)?,
            };
            let net = ThreeModeBlocks::from_state(&state)?;
            let res = optimize_measurement(&net, &v_in)?;
            Ok(vec![r, res.f_traced, res.f_star, res.xi_star, res.phi_star])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let kind_name = match kind {
        NetworkKind::Cheap => "cheap",
        NetworkKind::Nmsv => "nmsv",
    };
    ctx.emit_table(&Table {
        comment: comment(
            "network sweep",
            &format!("kind={kind_name} r={range} {}", InputArgs::describe(&input)),
        ),
        columns: vec!["r", "F_tr", "F_assisted", "xi_star", "phi_star"],
        rows,
    })
}

pub fn run(cmd: NetworkCommand, ctx: &Context) -> Result<(), CliError> {
    match cmd {
        NetworkCommand::Optimize(args) => {
            let path: PathBuf = ctx.file.require(args.state, "state")?;
            let state = ctx.read_state(&path)?;
            let roles = args.roles.unwrap_or([0, 1, 2]);
            let net = ThreeModeBlocks::with_roles(&state, roles)?;
            let v_in = args.input.spec(&ctx.file)?.cm()?;
            ctx.emit_json(&optimize_measurement(&net, &v_in)?)
        }
        NetworkCommand::Sweep(args) => sweep(args, ctx),
    }
}

fn parse_roles(text: &str) -> Result<[usize; 3], String> {
    let modes = text
        .split(',')
        .map(|m| m.trim().parse::<usize>().map_err(|e| format!("{m:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    match modes[..] {
        [a, b, c] if a != b && a != c && b != c => Ok([a, b, c]),
        [_, _, _] => Err("roles must name three distinct modes".into()),
        _ => Err(format!("expected three comma-separated modes, got {}", modes.len())),
    }
}
