use clap::{Args, Subcommand, ValueEnum};
use gaussnet::channels::ChannelSpec;

use super::Context;
use crate::error::CliError;

#[derive(Subcommand, Debug)]
pub enum ChannelCommand {
    /// Write the state of a channel family as JSON.
    Build(BuildArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelKind {
    /// Two-mode squeezed vacuum.
    Tmsv,
    /// Twin beam with thermal noise on both modes.
    ThermalTmsv,
    /// N-mode squeezed vacuum.
    Nmsv,
    /// One squeezed mode and two vacua through the 3-splitter.
    Cheap,
}

impl std::str::FromStr for ChannelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <ChannelKind as ValueEnum>::from_str(s, true)
    }
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    kind: Option<ChannelKind>,
    /// Squeezing parameter.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    /// Thermal noise on mode a (thermal-tmsv).
    #[arg(long)]
    n_a: Option<f64>,
    /// Thermal noise on mode b (thermal-tmsv).
    #[arg(long)]
    n_b: Option<f64>,
    /// Number of modes (nmsv) [default: 3].
    #[arg(long)]
    modes: Option<usize>,
}

impl BuildArgs {
    fn spec(&self, ctx: &Context) -> Result<ChannelSpec, CliError> {
        let f = &ctx.file;
        let r = f.require(self.r, "r")?;
        Ok(match f.require(self.kind, "kind")? {
            ChannelKind::Tmsv => ChannelSpec::Tmsv { r },
            ChannelKind::ThermalTmsv => ChannelSpec::ThermalTmsv {
                r,
                n_a: f.require(self.n_a, "n-a")?,
                n_b: f.require(self.n_b, "n-b")?,
            },
            ChannelKind::Nmsv => ChannelSpec::Nmsv {
                n_modes: f.resolve(self.modes, "modes", 3)?,
                r,
            },
            ChannelKind::Cheap => ChannelSpec::CheapThreeMode { r },
        })
    }
}

pub fn run(cmd: ChannelCommand, ctx: &Context) -> Result<(), CliError> {
    match cmd {
        ChannelCommand::Build(args) => {
            let state = args.spec(ctx)?.build()?;
            ctx.emit_json(&state)
        }
    }
}
