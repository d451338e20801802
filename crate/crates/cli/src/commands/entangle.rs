use std::path::PathBuf;

use clap::{Args, Subcommand};
use gaussnet::entanglement::entanglement_report;

use super::Context;
use crate::error::CliError;

#[derive(Subcommand, Debug)]
pub enum EntangleCommand {
    /// PPT eigenvalue, log-negativity, Duan witness and EPR variance of a two-mode state.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Two-mode state JSON file.
    #[arg(long, alias = "channel")]
    state: Option<PathBuf>,
}

pub fn run(cmd: EntangleCommand, ctx: &Context) -> Result<(), CliError> {
    match cmd {
        EntangleCommand::Report(args) => {
            let path: PathBuf = ctx.file.require(args.state, "state")?;
            let state = ctx.read_state(&path)?;
            ctx.emit_json(&entanglement_report(state.cm())?)
        }
    }
}
