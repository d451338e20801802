use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use gaussnet::channels::InputSpec;
use gaussnet::{GaussianState, Tolerances};

use crate::config::ConfigFile;
use crate::error::CliError;
use crate::output::{self, Table};

pub mod channel;
pub mod entangle;
pub mod network;
pub mod oracle;
pub mod teleport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

/// Resolved run configuration shared by all subcommands.
#[derive(Debug)]
pub struct Context {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub tolerances: Tolerances,
    pub file: ConfigFile,
}

impl Context {
    pub fn read_state(&self, path: &Path) -> Result<GaussianState, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(GaussianState::from_json_with(&text, &self.tolerances)?)
    }

    /// Writes a structured report, which has no CSV form.
    pub fn emit_json<T: serde::Serialize>(&self, value: &T) -> Result<(), CliError> {
        if self.format == Some(Format::Csv) {
            return Err(CliError::Usage("this command writes JSON only".into()));
        }
        output::emit(self.out.as_ref(), &output::to_json(value))
    }

    /// Writes a table, as CSV unless JSON was requested.
    pub fn emit_table(&self, table: &Table) -> Result<(), CliError> {
        let text = match self.format {
            Some(Format::Json) => table.to_json(),
            _ => table.to_csv(),
        };
        output::emit(self.out.as_ref(), &text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputKind {
    Coherent,
    Squeezed,
}

impl FromStr for InputKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <InputKind as ValueEnum>::from_str(s, true)
    }
}

/// Pure input state flags.
#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Input state to teleport [default: coherent].
    #[arg(long, value_enum)]
    pub input: Option<InputKind>,
    /// Squeezing parameter of a squeezed input (ξ = e^{2r}).
    #[arg(long)]
    pub xi: Option<f64>,
    /// Squeezing phase of a squeezed input.
    #[arg(long)]
    pub phi: Option<f64>,
    /// Real part of the input amplitude.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_re: Option<f64>,
    /// Imaginary part of the input amplitude.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_im: Option<f64>,
}

impl InputArgs {
    pub fn spec(&self, file: &ConfigFile) -> Result<InputSpec, CliError> {
        let alpha = [
            file.resolve(self.alpha_re, "alpha-re", 0.0)?,
            file.resolve(self.alpha_im, "alpha-im", 0.0)?,
        ];
        Ok(match file.resolve(self.input, "input", InputKind::Coherent)? {
            InputKind::Coherent => InputSpec::Coherent { alpha },
            InputKind::Squeezed => InputSpec::Squeezed {
                alpha,
                xi: file.require(self.xi, "xi")?,
                phi: file.resolve(self.phi, "phi", 0.0)?,
            },
        })
    }

    pub fn describe(spec: &InputSpec) -> String {
        match spec {
            InputSpec::Coherent { alpha } => format!("input=coherent alpha={},{}", alpha[0], alpha[1]),
            InputSpec::Squeezed { alpha, xi, phi } => {
                format!("input=squeezed xi={xi} phi={phi} alpha={},{}", alpha[0], alpha[1])
            }
        }
    }
}

/// `# gaussnet <version> <command> <parameters>`.
pub fn comment(command: &str, params: &str) -> String {
    format!("gaussnet {} {command} {params}", env!("CARGO_PKG_VERSION"))
}
