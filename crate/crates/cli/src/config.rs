use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Verification suites, entanglement detection and parameter sweeps for
/// conical 2-design GEAMs.
#[derive(Parser, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[command(name = "geamlab", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Output format; sweeps default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads (overrides GEAMLAB_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Print the parsed configuration as JSON and exit.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub print_config: bool,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Run the identity suite over d x f x preset x random states.
    Verify(VerifyArgs),
    /// Evaluate an entanglement criterion on one state.
    Detect(DetectArgs),
    /// Evaluate a criterion along a reference family.
    Sweep(SweepArgs),
    /// Validate a GEAM and report the largest positive S.
    GeamCheck(GeamCheckArgs),
    /// Run a configuration saved with --print-config.
    Replay {
        config: PathBuf,
    },
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// Dimensions, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub d: Vec<usize>,

    /// Monotone functions, comma separated: sld, wy, wyd:a, gwyd:a,b.
    #[arg(long = "f", default_value = "sld")]
    pub f: String,

    /// Presets, comma separated: mub, mum:b, sic, gsic:b, nm:N,M[,b].
    #[arg(long, default_value = "mub")]
    pub preset: String,

    /// Random states per (d, f, preset) cell.
    #[arg(long, default_value_t = 5)]
    pub states: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,

    /// Haar samples for the unitary-average check.
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectArgs {
    /// isotropic, werner or werner-qubit.
    #[arg(long, conflicts_with = "state")]
    pub family: Option<String>,

    /// Local dimension; inferred from --state when absent.
    #[arg(long)]
    pub d: Option<usize>,

    /// Isotropic parameter.
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,

    /// Werner parameter.
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,

    /// Two-qubit Werner parameter.
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,

    /// State file: JSON rows of [re, im] pairs.
    #[arg(long)]
    pub state: Option<PathBuf>,

    /// F, G, F-scaled or G-scaled.
    #[arg(long, default_value = "F")]
    pub criterion: String,

    #[arg(long = "f", default_value = "sld")]
    pub f: String,

    #[arg(long, default_value = "mub")]
    pub preset: String,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub family: String,

    #[arg(long)]
    pub d: usize,

    /// Start of the range; defaults to the family's lower bound.
    #[arg(long, allow_negative_numbers = true)]
    pub from: Option<f64>,

    /// End of the range; defaults to the family's upper bound.
    #[arg(long, allow_negative_numbers = true)]
    pub to: Option<f64>,

    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,

    /// Defaults to F for isotropic and G for the Werner families.
    #[arg(long)]
    pub criterion: Option<String>,

    #[arg(long = "f", default_value = "sld")]
    pub f: String,

    #[arg(long, default_value = "mub")]
    pub preset: String,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeamCheckArgs {
    #[arg(long, conflicts_with = "spec")]
    pub preset: Option<String>,

    #[arg(long)]
    pub d: Option<usize>,

    /// Spec file: {d, N, M, gamma, S, signs, preset?}.
    #[arg(long)]
    pub spec: Option<PathBuf>,

    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
}

/// Splits a comma (or semicolon) separated list of names whose arguments
/// may themselves contain commas: numeric fragments attach to the item
/// before them, so `sld,gwyd:0.2,0.5` is two items.
pub fn split_list(s: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for part in s.split([',', ';']).map(str::trim).filter(|p| !p.is_empty()) {
        let numeric = part.starts_with(|c: char| c.is_ascii_digit() || c == '.' || c == '-' || c == '+');
        match out.last_mut() {
            Some(last) if numeric && last.contains(':') => {
                last.push(',');
                last.push_str(part);
            }
            _ => out.push(part.to_string()),
        }
    }
    out
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}
