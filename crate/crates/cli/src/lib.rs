//! `pecl` command-line tool.

pub mod commands;
mod error;
pub mod manifest;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use error::{CliError, EXIT_INPUT, EXIT_INTERNAL, EXIT_OK, EXIT_VERIFICATION};
pub use manifest::RunManifest;

#[derive(Debug, Parser)]
#[command(name = "pecl", version, about = "FMCW radar activity-recognition pipeline")]
pub struct Cli {
    /// Print errors as JSON on stderr.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decode a `.dat`/`.datb` recording and dump its header and echo.
    Parse {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate an activity template (or a scene file) into a recording.
    Synth {
        /// walk, sit, stand, pick, drink or fall.
        #[arg(long, conflicts_with = "scene", required_unless_present = "scene")]
        kind: Option<String>,
        /// Scene JSON to simulate instead of a template.
        #[arg(long)]
        scene: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output recording; the extension picks the codec.
        #[arg(long)]
        out: PathBuf,
    },
    /// Build spectrogram domain maps from a recording.
    Maps {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "rt,dt,rd")]
        domains: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        /// Also write 8-bit PGM previews.
        #[arg(long)]
        pgm: bool,
        /// Skip moving-target indication.
        #[arg(long)]
        no_mti: bool,
    },
    /// Power-stratified noise injection on a `.smap` map.
    Augment {
        input: PathBuf,
        /// Policy JSON; defaults apply to missing fields.
        #[arg(long)]
        policy: Option<PathBuf>,
        /// Overrides the policy seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train the small network on synthetic activity maps.
    TrainToy {
        /// Training configuration JSON; defaults apply to missing fields.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the configuration seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a checkpoint on a saved dataset.
    Eval {
        #[arg(long)]
        ckpt: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 8)]
        batch_size: usize,
    },
    /// Parameter and multiply-accumulate table of a preset.
    Params {
        #[arg(long, default_value = "b0")]
        preset: String,
        /// hxc or c; both when omitted.
        #[arg(long)]
        lstm_rule: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-difference gradient checks.
    Gradcheck {
        /// `all`, a case name, or a case-name prefix.
        #[arg(long, default_value = "all")]
        module: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs one parsed invocation; `argv` is recorded in the manifest.
pub fn run(cli: &Cli, argv: &[String]) -> Result<RunManifest, CliError> {
    use commands::*;
    match &cli.command {
        Command::Parse { input, out } => parse::run(input, out, argv),
        Command::Synth { kind, scene, seed, out } => synth::run(kind.as_deref(), scene.as_deref(), *seed, out, argv),
        Command::Maps {
            input,
            domains,
            out,
            pgm,
            no_mti,
        } => maps::run(input, domains, out, *pgm, !*no_mti, argv),
        Command::Augment { input, policy, seed, out } => augment::run(input, policy.as_deref(), *seed, out, argv),
        Command::TrainToy { config, seed, out } => train_toy::run(config.as_deref(), *seed, out, argv),
        Command::Eval {
            ckpt,
            data,
            out,
            batch_size,
        } => eval::run(ckpt, data, out, *batch_size, argv),
        Command::Params { preset, lstm_rule, out } => params::run(preset, lstm_rule.as_deref(), out.as_deref(), argv),
        Command::Gradcheck { module, out } => gradcheck::run(module, out.as_deref(), argv),
    }
}
