//! Command-line front end for `slabcy-core`: input parsing, subcommands,
//! canonical rendering and a result cache.

pub mod cache;
pub mod commands;
pub mod input;
pub mod render;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{run, Format, Method, Outcome, Request, RunConfig};
pub use input::{parse_input, parse_text, InputError, ParsedInput};

/// Slab functions and open Gromov-Witten series of toric Calabi-Yau
/// manifolds, computed by the normalization solver and by the
/// hypergeometric closed form.
#[derive(Debug, Parser)]
#[command(name = "slabcy", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Input file describing the triangulated polytope.
    pub input: PathBuf,
    /// Truncation order K (total degree under the grading).
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(i64).range(1..))]
    pub order: i64,
    /// Grading weights on the curve basis, e.g. `1,3`.
    #[arg(long)]
    pub grading: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Skip reading and writing the result cache.
    #[arg(long)]
    pub no_cache: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rays, coordinates, curve basis, pairing table, grading and walls.
    Info {
        #[command(flatten)]
        common: Common,
    },
    /// Hypergeometric series g_J.
    G {
        #[arg(long)]
        j: usize,
        #[command(flatten)]
        common: Common,
    },
    /// The mirror map q(Q), or Q(q) with --inverse.
    MirrorMap {
        #[arg(long)]
        inverse: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Open Gromov-Witten generating series 1 + delta_I(q).
    Ogw {
        #[arg(long)]
        i: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Slab function f_J from either route or both.
    Slab {
        #[arg(long)]
        j: usize,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[command(flatten)]
        common: Common,
    },
    /// Run every cross-check; exits 1 on any failure.
    Verify {
        /// Half-width of the brute-force class box.
        #[arg(long = "box", default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..=4))]
        bound: i64,
        #[command(flatten)]
        common: Common,
    },
}

impl Cli {
    /// Converts parsed arguments into a run configuration.
    pub fn into_config(self) -> Result<RunConfig, InputError> {
        let (request, common) = match self.command {
            Command::Info { common } => (Request::Info, common),
            Command::G { j, common } => (Request::G { j }, common),
            Command::MirrorMap { inverse, common } => (Request::MirrorMap { inverse }, common),
            Command::Ogw { i, common } => (Request::Ogw { i }, common),
            Command::Slab { j, method, common } => (Request::Slab { j, method }, common),
            Command::Verify { bound, common } => (Request::Verify { bound }, common),
        };
        let grading = common
            .grading
            .as_deref()
            .map(input::parse_grading)
            .transpose()?;
        Ok(RunConfig {
            input: common.input,
            order: common.order,
            grading,
            format: common.format,
            request,
            use_cache: !common.no_cache,
        })
    }
}
