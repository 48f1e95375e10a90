//! Command-line flags and the optional `key = value` file behind `--config`.
//!
//! File entries are turned into `--key=value` arguments placed ahead of the
//! real command line, so later flags win.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Parser, ValueEnum};
use ifem_core::study::StudyConfig;

use crate::error::CliError;

/// Largest 3D exponent accepted without `--allow-large`.
pub const MAX_3D_EXP: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Markdown,
}

/// Convergence study of the immersed interface model problems.
#[derive(Debug, Clone, Parser)]
#[command(name = "ifem", version, args_override_self = true)]
pub struct Args {
    /// File of `key = value` lines using the long flag names as keys
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
    pub dim: Option<u8>,
    /// Coarsest grid is 2^MIN_EXP cells per axis
    #[arg(long)]
    pub min_exp: Option<u32>,
    /// Finest grid is 2^MAX_EXP cells per axis
    #[arg(long)]
    pub max_exp: Option<u32>,
    /// Comma-separated weight exponents in [0, 0.5)
    #[arg(long, value_delimiter = ',', action = ArgAction::Set)]
    pub alphas: Option<Vec<f64>>,
    #[arg(long)]
    pub degree: Option<usize>,
    /// Interface layer factor (default sqrt(dim))
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub cg_tol: Option<f64>,
    /// Gauss points per axis for the error integrals
    #[arg(long)]
    pub quad_points: Option<usize>,
    /// Bisection depth for cells cut by the interface
    #[arg(long)]
    pub cut_depth: Option<usize>,
    /// Gauss points per interface arc or patch axis
    #[arg(long)]
    pub surface_order: Option<usize>,
    /// Comma-separated interface center
    #[arg(long, value_delimiter = ',', action = ArgAction::Set)]
    pub center: Option<Vec<f64>>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Output file (standard output if absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Permit 3D grids finer than 2^5 cells per axis
    #[arg(long)]
    pub allow_large: bool,
    /// Do not report finished levels on standard error
    #[arg(long)]
    pub quiet: bool,
}

/// Reads a config file into `--key=value` arguments. Blank lines and `#`
/// comments are skipped; underscores in keys become dashes.
pub fn config_file_args(path: &Path) -> Result<Vec<OsString>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::ConfigFile {
        path: path.to_owned(),
        source,
    })?;
    let mut args = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CliError::ConfigSyntax {
            path: path.to_owned(),
            line: i + 1,
        })?;
        let key = key.trim().replace('_', "-");
        let value = value.split(',').map(str::trim).collect::<Vec<_>>().join(",");
        if key.is_empty() {
            return Err(CliError::ConfigSyntax {
                path: path.to_owned(),
                line: i + 1,
            });
        }
        // boolean switches take no value
        if matches!(key.as_str(), "allow-large" | "quiet") {
            if value == "true" {
                args.push(OsString::from(format!("--{key}")));
            }
            continue;
        }
        args.push(OsString::from(format!("--{key}={value}")));
    }
    Ok(args)
}

impl Args {
    /// Parses `argv` (program name first), merging in `--config` if given.
    pub fn load<I, T>(argv: I) -> Result<Args, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
        let first = Args::try_parse_from(&argv)?;
        let Some(path) = &first.config else {
            return Ok(first);
        };
        let from_file = config_file_args(path).map_err(|e| {
            clap::Error::raw(clap::error::ErrorKind::ValueValidation, format!("{e}\n"))
        })?;
        let mut merged = Vec::with_capacity(argv.len() + from_file.len());
        merged.extend(argv.first().cloned());
        merged.extend(from_file);
        merged.extend(argv.into_iter().skip(1));
        Args::try_parse_from(merged)
    }

    /// Builds and validates the study configuration.
    pub fn study_config(&self) -> Result<StudyConfig, CliError> {
        let dim = self.dim.unwrap_or(2) as usize;
        let mut c = StudyConfig::for_dim(dim)?;
        if let Some(v) = self.min_exp {
            c.min_exp = v;
        }
        if let Some(v) = self.max_exp {
            c.max_exp = v;
        }
        if let Some(v) = &self.alphas {
            c.alphas = v.clone();
        }
        if let Some(v) = self.degree {
            c.degree = v;
        }
        if self.sigma.is_some() {
            c.sigma = self.sigma;
        }
        if let Some(v) = self.cg_tol {
            c.cg_tol = v;
        }
        if self.quad_points.is_some() {
            c.quad_points = self.quad_points;
        }
        if self.cut_depth.is_some() {
            c.cut_depth = self.cut_depth;
        }
        if let Some(v) = self.surface_order {
            c.surface_order = v;
        }
        if let Some(v) = &self.center {
            if v.len() != dim {
                return Err(CliError::Arguments(format!(
                    "--center needs {dim} components, got {}",
                    v.len()
                )));
            }
            c.center = [v[0], v[1], if dim == 3 { v[2] } else { 0.0 }];
        }
        if let Some(v) = self.radius {
            c.radius = v;
        }
        if dim == 3 && c.max_exp > MAX_3D_EXP && !self.allow_large {
            return Err(CliError::Arguments(format!(
                "3D grids above 2^{MAX_3D_EXP} cells per axis need --allow-large"
            )));
        }
        c.validate()?;
        Ok(c)
    }
}
