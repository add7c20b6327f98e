//! Command-line flags, optional JSON config file, and their resolution into a
//! [`JobConfig`]. Flags win over the file; a shape or Schur source given by
//! flags replaces the file's source as a whole.

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use snake_core::{GeneratingSequence, MeasureSpec64, SchurSequence64};

use crate::error::CliError;
use crate::formats::{complex, parse_complex_list, parse_int_list, MeasureDoc, Precision};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    /// Factor order of the snake with its s and p sequences.
    Build,
    /// One matrix entry with its path descriptor.
    Entry,
    /// Leading n x n block of the matrix.
    Expand,
    /// Structural and measured bandwidths.
    Bandwidth,
    /// Szegő quadrature rule from the para-unitary truncation.
    Quadrature,
    /// Batch invariant suites.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    Hessenberg,
    Cmv,
    Bits,
    Monomials,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Oracle,
    Unitarity,
    Bandwidth,
    Roundtrip,
    Exactness,
}

/// Snake-shaped factorizations of unitary matrices from Schur parameters.
#[derive(Debug, Clone, Parser)]
#[command(name = "snake", version, about)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Subcommand,

    /// JSON config file with the same keys as the long flags.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Named shape, or the kind of explicit shape input.
    #[arg(long, value_enum)]
    pub shape: Option<ShapeKind>,

    /// Generating sequence s_1..s_m as comma-separated bits.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,

    /// Monomial order r_0..r_m as comma-separated integers.
    #[arg(long, allow_hyphen_values = true)]
    pub monomials: Option<String>,

    /// Schur parameters alpha_0, alpha_1, ... as comma-separated `re+imj`;
    /// missing trailing parameters are zero.
    #[arg(long, allow_hyphen_values = true)]
    pub alphas: Option<String>,

    /// Measure name (`lebesgue`) or JSON descriptor.
    #[arg(long)]
    pub measure: Option<String>,

    /// Truncation or block size (default 8).
    #[arg(long)]
    pub n: Option<usize>,

    /// Truncation phase (default 0).
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,

    #[arg(long)]
    pub i: Option<usize>,

    #[arg(long)]
    pub j: Option<usize>,

    /// Number of Givens factors for named shapes (generating sequence of
    /// length m - 1).
    #[arg(long)]
    pub m: Option<usize>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Append the exactness defect against the moment oracle.
    #[arg(long)]
    pub verify: bool,

    #[arg(long, value_enum)]
    pub suite: Option<Suite>,

    /// Print floats with this many decimal places instead of 16 significant
    /// digits.
    #[arg(long)]
    pub digits: Option<u32>,
}

/// Config file contents; every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub shape: Option<ShapeKind>,
    pub s: Option<Vec<i64>>,
    pub monomials: Option<Vec<i64>>,
    pub alphas: Option<Vec<[f64; 2]>>,
    pub measure: Option<MeasureArg>,
    pub n: Option<usize>,
    pub theta: Option<f64>,
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub m: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub verify: Option<bool>,
    pub suite: Option<Suite>,
    pub digits: Option<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum MeasureArg {
    Name(String),
    Doc(MeasureDoc),
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("invalid config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ShapeSource {
    Named { kind: ShapeKind, m: Option<usize> },
    Bits(Vec<i64>),
    Monomials(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SchurSource {
    Inline(Vec<Complex64>),
    Measure(MeasureDoc),
}

/// Fully resolved job.
#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub command: Subcommand,
    pub shape: ShapeSource,
    /// `None` means the default, Lebesgue measure.
    pub schur: Option<SchurSource>,
    pub n: usize,
    pub theta: f64,
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub m: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub verify: bool,
    pub suite: Suite,
    pub precision: Precision,
}

pub const DEFAULT_N: usize = 8;

impl JobConfig {
    pub fn resolve(cli: &Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let m = cli.m.or(file.m);
        let flag_shape = shape_source(
            cli.shape,
            cli.s
                .as_deref()
                .map(|t| parse_int_list(t, "s"))
                .transpose()?,
            cli.monomials
                .as_deref()
                .map(|t| parse_int_list(t, "monomials"))
                .transpose()?,
            m,
        )?;
        let shape = match flag_shape {
            Some(source) => source,
            None => shape_source(file.shape, file.s.clone(), file.monomials.clone(), m)?.unwrap_or(
                ShapeSource::Named {
                    kind: ShapeKind::Hessenberg,
                    m,
                },
            ),
        };
        let flag_schur = schur_source(
            cli.alphas.as_deref().map(parse_complex_list).transpose()?,
            cli.measure.as_deref().map(MeasureDoc::parse).transpose()?,
        )?;
        let schur = match flag_schur {
            Some(source) => Some(source),
            None => schur_source(
                file.alphas
                    .as_ref()
                    .map(|a| a.iter().map(|p| complex(*p)).collect()),
                file.measure
                    .clone()
                    .map(|m| match m {
                        MeasureArg::Name(name) => MeasureDoc::parse(&name),
                        MeasureArg::Doc(doc) => Ok(doc),
                    })
                    .transpose()?,
            )?,
        };
        let theta = cli.theta.or(file.theta).unwrap_or(0.0);
        if !theta.is_finite() {
            return Err(CliError::Validation(format!(
                "theta must be finite, got {theta}"
            )));
        }
        Ok(JobConfig {
            command: cli.command,
            shape,
            schur,
            n: cli.n.or(file.n).unwrap_or(DEFAULT_N),
            theta,
            i: cli.i.or(file.i),
            j: cli.j.or(file.j),
            m,
            format: cli.format.or(file.format).unwrap_or_default(),
            out: cli.out.clone().or(file.out),
            verify: cli.verify || file.verify.unwrap_or(false),
            suite: cli.suite.clone().or(file.suite).unwrap_or(Suite::All),
            precision: match cli.digits.or(file.digits) {
                Some(d) => Precision::Decimals(d),
                None => Precision::Significant(16),
            },
        })
    }

    /// Generating sequence. Named shapes get `m - 1` bits, where `m` is the
    /// explicit factor count or else just enough for `n` and the indices.
    pub fn generating_sequence(&self) -> Result<GeneratingSequence, CliError> {
        match &self.shape {
            ShapeSource::Named { kind, m } => {
                let needed = [Some(self.n), self.i.map(|i| i + 1), self.j.map(|j| j + 1)]
                    .into_iter()
                    .flatten()
                    .max()
                    .unwrap_or(DEFAULT_N);
                let factors = m.unwrap_or(needed);
                if factors == 0 {
                    return Err(CliError::Validation("--m must be at least 1".into()));
                }
                Ok(match kind {
                    ShapeKind::Cmv => GeneratingSequence::cmv(factors - 1),
                    _ => GeneratingSequence::hessenberg(factors - 1),
                })
            }
            ShapeSource::Bits(bits) => Ok(GeneratingSequence::new(bits)?),
            ShapeSource::Monomials(exps) => Ok(GeneratingSequence::from_monomials(exps)?),
        }
    }

    /// Schur parameters `alpha_0..alpha_{len-1}`; inline lists are validated
    /// and padded with zeros.
    pub fn schur_sequence(&self, len: usize) -> Result<SchurSequence64, CliError> {
        match &self.schur {
            Some(SchurSource::Inline(alphas)) => {
                let seq = SchurSequence64::new(alphas.clone())?;
                Ok(if seq.len() < len {
                    seq.resized(len)
                } else {
                    seq
                })
            }
            Some(SchurSource::Measure(doc)) => Ok(doc.to_measure()?.schur_parameters(len)?),
            None => Ok(SchurSequence64::zeros(len)),
        }
    }

    /// Measure whose moments the quadrature is checked against. Inline
    /// parameters stand for the Bernstein-Szegő measure they generate.
    pub fn measure(&self) -> Result<MeasureSpec64, CliError> {
        match &self.schur {
            Some(SchurSource::Inline(alphas)) => Ok(MeasureSpec64::bernstein_szego(
                SchurSequence64::new(alphas.clone())?,
            )),
            Some(SchurSource::Measure(doc)) => doc.to_measure(),
            None => Ok(MeasureSpec64::Lebesgue),
        }
    }
}

fn shape_source(
    kind: Option<ShapeKind>,
    bits: Option<Vec<i64>>,
    monomials: Option<Vec<i64>>,
    m: Option<usize>,
) -> Result<Option<ShapeSource>, CliError> {
    let conflict = |what: &str| {
        Err(CliError::Validation(format!(
            "conflicting shape sources: {what}"
        )))
    };
    match (kind, bits, monomials) {
        (_, Some(_), Some(_)) => conflict("--s and --monomials"),
        (None | Some(ShapeKind::Bits), Some(b), None) => Ok(Some(ShapeSource::Bits(b))),
        (None | Some(ShapeKind::Monomials), None, Some(r)) => Ok(Some(ShapeSource::Monomials(r))),
        (Some(k @ (ShapeKind::Hessenberg | ShapeKind::Cmv)), None, None) => {
            Ok(Some(ShapeSource::Named { kind: k, m }))
        }
        (Some(ShapeKind::Bits), None, _) => {
            Err(CliError::Validation("--shape bits needs --s".into()))
        }
        (Some(ShapeKind::Monomials), _, None) => Err(CliError::Validation(
            "--shape monomials needs --monomials".into(),
        )),
        (Some(_), Some(_), None) => conflict("named --shape and --s"),
        (Some(_), None, Some(_)) => conflict("named --shape and --monomials"),
        (None, None, None) => Ok(None),
    }
}

fn schur_source(
    alphas: Option<Vec<Complex64>>,
    measure: Option<MeasureDoc>,
) -> Result<Option<SchurSource>, CliError> {
    match (alphas, measure) {
        (Some(_), Some(_)) => Err(CliError::Validation(
            "conflicting Schur sources: --alphas and --measure".into(),
        )),
        (Some(a), None) => Ok(Some(SchurSource::Inline(a))),
        (None, Some(m)) => Ok(Some(SchurSource::Measure(m))),
        (None, None) => Ok(None),
    }
}
