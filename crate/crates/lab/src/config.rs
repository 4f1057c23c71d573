//! Experiment configuration. The same types back the command line and the
//! JSON files read by `replay`, so a saved config reruns bit for bit.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use shifted_subset::bits;
use shifted_subset::exact::{self, Integer, Rational};
use shifted_subset::subset::{SubsetKind, SubsetSpec};

use crate::error::{LabError, LabResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Clone, Parser, Serialize, Deserialize, PartialEq)]
#[command(
    name = "shifted-subset",
    version,
    about = "Fourier sampling of shifted subsets of the boolean cube"
)]
pub struct ExperimentConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    #[serde(default)]
    pub format: Format,
    /// Write records here instead of standard output.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    /// Print this configuration as JSON instead of running it.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub dump_config: bool,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize, PartialEq)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Krawtchouk values K_r^n(x).
    Kraw(KrawArgs),
    /// Exact outcome distribution of a subset.
    Dist(DistArgs),
    /// Fourier samples from a shifted subset state.
    Sample(SampleArgs),
    /// Seeded recovery trials.
    Recover(RecoverArgs),
    /// Quantum extraction or classical collision search against the oracles.
    OracleDemo(OracleArgs),
    /// Pairwise distances and copy-count bounds.
    Bounds(BoundsArgs),
    /// Exact identity checks with a pass/fail table.
    Verify(VerifyArgs),
    /// Rerun a saved configuration.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct KrawArgs {
    #[arg(long)]
    pub n: u32,
    /// Degree; all degrees when omitted.
    #[arg(long)]
    pub r: Option<u32>,
    /// Weight; all weights when omitted.
    #[arg(long)]
    pub x: Option<u32>,
}

/// Flags naming a subset of `{0,1}^n`. Exactly one family flag applies.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize, PartialEq)]
pub struct SpecArgs {
    #[arg(long)]
    pub n: Option<u32>,
    /// Radius for spheres and balls.
    #[arg(long, visible_alias = "true-r")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[arg(long)]
    #[serde(default)]
    pub sphere: bool,
    #[arg(long)]
    #[serde(default)]
    pub ball: bool,
    /// Comma-separated bitstrings of an explicit set.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<String>,
    /// Comma-separated 1-based positions of a parity set.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<String>,
    /// Comma-separated 1-based positions of junta variables.
    #[arg(long, requires = "junta_table")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub junta_vars: Option<String>,
    /// Truth table of the junta as a bitstring, first variable most significant.
    #[arg(long, requires = "junta_vars")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub junta_table: Option<String>,
    /// Prefix bitstring `t` of a generalised parity set.
    #[arg(long, requires = "suffix_table")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen_t: Option<String>,
    /// Truth table of the suffix function of a generalised parity set.
    #[arg(long, requires = "gen_t")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suffix_table: Option<String>,
}

fn usage(msg: impl Into<String>) -> LabError {
    LabError::Usage(msg.into())
}

pub fn parse_list(s: &str) -> LabResult<Vec<u32>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| usage(format!("bad position '{p}'")))
        })
        .collect()
}

pub fn parse_table(s: &str) -> LabResult<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(usage(format!("truth table '{s}' must be a bitstring"))),
        })
        .collect()
}

/// Parses a bitstring of exactly `n` bits.
pub fn parse_bits(s: &str, n: u32) -> LabResult<u64> {
    let (v, len) = bits::parse(s.trim())?;
    if len != n {
        return Err(usage(format!("'{s}' has {len} bits, expected {n}")));
    }
    Ok(v)
}

/// Parses `a/b`, an integer, or a decimal such as `0.25`, exactly.
pub fn parse_rational(s: &str) -> LabResult<Rational> {
    let s = s.trim();
    let bad = || usage(format!("'{s}' is not a rational number"));
    if let Some((a, b)) = s.split_once('/') {
        let a: Integer = a.trim().parse().map_err(|_| bad())?;
        let b: Integer = b.trim().parse().map_err(|_| bad())?;
        if b == Integer::from(0) {
            return Err(bad());
        }
        return Ok(exact::ratio(a, b));
    }
    let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
    if !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: Integer = format!("{whole}{frac}").parse().map_err(|_| bad())?;
    Ok(exact::ratio(
        digits,
        Integer::from(10u32).pow(frac.len() as u32),
    ))
}

impl SpecArgs {
    pub fn dimension(&self) -> LabResult<u32> {
        self.n.ok_or_else(|| usage("--n is required"))
    }

    pub fn has_family(&self) -> bool {
        self.sphere
            || self.ball
            || self.points.is_some()
            || self.parity.is_some()
            || self.junta_vars.is_some()
            || self.gen_t.is_some()
    }

    pub fn radius(&self) -> LabResult<u32> {
        self.r.ok_or_else(|| usage("--r is required"))
    }

    pub fn to_spec(&self) -> LabResult<SubsetSpec> {
        let n = self.dimension()?;
        let chosen = [
            self.sphere,
            self.ball,
            self.points.is_some(),
            self.parity.is_some(),
            self.junta_vars.is_some(),
            self.gen_t.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if chosen != 1 {
            return Err(usage(
                "name exactly one of --sphere, --ball, --points, --parity, --junta-vars, --gen-t",
            ));
        }
        let spec = if self.sphere {
            SubsetSpec::sphere(n, self.radius()?)?
        } else if self.ball {
            SubsetSpec::ball(n, self.radius()?)?
        } else if let Some(points) = &self.points {
            let pts = points
                .split(',')
                .map(|p| parse_bits(p, n))
                .collect::<LabResult<Vec<u64>>>()?;
            SubsetSpec::explicit(n, pts)?
        } else if let Some(positions) = &self.parity {
            SubsetSpec::parity_set(n, parse_list(positions)?)?
        } else if let (Some(vars), Some(table)) = (&self.junta_vars, &self.junta_table) {
            SubsetSpec::new(
                n,
                SubsetKind::Junta {
                    vars: parse_list(vars)?,
                    table: parse_table(table)?,
                },
            )?
        } else {
            let t = self.gen_t.as_deref().unwrap_or_default();
            let k = t.trim().len() as u32;
            let suffix = self.suffix_table.as_deref().unwrap_or_default();
            SubsetSpec::new(
                n,
                SubsetKind::GeneralisedParity {
                    k,
                    t: parse_bits(t, k)?,
                    suffix_table: parse_table(suffix)?,
                },
            )?
        };
        Ok(spec)
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct DistArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    /// Law over bitstrings instead of Hamming weights (spheres and balls
    /// default to weights, other families to bitstrings).
    #[arg(long)]
    #[serde(default)]
    pub cube: bool,
    /// Law over Hamming weights.
    #[arg(long, conflicts_with = "cube")]
    #[serde(default)]
    pub weights: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct SampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    /// Shift as a bitstring.
    #[arg(long, conflicts_with = "random_shift")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<String>,
    #[arg(long)]
    #[serde(default)]
    pub random_shift: bool,
    #[arg(long, default_value_t = 10)]
    pub count: u64,
    /// Emit a weight histogram instead of individual outcomes.
    #[arg(long)]
    #[serde(default)]
    pub histogram: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    Sphere,
    Ball,
    ParityBit,
    Junta,
    ParitySet,
    GenParity,
    Size,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct RecoverArgs {
    #[arg(long, value_enum)]
    pub problem: Problem,
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 10)]
    pub trials: u64,
    /// Scales every default sample count, e.g. `1/2` or `3`.
    #[arg(long, default_value = "1")]
    pub budget_multiplier: String,
    /// Odd number of majority-vote repetitions per trial.
    #[arg(long, default_value_t = 1)]
    pub repetitions: u32,
    /// Accuracy target for `size`.
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    /// Hidden member (0, 1 or 2) of the junta family AND(1,2), XOR(3,4), OR(5,6).
    #[arg(long, default_value_t = 0)]
    pub true_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    Quantum,
    Classical,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct OracleArgs {
    /// Subset hidden by the oracles; the parity set on all `n` bits when
    /// no family flag is given.
    #[command(flatten)]
    #[serde(flatten)]
    pub spec: SpecArgs,
    #[arg(long, value_enum, default_value_t = OracleMode::Classical)]
    pub mode: OracleMode,
    #[arg(long, default_value_t = 20)]
    pub runs: u64,
    /// Query cap per classical run.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_queries: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct BoundsArgs {
    /// Pairwise distances between sphere laws for radii `0..=n/2`.
    #[arg(long, requires = "n")]
    #[serde(default)]
    pub survey_spheres: bool,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Copy-count bound for a family of `--family` states.
    #[arg(long, requires = "family")]
    #[serde(default)]
    pub copies: bool,
    /// Number of states in the family.
    #[arg(long = "family", visible_alias = "N")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<u64>,
    /// Minimum pairwise trace distance.
    #[arg(long, visible_alias = "T", conflicts_with = "fidelity")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    /// Maximum pairwise fidelity.
    #[arg(long, visible_alias = "F")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<String>,
    /// Failure probability (with `--fidelity`).
    #[arg(long, default_value = "1/3")]
    pub eps: String,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct VerifyArgs {
    /// Largest dimension for the identity checks.
    #[arg(long, default_value_t = 24)]
    pub max_n: u32,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct ReplayArgs {
    /// JSON configuration written by `--dump-config`.
    pub config: PathBuf,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/3").unwrap(), exact::ratio(1, 3));
        assert_eq!(parse_rational("0.25").unwrap(), exact::ratio(1, 4));
        assert_eq!(parse_rational("2").unwrap(), exact::int(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn spec_flags() {
        let args = SpecArgs {
            n: Some(4),
            r: Some(1),
            sphere: true,
            ..SpecArgs::default()
        };
        assert_eq!(args.to_spec().unwrap(), SubsetSpec::sphere(4, 1).unwrap());
        let both = SpecArgs {
            ball: true,
            ..args.clone()
        };
        assert!(matches!(both.to_spec(), Err(LabError::Usage(_))));
        let pts = SpecArgs {
            n: Some(3),
            points: Some("001,110".into()),
            ..SpecArgs::default()
        };
        assert_eq!(
            pts.to_spec().unwrap(),
            SubsetSpec::explicit(3, vec![1, 6]).unwrap()
        );
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = ExperimentConfig::try_parse_from([
            "shifted-subset",
            "dist",
            "--sphere",
            "--n",
            "4",
            "--r",
            "1",
            "--format",
            "csv",
        ])
        .unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);
    }
}
