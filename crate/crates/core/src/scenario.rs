//! Declarative description of an experiment: which model generates the private data,
//! which base measure and mechanism privatize it, and the (α, c) grid to sweep.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::estimate::MleConfig;
use crate::mechanism::Channel;
use crate::models::{BaseMeasure, CauchyLocation, GaussianLocation, ParametricModel};
use crate::staircase::BoundaryFamily;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    Gaussian { theta0: f64, sigma: f64 },
    Cauchy { theta0: f64, scale: f64 },
}

impl ModelSpec {
    pub fn build(&self) -> Result<Box<dyn ParametricModel>> {
        Ok(match *self {
            ModelSpec::Gaussian { theta0, sigma } => Box::new(GaussianLocation::new(theta0, sigma)?),
            ModelSpec::Cauchy { theta0, scale } => Box::new(CauchyLocation::new(theta0, scale)?),
        })
    }

    pub fn theta0(&self) -> f64 {
        match *self {
            ModelSpec::Gaussian { theta0, .. } | ModelSpec::Cauchy { theta0, .. } => theta0,
        }
    }

    /// Parses `gaussian` or `cauchy`, keeping unit scale.
    pub fn from_name(name: &str, theta0: f64) -> Result<Self> {
        match name {
            "gaussian" | "normal" => Ok(ModelSpec::Gaussian { theta0, sigma: 1.0 }),
            "cauchy" => Ok(ModelSpec::Cauchy { theta0, scale: 1.0 }),
            other => Err(Error::Config(format!("unknown model `{other}` (expected gaussian or cauchy)"))),
        }
    }
}

/// Base measure `ν` of the staircase channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NuSpec {
    Gaussian,
    Cauchy,
    /// Folded standard normals on each side of `split`.
    FoldedPair { split: f64 },
}

impl NuSpec {
    pub fn from_name(name: &str, split: f64) -> Result<Self> {
        match name {
            "gaussian" | "normal" => Ok(NuSpec::Gaussian),
            "cauchy" => Ok(NuSpec::Cauchy),
            "folded-normal" | "folded" => Ok(NuSpec::FoldedPair { split }),
            other => Err(Error::Config(format!(
                "unknown base measure `{other}` (expected gaussian, cauchy or folded-normal)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MechanismKind {
    AsymmetricStaircase,
    BinomialApprox,
    TwoPointSign,
    Identity,
}

impl MechanismKind {
    pub fn name(&self) -> &'static str {
        match self {
            MechanismKind::AsymmetricStaircase => "asymmetric-staircase",
            MechanismKind::BinomialApprox => "binomial-approx",
            MechanismKind::TwoPointSign => "two-point-sign",
            MechanismKind::Identity => "identity",
        }
    }

    /// Whether the mechanism is parametrized by `c`.
    pub fn uses_c(&self) -> bool {
        matches!(self, MechanismKind::AsymmetricStaircase | MechanismKind::BinomialApprox)
    }

    /// Admissible `c` range `(0, hi]` (asymmetric) or `(0, hi)` (binomial).
    pub fn c_upper(&self) -> f64 {
        match self {
            MechanismKind::AsymmetricStaircase => 0.5,
            _ => 1.0,
        }
    }
}

impl fmt::Display for MechanismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MechanismKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asymmetric-staircase" | "asymmetric" | "staircase" => Ok(MechanismKind::AsymmetricStaircase),
            "binomial-approx" | "binomial" => Ok(MechanismKind::BinomialApprox),
            "two-point-sign" | "two-point" => Ok(MechanismKind::TwoPointSign),
            "identity" | "none" => Ok(MechanismKind::Identity),
            other => Err(Error::Config(format!("unknown mechanism `{other}`"))),
        }
    }
}

/// Builds the channel for one grid point. The two-point channel splits at `split`, the
/// same value used for the folded base measures.
pub fn build_channel(mechanism: MechanismKind, nu: NuSpec, alpha: f64, c: f64) -> Result<Channel> {
    match mechanism {
        MechanismKind::AsymmetricStaircase => {
            let base = match nu {
                NuSpec::Gaussian => BaseMeasure::standard_gaussian(),
                NuSpec::Cauchy => BaseMeasure::standard_cauchy(),
                NuSpec::FoldedPair { .. } => {
                    return Err(Error::config(
                        "the asymmetric staircase needs a full-line base measure (gaussian or cauchy)",
                    ))
                }
            };
            Channel::asymmetric_staircase(alpha, BoundaryFamily::full_line(base, c)?)
        }
        MechanismKind::BinomialApprox => {
            let split = match nu {
                NuSpec::FoldedPair { split } => split,
                _ => return Err(Error::config("binomial-approx needs the folded-normal base measure")),
            };
            Channel::binomial_approx(alpha, BoundaryFamily::folded_pair(split, c)?)
        }
        MechanismKind::TwoPointSign => {
            let split = match nu {
                NuSpec::FoldedPair { split } => split,
                _ => 0.0,
            };
            Channel::two_point_sign(alpha, split)
        }
        MechanismKind::Identity => Ok(Channel::identity()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub model: ModelSpec,
    pub nu: NuSpec,
    pub mechanism: MechanismKind,
    pub alphas: Vec<f64>,
    pub cs: Vec<f64>,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub mle: MleConfig,
    /// Worker count for Monte Carlo; `None` uses the available parallelism.
    pub threads: Option<usize>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() {
            return Err(Error::config("alpha grid is empty"));
        }
        if self.mechanism.uses_c() {
            if self.cs.is_empty() {
                return Err(Error::config("c grid is empty"));
            }
            for &c in &self.cs {
                let ok = c > 0.0
                    && match self.mechanism {
                        MechanismKind::AsymmetricStaircase => c <= 0.5,
                        _ => c < 1.0,
                    };
                if !ok {
                    return Err(Error::Config(format!(
                        "c = {c} is outside the admissible range of {}",
                        self.mechanism
                    )));
                }
            }
        }
        if self.n == 0 || self.trials < 2 {
            return Err(Error::config("need n ≥ 1 and trials ≥ 2"));
        }
        self.mle.validate()?;
        for &a in &self.alphas {
            build_channel(self.mechanism, self.nu, a, self.cs.first().copied().unwrap_or(0.5))?;
        }
        Ok(())
    }

    /// Grid points in output order: α-major, then c. Mechanisms without `c` get a single
    /// point per α with `c = NaN`.
    pub fn grid(&self) -> Vec<(f64, f64)> {
        let cs: Vec<f64> = if self.mechanism.uses_c() { self.cs.clone() } else { vec![f64::NAN] };
        self.alphas
            .iter()
            .flat_map(|&a| cs.iter().map(move |&c| (a, c)))
            .collect()
    }
}
