//! Privatization channels `x ↦ x₀` and the induced law of the public data.
//!
//! The staircase channels output a real `x₀` drawn from
//! `ν(x₀)·(1 + (e^α − 1)·1{x₀ ∈ I(x)}) / Z`, where `I(x)` is the privatization interval of
//! `ν`-mass `c` and `Z = 1 + c(e^α − 1)` (or `2 + c(e^α − 1)` for the half-line pair, whose
//! base measure `ν⁺ + ν⁻` has mass two). Sampling draws the exact two-component mixture.

use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::models::{BaseMeasure, ParametricModel, Side};
use crate::quadrature::{integrate_scalar, QuadratureSpec};
use crate::staircase::{BoundaryFamily, Layout};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelKind {
    AsymmetricStaircase(BoundaryFamily),
    BinomialApprox(BoundaryFamily),
    /// Randomized response on `sign(x − split)`; public values are `±1`.
    TwoPointSign { split: f64 },
    /// No privatization. Used as the non-private benchmark.
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    alpha: f64,
    kind: ChannelKind,
    normalizer_factor: f64,
}

/// Worst density ratio found by [`Channel::ldp_ratio_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdpReport {
    pub max_ratio: f64,
    pub bound: f64,
    /// `(x, x′, x₀)` attaining `max_ratio`.
    pub witness: (f64, f64, f64),
}

impl LdpReport {
    pub fn holds(&self) -> bool {
        self.max_ratio <= self.bound * (1.0 + 1e-12)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha >= 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::config(format!("α must be finite and ≥ 0, got {alpha}")))
    }
}

/// Uniform draw on the open interval (0, 1).
pub(crate) fn open_unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

impl Channel {
    pub fn asymmetric_staircase(alpha: f64, family: BoundaryFamily) -> Result<Self> {
        check_alpha(alpha)?;
        if !matches!(family.layout(), Layout::FullLine(_)) {
            return Err(Error::config(
                "asymmetric staircase needs a base measure on the whole line",
            ));
        }
        if family.c() > 0.5 {
            return Err(Error::config(format!(
                "c = {} exceeds 1/2: the asymmetric staircase loses injectivity there",
                family.c()
            )));
        }
        Ok(Self::build(alpha, ChannelKind::AsymmetricStaircase(family)))
    }

    pub fn binomial_approx(alpha: f64, family: BoundaryFamily) -> Result<Self> {
        check_alpha(alpha)?;
        if !matches!(family.layout(), Layout::HalfLinePair { .. }) {
            return Err(Error::config(
                "binomial approximation needs a half-line pair of base measures",
            ));
        }
        Ok(Self::build(alpha, ChannelKind::BinomialApprox(family)))
    }

    pub fn two_point_sign(alpha: f64, split: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !split.is_finite() {
            return Err(Error::config("two-point split must be finite"));
        }
        Ok(Self::build(alpha, ChannelKind::TwoPointSign { split }))
    }

    pub fn identity() -> Self {
        Self::build(f64::INFINITY, ChannelKind::Identity)
    }

    fn build(alpha: f64, kind: ChannelKind) -> Self {
        Channel {
            alpha,
            kind,
            normalizer_factor: 1.0,
        }
    }

    /// Test hook: scales the normalizer so that verification can exercise its failure path.
    #[doc(hidden)]
    pub fn with_perturbed_normalizer(mut self, factor: f64) -> Self {
        self.normalizer_factor = factor;
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn kind(&self) -> &ChannelKind {
        &self.kind
    }

    pub fn family(&self) -> Option<&BoundaryFamily> {
        match &self.kind {
            ChannelKind::AsymmetricStaircase(f) | ChannelKind::BinomialApprox(f) => Some(f),
            _ => None,
        }
    }

    /// `e^α − 1`, computed without cancellation for small α.
    pub fn k(&self) -> f64 {
        self.alpha.exp_m1()
    }

    /// `Z`: `1 + c(e^α−1)`, `2 + c(e^α−1)`, `1 + e^α` or 1, by kind.
    pub fn normalizer(&self) -> f64 {
        let z = match &self.kind {
            ChannelKind::AsymmetricStaircase(f) => 1.0 + f.c() * self.k(),
            ChannelKind::BinomialApprox(f) => 2.0 + f.c() * self.k(),
            ChannelKind::TwoPointSign { .. } => 1.0 + self.alpha.exp(),
            ChannelKind::Identity => 1.0,
        };
        z * self.normalizer_factor
    }

    /// Total mass `1/(1 + c(e^α−1))` of the measure on `E` behind a staircase channel.
    pub fn e_mass(&self) -> Option<f64> {
        match &self.kind {
            ChannelKind::AsymmetricStaircase(f) => Some(1.0 / (1.0 + f.c() * self.k())),
            _ => None,
        }
    }

    /// Density (mass function for the two-point channel) of `x₀` given the private `x`.
    pub fn channel_density(&self, x: f64, x0: f64) -> Result<f64> {
        match &self.kind {
            ChannelKind::AsymmetricStaircase(f) | ChannelKind::BinomialApprox(f) => {
                let (base, _) = f.base_for(x0);
                let boost = if f.covers(x0, x) { 1.0 + self.k() } else { 1.0 };
                Ok(base.density(x0) * boost / self.normalizer())
            }
            ChannelKind::TwoPointSign { split } => {
                let agree = match sign_label(x0) {
                    Some(s) => (s > 0.0) == (x > *split),
                    None => return Ok(0.0),
                };
                let w = if agree { self.alpha.exp() } else { 1.0 };
                Ok(w / self.normalizer())
            }
            ChannelKind::Identity => Err(Error::config("the identity channel has no density")),
        }
    }

    /// `P(x₀′ ≤ x₀ | x)`, computed in quantile coordinates of the base measure.
    pub fn channel_cdf(&self, x: f64, x0: f64) -> Result<f64> {
        let k = self.k();
        match &self.kind {
            ChannelKind::AsymmetricStaircase(f) => {
                let base = single_base(f);
                let u = base.cdf(x0);
                let q = f.privatization_interval(x).quantiles;
                let overlap = (u.min(q.hi) - q.lo).max(0.0);
                Ok((u + k * overlap) / self.normalizer())
            }
            ChannelKind::BinomialApprox(f) => {
                let (base, side) = f.base_for(x0);
                let pi = f.privatization_interval(x);
                let u = base.cdf(x0);
                // Mass of the negative half-line (1 under ν⁻, boosted if it holds the interval).
                let neg_boost = if pi.side == Some(Side::Negative) { k * f.c() } else { 0.0 };
                let (prefix, own_boost) = match side {
                    Some(Side::Negative) => (0.0, pi.side == Some(Side::Negative)),
                    _ => (1.0 + neg_boost, pi.side == Some(Side::Positive)),
                };
                let overlap = if own_boost {
                    (u.min(pi.quantiles.hi) - pi.quantiles.lo).max(0.0)
                } else {
                    0.0
                };
                Ok((prefix + u + k * overlap) / self.normalizer())
            }
            ChannelKind::TwoPointSign { .. } => {
                let minus = self.channel_density(x, -1.0)?;
                Ok(if x0 < -1.0 {
                    0.0
                } else if x0 < 1.0 {
                    minus
                } else {
                    1.0
                })
            }
            ChannelKind::Identity => Ok(if x0 < x { 0.0 } else { 1.0 }),
        }
    }

    /// `∫ channel_density(x, x₀) dx₀`, by quadrature in quantile coordinates.
    pub fn channel_mass(&self, x: f64) -> Result<f64> {
        match &self.kind {
            ChannelKind::AsymmetricStaircase(f) | ChannelKind::BinomialApprox(f) => {
                let spec = QuadratureSpec::default();
                let pi = f.privatization_interval(x);
                let mut total = 0.0;
                for base in f.bases() {
                    let integrand = |u: f64| {
                        let x0 = base.inverse_cdf(u);
                        let nu = base.density(x0);
                        if nu > 0.0 {
                            self.channel_density(x, x0).unwrap_or(f64::NAN) / nu
                        } else {
                            0.0
                        }
                    };
                    let bps = [pi.quantiles.lo, pi.quantiles.hi];
                    total += integrate_scalar(integrand, 0.0, 1.0, &bps, &spec)?;
                }
                Ok(total)
            }
            ChannelKind::TwoPointSign { .. } => {
                Ok(self.channel_density(x, 1.0)? + self.channel_density(x, -1.0)?)
            }
            ChannelKind::Identity => Ok(1.0),
        }
    }

    /// Exact draw of the public value for private value `x`.
    pub fn sample<R: RngCore + ?Sized>(&self, x: f64, rng: &mut R) -> f64 {
        let k = self.k();
        match &self.kind {
            ChannelKind::AsymmetricStaircase(f) => {
                let base = single_base(f);
                let z = 1.0 + f.c() * k;
                if open_unit(rng) * z < 1.0 {
                    base.inverse_cdf(open_unit(rng))
                } else {
                    let q = f.privatization_interval(x).quantiles;
                    base.inverse_cdf(q.lo + q.width() * open_unit(rng))
                }
            }
            ChannelKind::BinomialApprox(f) => {
                let z = 2.0 + f.c() * k;
                if open_unit(rng) * z < 2.0 {
                    let side = if rng.random::<bool>() { Side::Positive } else { Side::Negative };
                    side_base(f, side).inverse_cdf(open_unit(rng))
                } else {
                    let (base, _) = f.base_for(x);
                    let q = f.privatization_interval(x).quantiles;
                    base.inverse_cdf(q.lo + q.width() * open_unit(rng))
                }
            }
            ChannelKind::TwoPointSign { split } => {
                let truthful = open_unit(rng) * (1.0 + self.alpha.exp()) < self.alpha.exp();
                let label = if x > *split { 1.0 } else { -1.0 };
                if truthful {
                    label
                } else {
                    -label
                }
            }
            ChannelKind::Identity => x,
        }
    }

    pub fn privatize<R: RngCore + ?Sized>(&self, data: &[f64], rng: &mut R) -> Vec<f64> {
        data.iter().map(|&x| self.sample(x, rng)).collect()
    }

    /// Privatizes `data` with a ChaCha8 stream seeded by `seed`.
    pub fn privatize_seeded(&self, data: &PrivateDataset, seed: u64) -> PublicDataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PublicDataset {
            values: self.privatize(&data.values, &mut rng),
            seed,
            channel: self.to_string(),
        }
    }

    /// The set of private values `x` whose likelihood is boosted for public value `x₀`,
    /// as an interval `[lo, hi]` (open at infinite ends and at a half-line split).
    pub fn public_level_set(&self, x0: f64) -> Result<(f64, f64)> {
        match &self.kind {
            ChannelKind::AsymmetricStaircase(f) | ChannelKind::BinomialApprox(f) => {
                Ok((f.g_c(x0), f.d_c(x0)))
            }
            ChannelKind::TwoPointSign { split } => match sign_label(x0) {
                Some(s) if s > 0.0 => Ok((*split, f64::INFINITY)),
                Some(_) => Ok((f64::NEG_INFINITY, *split)),
                None => Err(Error::Domain {
                    what: "two-point public value",
                    value: x0,
                    domain: "{−1, +1}",
                }),
            },
            ChannelKind::Identity => Err(Error::config("the identity channel has no level sets")),
        }
    }

    /// Reference density of `x₀` that does not depend on θ (`ν/Z`, or `1/(1+e^α)`).
    fn public_base(&self, x0: f64) -> f64 {
        match &self.kind {
            ChannelKind::AsymmetricStaircase(f) | ChannelKind::BinomialApprox(f) => {
                f.base_for(x0).0.density(x0) / self.normalizer()
            }
            _ => 1.0 / self.normalizer(),
        }
    }

    /// `p̂_θ(x₀) = ν(x₀)/Z · [1 + (e^α−1)(F_θ(d_c(x₀)) − F_θ(g_c(x₀)))]`.
    pub fn public_density(&self, model: &dyn ParametricModel, theta: f64, x0: f64) -> Result<f64> {
        if let ChannelKind::Identity = self.kind {
            return Ok(model.density(theta, x0));
        }
        let (lo, hi) = self.public_level_set(x0)?;
        let p = model.interval_mass(theta, lo, hi)?;
        Ok(self.public_base(x0) * (1.0 + self.k() * p))
    }

    /// `log p̂_θ(x₀)`, keeping precision when `ν(x₀)` underflows.
    pub fn public_log_density(&self, model: &dyn ParametricModel, theta: f64, x0: f64) -> Result<f64> {
        if let ChannelKind::Identity = self.kind {
            return Ok(model.density(theta, x0).ln());
        }
        let (lo, hi) = self.public_level_set(x0)?;
        let p = model.interval_mass(theta, lo, hi)?;
        Ok(self.public_base(x0).ln() + (self.k() * p).ln_1p())
    }

    /// Public score `t_θ(x₀) = (e^α−1)·∫_{I} s p / (1 + (e^α−1)·∫_{I} p)`.
    pub fn public_score(&self, model: &dyn ParametricModel, theta: f64, x0: f64) -> Result<f64> {
        if let ChannelKind::Identity = self.kind {
            return Ok(model.score(theta, x0));
        }
        let (lo, hi) = self.public_level_set(x0)?;
        let k = self.k();
        let p = model.interval_mass(theta, lo, hi)?;
        let s = model.score_mass(theta, lo, hi)?;
        Ok(k * s / (1.0 + k * p))
    }

    /// Largest ratio `q̂(x, x₀)/q̂(x′, x₀)` over quantile grids of `n_x` private and
    /// `n_x0` public values (for the two-point channel the public grid is `{−1, +1}`).
    pub fn ldp_ratio_check(&self, n_x: usize, n_x0: usize) -> Result<LdpReport> {
        if n_x == 0 || n_x0 == 0 {
            return Err(Error::config("LDP grid sizes must be positive"));
        }
        let (xs, x0s): (Vec<f64>, Vec<f64>) = match &self.kind {
            ChannelKind::AsymmetricStaircase(f) | ChannelKind::BinomialApprox(f) => {
                let mut x0s = Vec::new();
                for base in f.bases() {
                    x0s.extend(quantile_grid(base, n_x0 / f.bases().len()));
                }
                let mut xs = Vec::new();
                for base in f.bases() {
                    xs.extend(quantile_grid(base, n_x / f.bases().len()));
                }
                (xs, x0s)
            }
            ChannelKind::TwoPointSign { split } => {
                let xs = (0..n_x)
                    .map(|i| split + 8.0 * ((i as f64 + 0.5) / n_x as f64 - 0.5))
                    .collect();
                (xs, vec![-1.0, 1.0])
            }
            ChannelKind::Identity => {
                return Err(Error::config("the identity channel is not locally private"))
            }
        };
        let mut report = LdpReport {
            max_ratio: 1.0,
            bound: self.alpha.exp(),
            witness: (xs[0], xs[0], x0s[0]),
        };
        for &x0 in &x0s {
            let (mut hi, mut lo) = ((f64::NEG_INFINITY, 0.0), (f64::INFINITY, 0.0));
            for &x in &xs {
                let q = self.channel_density(x, x0)?;
                if q > hi.0 {
                    hi = (q, x);
                }
                if q < lo.0 {
                    lo = (q, x);
                }
            }
            let ratio = if lo.0 > 0.0 {
                hi.0 / lo.0
            } else if hi.0 > 0.0 {
                f64::INFINITY
            } else {
                1.0
            };
            if ratio > report.max_ratio {
                report.max_ratio = ratio;
                report.witness = (hi.1, lo.1, x0);
            }
        }
        Ok(report)
    }
}

fn sign_label(x0: f64) -> Option<f64> {
    if x0 == 1.0 || x0 == -1.0 {
        Some(x0)
    } else {
        None
    }
}

fn single_base(f: &BoundaryFamily) -> &BaseMeasure {
    match f.layout() {
        Layout::FullLine(b) => b,
        Layout::HalfLinePair { .. } => unreachable!("checked at construction"),
    }
}

fn side_base(f: &BoundaryFamily, side: Side) -> &BaseMeasure {
    match (f.layout(), side) {
        (Layout::HalfLinePair { positive, .. }, Side::Positive) => positive,
        (Layout::HalfLinePair { negative, .. }, Side::Negative) => negative,
        (Layout::FullLine(b), _) => b,
    }
}

fn quantile_grid(base: &BaseMeasure, n: usize) -> impl Iterator<Item = f64> + '_ {
    let n = n.max(1);
    (0..n).map(move |i| base.inverse_cdf((i as f64 + 0.5) / n as f64))
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ChannelKind::AsymmetricStaircase(fam) => write!(
                f,
                "asymmetric-staircase(alpha={}, c={}, nu={})",
                self.alpha,
                fam.c(),
                single_base(fam).kind()
            ),
            ChannelKind::BinomialApprox(fam) => write!(
                f,
                "binomial-approx(alpha={}, c={}, split={})",
                self.alpha,
                fam.c(),
                fam.split().unwrap_or(0.0)
            ),
            ChannelKind::TwoPointSign { split } => {
                write!(f, "two-point-sign(alpha={}, split={split})", self.alpha)
            }
            ChannelKind::Identity => write!(f, "identity"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrivateDataset {
    pub values: Vec<f64>,
}

impl PrivateDataset {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain {
                what: "private value",
                value: *v,
                domain: "the finite reals",
            });
        }
        Ok(PrivateDataset { values })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PublicDataset {
    pub values: Vec<f64>,
    pub seed: u64,
    /// Description of the channel that produced the values.
    pub channel: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::GaussianLocation;
    use crate::special::normal_pdf;
    use proptest::prelude::*;

    const LN2: f64 = std::f64::consts::LN_2;

    fn gaussian(alpha: f64, c: f64) -> Channel {
        let fam = BoundaryFamily::full_line(BaseMeasure::standard_gaussian(), c).unwrap();
        Channel::asymmetric_staircase(alpha, fam).unwrap()
    }

    fn cauchy(alpha: f64, c: f64) -> Channel {
        let fam = BoundaryFamily::full_line(BaseMeasure::standard_cauchy(), c).unwrap();
        Channel::asymmetric_staircase(alpha, fam).unwrap()
    }

    fn binomial(alpha: f64, c: f64) -> Channel {
        Channel::binomial_approx(alpha, BoundaryFamily::folded_pair(0.0, c).unwrap()).unwrap()
    }

    #[test]
    fn density_examples() {
        let ch = gaussian(LN2, 0.5);
        let inside = ch.channel_density(0.0, 0.0).unwrap();
        assert!((inside - 2.0 * normal_pdf(0.0) / 1.5).abs() < 1e-15);
        assert!((inside - 0.53192).abs() < 1e-5);
        let outside = ch.channel_density(0.0, 3.0).unwrap();
        assert!((outside - normal_pdf(3.0) / 1.5).abs() < 1e-16);
        assert!((outside - 0.002955).abs() < 1e-6);
    }

    #[test]
    fn asymmetric_rejects_large_c() {
        let fam = BoundaryFamily::full_line(BaseMeasure::standard_gaussian(), 0.6).unwrap();
        assert!(matches!(Channel::asymmetric_staircase(1.0, fam), Err(Error::Config(_))));
        assert!(Channel::binomial_approx(1.0, BoundaryFamily::folded_pair(0.0, 0.999).unwrap()).is_ok());
        assert!(Channel::asymmetric_staircase(-1.0, BoundaryFamily::full_line(BaseMeasure::standard_gaussian(), 0.3).unwrap()).is_err());
    }

    #[test]
    fn public_density_examples() {
        let m = GaussianLocation::standard();
        let ch = gaussian(LN2, 0.5);
        // At c = 1/2 the output interval of x₀ = 0 is the whole line: every private value's
        // interval of quantile width 1/2 contains the median.
        let v = ch.public_density(&m, 0.0, 0.0).unwrap();
        assert!((v - 2.0 * normal_pdf(0.0) / 1.5).abs() < 1e-15);
        for x0 in [0.0, 0.3, -1.1, 2.4] {
            let direct = integrate_scalar(
                |x: f64| ch.channel_density(x, x0).unwrap() * normal_pdf(x),
                -40.0,
                40.0,
                &[ch.family().unwrap().g_c(x0), ch.family().unwrap().d_c(x0)],
                &QuadratureSpec::default(),
            )
            .unwrap();
            assert!((ch.public_density(&m, 0.0, x0).unwrap() - direct).abs() < 1e-10, "x0={x0}");
        }
        let tp = Channel::two_point_sign(0.7, 0.0).unwrap();
        assert!((tp.public_density(&m, 0.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((tp.public_density(&m, 0.0, -1.0).unwrap() - 0.5).abs() < 1e-15);
        let lv = ch.public_log_density(&m, 0.3, 1.7).unwrap();
        assert!((lv - ch.public_density(&m, 0.3, 1.7).unwrap().ln()).abs() < 1e-13);
    }

    #[test]
    fn channels_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let channels = [gaussian(LN2, 0.5), gaussian(4.0, 0.2), cauchy(2.0, 0.1), binomial(0.5, 0.6), binomial(3.0, 0.05)];
        for ch in &channels {
            for _ in 0..25 {
                let x = 6.0 * (open_unit(&mut rng) - 0.5);
                let m = ch.channel_mass(x).unwrap();
                assert!((m - 1.0).abs() < 1e-9, "{ch} x={x} mass={m}");
            }
        }
    }

    #[test]
    fn perturbed_normalizer_is_detected() {
        let ch = gaussian(1.0, 0.3).with_perturbed_normalizer(1.001);
        assert!((ch.channel_mass(0.2).unwrap() - 1.0).abs() > 1e-4);
    }

    #[test]
    fn public_density_integrates_to_one() {
        let m = GaussianLocation::standard();
        for ch in [gaussian(LN2, 0.5), gaussian(4.0, 0.2), binomial(0.5, 0.9)] {
            let f = ch.family().unwrap();
            let mut total = 0.0;
            for base in f.bases() {
                let g = |u: f64| {
                    let x0 = base.inverse_cdf(u);
                    let nu = base.density(x0);
                    if nu > 0.0 {
                        ch.public_density(&m, 0.4, x0).unwrap() / nu
                    } else {
                        0.0
                    }
                };
                total += integrate_scalar(g, 0.0, 1.0, &[f.c(), 1.0 - f.c()], &QuadratureSpec::default()).unwrap();
            }
            assert!((total - 1.0).abs() < 1e-9, "{ch}: {total}");
        }
    }

    fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
        samples.sort_by(f64::total_cmp);
        let n = samples.len() as f64;
        samples
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn sampler_matches_density() {
        // Kolmogorov critical value at the 1% level is 1.628/√n.
        let n = 100_000;
        let crit = 1.628 / (n as f64).sqrt();
        let cases = [(gaussian(LN2, 0.5), 0.0), (gaussian(4.0, 0.2), 1.3), (cauchy(1.0, 0.25), -2.0), (binomial(0.5, 0.7), 0.4), (binomial(2.0, 0.3), -0.8)];
        for (i, (ch, x)) in cases.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + i as u64);
            let mut s: Vec<f64> = (0..n).map(|_| ch.sample(*x, &mut rng)).collect();
            let d = ks_statistic(&mut s, |z| ch.channel_cdf(*x, z).unwrap());
            assert!(d < crit, "{ch} x={x}: KS {d} ≥ {crit}");
        }
    }

    #[test]
    fn channel_cdf_is_consistent_with_density() {
        for (ch, x) in [(gaussian(1.5, 0.3), 0.2), (binomial(1.0, 0.4), -0.3), (binomial(1.0, 0.4), 0.9)] {
            let f = ch.family().unwrap();
            assert!((ch.channel_cdf(x, 50.0).unwrap() - 1.0).abs() < 1e-14);
            for z in [-2.0, -0.5, 0.0, 0.1, 1.0] {
                let num = integrate_scalar(
                    |t: f64| ch.channel_density(x, t).unwrap(),
                    -40.0,
                    z,
                    &[f.privatization_interval(x).lo, f.privatization_interval(x).hi, 0.0],
                    &QuadratureSpec::default(),
                )
                .unwrap();
                assert!((num - ch.channel_cdf(x, z).unwrap()).abs() < 1e-9, "{ch} x={x} z={z}");
            }
        }
    }

    #[test]
    fn two_point_frequencies() {
        let alpha = 0.5;
        let ch = Channel::two_point_sign(alpha, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 200_000;
        let plus = (0..n).filter(|_| ch.sample(1.0, &mut rng) == 1.0).count() as f64 / n as f64;
        let p = alpha.exp() / (1.0 + alpha.exp());
        assert!((plus - p).abs() < 4.0 * (p * (1.0 - p) / n as f64).sqrt());
        assert!((ch.channel_density(1.0, 1.0).unwrap() - p).abs() < 1e-15);
    }

    #[test]
    fn vanishing_alpha_returns_base_measure() {
        let ch = gaussian(1e-9, 0.3);
        let base = BaseMeasure::standard_gaussian();
        for i in -40..=40 {
            let z = i as f64 / 10.0;
            assert!((ch.channel_cdf(0.7, z).unwrap() - base.cdf(z)).abs() < 1e-6);
        }
    }

    #[test]
    fn ldp_ratio_examples() {
        for ch in [gaussian(LN2, 0.5), gaussian(4.0, 0.2), cauchy(1.0, 0.1), binomial(0.5, 0.9)] {
            let r = ch.ldp_ratio_check(100, 100).unwrap();
            assert!(r.holds(), "{ch}: {r:?}");
            assert!((r.max_ratio - ch.alpha().exp()).abs() < 1e-12 * r.bound, "{ch}: {r:?}");
        }
        let tiny = gaussian(1e-12, 0.3).ldp_ratio_check(50, 50).unwrap();
        assert!(tiny.max_ratio <= 1.0 + 1e-9);
        let tp = Channel::two_point_sign(0.5, 0.0).unwrap().ldp_ratio_check(20, 1).unwrap();
        assert!((tp.max_ratio - 0.5f64.exp()).abs() < 1e-15);
        assert!(tp.witness.0 > 0.0 && tp.witness.1 <= 0.0 || tp.witness.0 <= 0.0 && tp.witness.1 > 0.0);
    }

    #[test]
    fn public_score_matches_log_density_derivative() {
        let m = GaussianLocation::standard();
        let h = 1e-5;
        for ch in [gaussian(2.0, 0.3), binomial(0.5, 0.6), Channel::two_point_sign(0.8, 0.0).unwrap()] {
            for x0 in [-1.0f64, 1.0, 0.37, -2.2] {
                if matches!(ch.kind(), ChannelKind::TwoPointSign { .. }) && x0.abs() != 1.0 {
                    continue;
                }
                let fd = (ch.public_log_density(&m, h, x0).unwrap() - ch.public_log_density(&m, -h, x0).unwrap()) / (2.0 * h);
                let t = ch.public_score(&m, 0.0, x0).unwrap();
                assert!((fd - t).abs() < 1e-7, "{ch} x0={x0}: {fd} vs {t}");
            }
        }
    }

    #[test]
    fn seeded_privatization_is_reproducible() {
        let ch = gaussian(1.0, 0.4);
        let data = PrivateDataset::new(vec![0.0, 1.0, -3.0, 2.5]).unwrap();
        let a = ch.privatize_seeded(&data, 42);
        let b = ch.privatize_seeded(&data, 42);
        assert_eq!(a, b);
        assert_ne!(a.values, ch.privatize_seeded(&data, 43).values);
        assert!(PrivateDataset::new(vec![f64::NAN]).is_err());
    }

    proptest! {
        #[test]
        fn e_mass_is_bounded(c in 1e-6f64..0.5, alpha in 1e-6f64..20.0) {
            let m = gaussian(alpha, c).e_mass().unwrap();
            prop_assert!(m <= 1.0 && m >= (-alpha).exp() * (1.0 - 1e-15));
        }

        #[test]
        fn binomial_normalization_identity(c in 1e-6f64..0.999_999, alpha in 0.0f64..20.0) {
            let ch = binomial(alpha, c);
            // Each half-line carries ν-mass 1 plus the boost on the private value's side.
            let z = ch.normalizer();
            let total = (1.0 + (1.0 + c * ch.k())) / z;
            prop_assert!((total - 1.0).abs() < 1e-14);
        }
    }
}
