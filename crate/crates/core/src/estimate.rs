//! Maximum-likelihood estimation of θ from privatized data, and the Monte Carlo harness
//! comparing the empirical spread of the estimator with `1/√(n·I)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fisher::{fisher_channel, golden_max};
use crate::mechanism::{open_unit, Channel, ChannelKind};
use crate::models::ParametricModel;
use crate::quadrature::QuadratureSpec;
use crate::scenario::{build_channel, Scenario};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleConfig {
    pub bracket: (f64, f64),
    pub tol: f64,
    pub max_iter: usize,
    /// Also evaluate the likelihood on a 512-point grid (diagnostic for multimodality).
    pub scan: bool,
}

impl Default for MleConfig {
    fn default() -> Self {
        MleConfig {
            bracket: (-10.0, 10.0),
            tol: 1e-6,
            max_iter: 200,
            scan: false,
        }
    }
}

impl MleConfig {
    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.bracket;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Config(format!("MLE bracket ({a}, {b}) is empty or not finite")));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!("MLE tolerance must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::config("MLE needs at least one iteration"));
        }
        Ok(())
    }
}

/// Log-likelihood of θ for a fixed public sample. The θ-free parts (level sets and base
/// density terms) are computed once.
pub struct Likelihood<'a> {
    model: &'a dyn ParametricModel,
    k: f64,
    constant: f64,
    terms: Terms,
}

enum Terms {
    LevelSets(Vec<(f64, f64)>),
    Raw(Vec<f64>),
}

impl<'a> Likelihood<'a> {
    pub fn new(ch: &Channel, model: &'a dyn ParametricModel, data: &[f64]) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyData);
        }
        if let ChannelKind::Identity = ch.kind() {
            return Ok(Likelihood {
                model,
                k: 0.0,
                constant: 0.0,
                terms: Terms::Raw(data.to_vec()),
            });
        }
        let mut sets = Vec::with_capacity(data.len());
        let mut constant = 0.0;
        for &z in data {
            if !z.is_finite() {
                return Err(Error::Domain {
                    what: "public value",
                    value: z,
                    domain: "the finite reals",
                });
            }
            let (lo, hi) = ch.public_level_set(z)?;
            // θ-free part Σ log(ν(z)/Z): log p̂ minus the boost at a reference θ.
            let theta_ref = model.theta0();
            let full = ch.public_log_density(model, theta_ref, z)?;
            constant += full - (ch.k() * model.interval_mass(theta_ref, lo, hi)?).ln_1p();
            sets.push((lo, hi));
        }
        Ok(Likelihood {
            model,
            k: ch.k(),
            constant,
            terms: Terms::LevelSets(sets),
        })
    }

    pub fn value(&self, theta: f64) -> Result<f64> {
        match &self.terms {
            Terms::Raw(z) => Ok(z.iter().map(|&z| self.model.density(theta, z).ln()).sum()),
            Terms::LevelSets(sets) => {
                let mut acc = self.constant;
                for &(lo, hi) in sets {
                    acc += (self.k * self.model.interval_mass(theta, lo, hi)?).ln_1p();
                }
                Ok(acc)
            }
        }
    }

    /// `Σ t_θ(zᵢ)`, the exact derivative of [`Likelihood::value`].
    pub fn score(&self, theta: f64) -> Result<f64> {
        match &self.terms {
            Terms::Raw(z) => Ok(z.iter().map(|&z| self.model.score(theta, z)).sum()),
            Terms::LevelSets(sets) => {
                let mut acc = 0.0;
                for &(lo, hi) in sets {
                    let p = self.model.interval_mass(theta, lo, hi)?;
                    let s = self.model.score_mass(theta, lo, hi)?;
                    acc += self.k * s / (1.0 + self.k * p);
                }
                Ok(acc)
            }
        }
    }
}

/// `Σᵢ log p̂_θ(zᵢ)`.
pub fn log_likelihood(ch: &Channel, model: &dyn ParametricModel, theta: f64, data: &[f64]) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    data.iter()
        .map(|&z| ch.public_log_density(model, theta, z))
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MleResult {
    pub theta_hat: f64,
    pub log_likelihood: f64,
    /// The maximizer sits within `2·tol` of a bracket end.
    pub at_boundary: bool,
    pub evaluations: usize,
    /// `(θ, log-likelihood)` on a 512-point grid when requested.
    pub scan: Option<Vec<(f64, f64)>>,
}

/// Golden-section maximization over the bracket followed by one Newton step using a
/// finite-difference second derivative, kept only if it improves the likelihood.
pub fn mle(ch: &Channel, model: &dyn ParametricModel, data: &[f64], cfg: &MleConfig) -> Result<MleResult> {
    cfg.validate()?;
    let lik = Likelihood::new(ch, model, data)?;
    mle_with(&lik, cfg)
}

pub fn mle_with(lik: &Likelihood<'_>, cfg: &MleConfig) -> Result<MleResult> {
    let (a, b) = cfg.bracket;
    let evals = std::cell::Cell::new(0usize);
    let failure = std::cell::RefCell::new(None);
    let f = |t: f64| {
        evals.set(evals.get() + 1);
        match lik.value(t) {
            Ok(v) if !v.is_nan() => v,
            Ok(_) => f64::NEG_INFINITY,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NEG_INFINITY
            }
        }
    };
    let (mut theta, mut best) = golden_max(f, (a, b), cfg.tol, cfg.max_iter);
    if let Some(e) = failure.borrow_mut().take() {
        return Err(e);
    }
    if !best.is_finite() {
        return Err(Error::Degenerate("log-likelihood is not finite on the bracket".into()));
    }

    let h = 1e-4 * (1.0 + theta.abs());
    let (fm, fp) = (f(theta - h), f(theta + h));
    let d1 = (fp - fm) / (2.0 * h);
    let d2 = (fp - 2.0 * best + fm) / (h * h);
    if d2 < 0.0 {
        let candidate = theta - d1 / d2;
        if candidate > a && candidate < b && (candidate - theta).abs() < 10.0 * cfg.tol.max(h) {
            let v = f(candidate);
            if v > best {
                theta = candidate;
                best = v;
            }
        }
    }

    let scan = cfg.scan.then(|| {
        (0..512)
            .map(|i| {
                let t = a + (b - a) * i as f64 / 511.0;
                (t, f(t))
            })
            .collect()
    });
    Ok(MleResult {
        theta_hat: theta,
        log_likelihood: best,
        at_boundary: theta - a <= 2.0 * cfg.tol || b - theta <= 2.0 * cfg.tol,
        evaluations: evals.get(),
        scan,
    })
}

/// `1/√(n·I)`.
pub fn theoretical_std(n: usize, fisher_total: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Degenerate("sample size is zero".into()));
    }
    if !(fisher_total > 0.0 && fisher_total.is_finite()) {
        return Err(Error::Degenerate(format!("Fisher information {fisher_total} is not positive")));
    }
    Ok(1.0 / (n as f64 * fisher_total).sqrt())
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed: SplitMix64 applied to the master seed, then folded with the grid and
/// trial indices, one SplitMix64 round per index.
pub fn stream_seed(master: u64, grid_index: u64, trial_index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ grid_index) ^ trial_index)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimRow {
    pub alpha: f64,
    pub c: f64,
    pub bias: f64,
    pub std: f64,
    pub theo_std: f64,
    pub trials: usize,
    pub n: usize,
    pub failures: usize,
    pub boundary_hits: usize,
}

/// Fisher information of the scenario's channel at one grid point.
pub fn channel_information(
    model: &dyn ParametricModel,
    theta0: f64,
    ch: &Channel,
    spec: &QuadratureSpec,
) -> Result<f64> {
    match ch.kind() {
        ChannelKind::Identity => Ok(model.full_information()),
        _ => Ok(fisher_channel(model, theta0, ch, spec)?.total),
    }
}

/// One simulated dataset: draw `n` private values at θ₀, privatize, estimate.
pub fn run_trial(
    ch: &Channel,
    model: &dyn ParametricModel,
    n: usize,
    seed: u64,
    cfg: &MleConfig,
) -> Result<MleResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta0 = model.theta0();
    let public: Vec<f64> = (0..n)
        .map(|_| {
            let x = model.quantile(theta0, open_unit(&mut rng));
            ch.sample(x, &mut rng)
        })
        .collect();
    mle(ch, model, &public, cfg)
}

/// Runs every grid point of the scenario. Trials run in parallel; results are
/// aggregated in trial order so the table depends only on the scenario and its seed.
pub fn monte_carlo(scenario: &Scenario) -> Result<Vec<SimRow>> {
    scenario.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = scenario.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| monte_carlo_inner(scenario))
}

fn monte_carlo_inner(scenario: &Scenario) -> Result<Vec<SimRow>> {
    let model = scenario.model.build()?;
    let theta0 = scenario.model.theta0();
    let spec = QuadratureSpec::default();
    let mut rows = Vec::new();
    for (gi, (alpha, c)) in scenario.grid().into_iter().enumerate() {
        let ch = build_channel(scenario.mechanism, scenario.nu, alpha, c)?;
        let info = channel_information(model.as_ref(), theta0, &ch, &spec)?;
        let outcomes: Vec<Result<MleResult>> = (0..scenario.trials)
            .into_par_iter()
            .map(|ti| {
                let seed = stream_seed(scenario.seed, gi as u64, ti as u64);
                run_trial(&ch, model.as_ref(), scenario.n, seed, &scenario.mle)
            })
            .collect();
        let mut estimates = Vec::with_capacity(outcomes.len());
        let mut failures = 0;
        let mut boundary_hits = 0;
        let mut first_error = None;
        for o in outcomes {
            match o {
                Ok(r) => {
                    boundary_hits += r.at_boundary as usize;
                    estimates.push(r.theta_hat);
                }
                Err(e) => {
                    failures += 1;
                    first_error.get_or_insert(e);
                }
            }
        }
        if failures * 100 > scenario.trials || estimates.len() < 2 {
            return Err(Error::Degenerate(format!(
                "{failures} of {} trials failed at α={alpha}, c={c}: {}",
                scenario.trials,
                first_error.map(|e| e.to_string()).unwrap_or_default()
            )));
        }
        let (bias, std) = mean_and_std(&estimates, theta0);
        rows.push(SimRow {
            alpha,
            c,
            bias,
            std,
            theo_std: theoretical_std(scenario.n, info)?,
            trials: estimates.len(),
            n: scenario.n,
            failures,
            boundary_hits,
        });
    }
    Ok(rows)
}

/// Sample mean of `x − center` and sample standard deviation (denominator `len − 1`).
pub fn mean_and_std(xs: &[f64], center: f64) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean - center, var.sqrt())
}
