//! Fisher information of staircase channels and of finite measures on `E`.
//!
//! For a step function `r` with level set `F`, write `P = ∫_F p_θ₀`, `S = ∫_F s_θ₀ p_θ₀` and
//! `k = e^α − 1`. Then
//!
//! * `i(r) = k²S² / (1 + kP)`
//! * `i^(s)(r) = ½[i(r) + i(T r)]`, where `T r` has `P′ = 1 − P`, `S′ = −S`
//! * `i^(as)(r) = i^(s)(r)·(P − ½)`
//!
//! and the Fisher information of the channel built from a normalized `μ` is `∫ i dμ`.
//! The three functionals are always integrated together so the decomposition identity
//! holds to rounding.

use crate::error::{Error, Result};
use crate::measures::{FiniteMeasureOnE, Interval, IntervalSet, StepFunction};
use crate::mechanism::{Channel, ChannelKind};
use crate::models::ParametricModel;
use crate::quadrature::{integrate, QuadratureSpec};

/// Interval mass and score mass of a level set.
pub fn level_set_moments(model: &dyn ParametricModel, theta0: f64, set: &IntervalSet) -> Result<(f64, f64)> {
    let mut p = 0.0;
    let mut s = 0.0;
    for iv in set.intervals() {
        p += model.interval_mass(theta0, iv.lo, iv.hi)?;
        s += model.score_mass(theta0, iv.lo, iv.hi)?;
    }
    Ok((p, s))
}

fn i_from(k: f64, p: f64, s: f64) -> f64 {
    k * k * s * s / (1.0 + k * p)
}

/// `[i, i^(s), i^(as)]` from the moments of `F`, using `P′ = 1 − P`, `S′ = −S` for `T r`.
pub fn functionals(k: f64, p: f64, s: f64) -> [f64; 3] {
    let i = i_from(k, p, s);
    let i_sym = 0.5 * (i + i_from(k, 1.0 - p, s));
    [i, i_sym, i_sym * (p - 0.5)]
}

pub fn i_of(model: &dyn ParametricModel, theta0: f64, r: &StepFunction) -> Result<f64> {
    let (p, s) = level_set_moments(model, theta0, &r.level_set)?;
    Ok(i_from(r.alpha.exp_m1(), p, s))
}

/// `½[i(r) + i(T r)]`, evaluating `T r` on the complement of the level set.
pub fn i_sym(model: &dyn ParametricModel, theta0: f64, r: &StepFunction) -> Result<f64> {
    Ok(0.5 * (i_of(model, theta0, r)? + i_of(model, theta0, &r.apply_t())?))
}

pub fn i_asym(model: &dyn ParametricModel, theta0: f64, r: &StepFunction) -> Result<f64> {
    let (p, _) = level_set_moments(model, theta0, &r.level_set)?;
    Ok(i_sym(model, theta0, r)? * (p - 0.5))
}

/// The closed form printed alongside the optimum theorem,
/// `k²/2 · S² / ((e^α − kP)(1 + kP))`. It equals `i_sym / (e^α + 1)`; kept only for the
/// comparison reported by the verification suite.
pub fn i_sym_displayed(model: &dyn ParametricModel, theta0: f64, r: &StepFunction) -> Result<f64> {
    let (p, s) = level_set_moments(model, theta0, &r.level_set)?;
    let k = r.alpha.exp_m1();
    Ok(0.5 * k * k * s * s / ((r.alpha.exp() - k * p) * (1.0 + k * p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    FiniteSum,
    Quadrature,
}

/// Three terms with `total = sym_term + mass_term − asym_term`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub sym_term: f64,
    pub mass_term: f64,
    pub asym_term: f64,
}

impl Decomposition {
    pub fn recombined(&self) -> f64 {
        self.sym_term + self.mass_term - self.asym_term
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherReport {
    pub total: f64,
    /// `∫ i dμ^(s)`, the information of the symmetrized channel.
    pub sym_term: f64,
    /// `∫ i^(s) dμ − ∫ i dμ^(s)`.
    pub mass_term: f64,
    /// `(2(e^α−1)/(e^α+1))·∫ i^(as) dμ`.
    pub asym_term: f64,
    /// The variant that scales the asymmetric term by `2(e^α−1)μ(E)` and uses
    /// `∫ i^(s) dμ` as the symmetric term. It agrees with the terms above only when
    /// `μ(E) = 2/(e^α+1)`.
    pub mass_scaled: Decomposition,
    pub alpha: f64,
    /// `μ(E)`.
    pub e_mass: f64,
    /// `∫ i^(s) dμ` and `∫ i^(as) dμ`.
    pub sym_integral: f64,
    pub asym_integral: f64,
    pub method: Method,
    /// Quadrature error estimate (zero for finite sums).
    pub error: f64,
}

impl FisherReport {
    fn assemble(alpha: f64, e_mass: f64, integrals: [f64; 3], method: Method, error: f64) -> Self {
        let [total, s1, a1] = integrals;
        let ep1 = alpha.exp() + 1.0;
        let k = alpha.exp_m1();
        let sym_term = 2.0 * s1 / (ep1 * e_mass);
        FisherReport {
            total,
            sym_term,
            mass_term: s1 - sym_term,
            asym_term: 2.0 * k / ep1 * a1,
            mass_scaled: Decomposition {
                sym_term: s1,
                mass_term: (ep1 * e_mass - 2.0) * s1,
                asym_term: 2.0 * k * e_mass * a1,
            },
            alpha,
            e_mass,
            sym_integral: s1,
            asym_integral: a1,
            method,
            error,
        }
    }

    pub fn decomposition(&self) -> Decomposition {
        Decomposition {
            sym_term: self.sym_term,
            mass_term: self.mass_term,
            asym_term: self.asym_term,
        }
    }

    /// `|total − (sym + mass − asym)| / total`.
    pub fn identity_residual(&self) -> f64 {
        relative_residual(self.total, self.decomposition())
    }

    pub fn mass_scaled_residual(&self) -> f64 {
        relative_residual(self.total, self.mass_scaled)
    }

    pub fn theoretical_std(&self, n: usize) -> Result<f64> {
        crate::estimate::theoretical_std(n, self.total)
    }
}

fn relative_residual(total: f64, d: Decomposition) -> f64 {
    let r = (total - d.recombined()).abs();
    if total > 0.0 {
        r / total
    } else {
        r
    }
}

/// Fisher information of the channel built from a normalized finite measure.
pub fn fisher_finite(model: &dyn ParametricModel, theta0: f64, mu: &FiniteMeasureOnE) -> Result<FisherReport> {
    mu.require_normalized()?;
    let mut acc = [0.0; 3];
    for (w, r) in mu.step_functions() {
        let i = i_of(model, theta0, &r)?;
        let is = i_sym(model, theta0, &r)?;
        let (p, _) = level_set_moments(model, theta0, &r.level_set)?;
        acc[0] += w * i;
        acc[1] += w * is;
        acc[2] += w * is * (p - 0.5);
    }
    Ok(FisherReport::assemble(mu.alpha(), mu.total_mass(), acc, Method::FiniteSum, 0.0))
}

/// Fisher information of a staircase channel, integrating over the public value in
/// quantile coordinates of each base measure. Breakpoints sit at `u₀ = c` and `1 − c`,
/// where a boundary switches between finite and infinite.
pub fn fisher_channel(
    model: &dyn ParametricModel,
    theta0: f64,
    ch: &Channel,
    spec: &QuadratureSpec,
) -> Result<FisherReport> {
    let alpha = ch.alpha();
    match ch.kind() {
        ChannelKind::AsymmetricStaircase(fam) | ChannelKind::BinomialApprox(fam) => {
            let k = ch.k();
            let z = ch.normalizer();
            let c = fam.c();
            let mut acc = [0.0; 3];
            let mut error = 0.0;
            for base in fam.bases() {
                let integrand = |u0: f64| -> [f64; 3] {
                    let (g, d) = fam.boundaries_at(base, u0);
                    let p = model.interval_mass(theta0, g, d);
                    let s = model.score_mass(theta0, g, d);
                    match (p, s) {
                        (Ok(p), Ok(s)) => functionals(k, p, s),
                        _ => [f64::NAN; 3],
                    }
                };
                let r = integrate(integrand, 0.0, 1.0, &[c, 1.0 - c], spec)?;
                if r.value.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Degenerate(format!(
                        "non-finite Fisher integrand for {ch}"
                    )));
                }
                for j in 0..3 {
                    acc[j] += r.value[j] / z;
                }
                error += r.error / z;
            }
            let e_mass = fam.bases().len() as f64 / z;
            Ok(FisherReport::assemble(alpha, e_mass, acc, Method::Quadrature, error))
        }
        ChannelKind::TwoPointSign { split } => {
            let set = IntervalSet::from_intervals(vec![Interval::open(*split, f64::INFINITY)]);
            fisher_finite(model, theta0, &FiniteMeasureOnE::two_point(alpha, set)?)
        }
        ChannelKind::Identity => Err(Error::config(
            "the identity channel carries the model's full information; no decomposition applies",
        )),
    }
}

/// Candidate level sets searched by [`symmetric_optimum`]: half-lines `(t, ∞)` and
/// bounded intervals `(a, b)` with endpoints on a quantile grid of the model at θ₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateFamily {
    pub half_lines: bool,
    pub intervals: bool,
    /// Number of interior grid levels; odd values put a grid point at the median.
    pub grid: usize,
}

impl Default for CandidateFamily {
    fn default() -> Self {
        CandidateFamily {
            half_lines: true,
            intervals: true,
            grid: 99,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricOptimum {
    pub level_set: IntervalSet,
    pub i_sym: f64,
    /// `(2/(e^α+1))·i^(s)` at the optimum: the information of the two-point channel built on it.
    pub j: f64,
}

/// Maximizes `i^(s)` over the candidate family. Since `i^(s)(r) = i^(s)(T r)`, lower
/// half-lines and interval complements are covered implicitly.
pub fn symmetric_optimum(
    model: &dyn ParametricModel,
    theta0: f64,
    alpha: f64,
    family: &CandidateFamily,
) -> Result<SymmetricOptimum> {
    if !(family.half_lines || family.intervals) || family.grid == 0 {
        return Err(Error::config("empty candidate family"));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::config(format!("α must be finite and > 0, got {alpha}")));
    }
    let k = alpha.exp_m1();
    let n = family.grid;
    let level = |i: usize| (i as f64 + 1.0) / (n as f64 + 1.0);
    let at = |u: f64| model.quantile(theta0, u);
    let value = |lo: f64, hi: f64| -> Result<f64> {
        let p = model.interval_mass(theta0, lo, hi)?;
        let s = model.score_mass(theta0, lo, hi)?;
        Ok(functionals(k, p, s)[1])
    };

    // (lo level, hi level, value); level 1.0 stands for +∞.
    let mut best: Option<(f64, f64, f64)> = None;
    let mut consider = |ul: f64, uh: f64, v: f64| {
        if best.is_none_or(|b| v > b.2) {
            best = Some((ul, uh, v));
        }
    };
    if family.half_lines {
        for i in 0..n {
            let u = level(i);
            consider(u, 1.0, value(at(u), f64::INFINITY)?);
        }
    }
    if family.intervals {
        for i in 0..n {
            for j in i + 1..n {
                let (ul, uh) = (level(i), level(j));
                consider(ul, uh, value(at(ul), at(uh))?);
            }
        }
    }
    let (mut ul, mut uh, mut v) = best.expect("family is nonempty");

    // Coordinate refinement of the finite endpoints within one grid step.
    let step = 1.0 / (n as f64 + 1.0);
    let upper = |uh: f64| if uh >= 1.0 { f64::INFINITY } else { at(uh) };
    for _ in 0..3 {
        let lo_range = ((ul - step).max(1e-12), (ul + step).min(uh - 1e-12));
        let (nl, nv) = golden_max(|u| value(at(u), upper(uh)).unwrap_or(f64::NEG_INFINITY), lo_range, 1e-10, 200);
        if nv > v {
            ul = nl;
            v = nv;
        }
        if uh < 1.0 {
            let hi_range = ((uh - step).max(ul + 1e-12), (uh + step).min(1.0 - 1e-12));
            let (nh, nv) = golden_max(|u| value(at(ul), at(u)).unwrap_or(f64::NEG_INFINITY), hi_range, 1e-10, 200);
            if nv > v {
                uh = nh;
                v = nv;
            }
        }
    }
    let level_set = IntervalSet::from_intervals(vec![Interval::open(at(ul), upper(uh))]);
    Ok(SymmetricOptimum {
        level_set,
        i_sym: v,
        j: 2.0 / (alpha.exp() + 1.0) * v,
    })
}

/// Golden-section maximization on `[a, b]`, stopping at width `tol` or after `max_iter`
/// shrink steps; returns `(argmax, max)`.
pub(crate) fn golden_max(
    f: impl Fn(f64) -> f64,
    (mut a, mut b): (f64, f64),
    tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut iter = 0;
    while b - a > tol && iter < max_iter {
        iter += 1;
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunedC {
    pub c: f64,
    pub fisher: f64,
}

/// Maximizes channel Fisher information over `c ∈ [lo, hi]`: a coarse grid locates the
/// best cell, golden-section refines inside its neighbors, and the endpoints are always
/// compared so a boundary optimum is reported as such.
pub fn optimal_c(
    model: &dyn ParametricModel,
    theta0: f64,
    build: impl Fn(f64) -> Result<Channel>,
    (lo, hi): (f64, f64),
    tol: f64,
    spec: &QuadratureSpec,
) -> Result<TunedC> {
    if !(lo > 0.0 && lo < hi && tol > 0.0) {
        return Err(Error::Config(format!("invalid c search range [{lo}, {hi}] or tolerance {tol}")));
    }
    let eval = |c: f64| -> Result<f64> { Ok(fisher_channel(model, theta0, &build(c)?, spec)?.total) };
    const GRID: usize = 40;
    let points: Vec<f64> = (0..=GRID).map(|i| lo + (hi - lo) * i as f64 / GRID as f64).collect();
    let values = points.iter().map(|&c| eval(c)).collect::<Result<Vec<f64>>>()?;
    let (bi, _) = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
    let bracket = (points[bi.saturating_sub(1)], points[(bi + 1).min(GRID)]);
    let failure = std::cell::RefCell::new(None);
    let (c, v) = golden_max(
        |c| {
            eval(c).unwrap_or_else(|e| {
                failure.borrow_mut().get_or_insert(e);
                f64::NEG_INFINITY
            })
        },
        bracket,
        tol,
        200,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let mut best = TunedC { c, fisher: v };
    for (&c, &v) in [(&lo, &values[0]), (&hi, &values[GRID])] {
        if v >= best.fisher {
            best = TunedC { c, fisher: v };
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    /// `I(α)/α²` at the reference α.
    pub constant: f64,
    /// `Σ wᵢ Sᵢ²` at the reference α: the leading coefficient of the expansion.
    pub expansion_constant: f64,
    pub alphas: Vec<f64>,
    pub ratios: Vec<f64>,
    /// `|I(α)/α² − constant|` per α.
    pub deviations: Vec<f64>,
    /// `max deviation / α` over the grid.
    pub c_bound: f64,
    /// Least-squares slope of `log deviation` against `log α`.
    pub order: f64,
}

pub const SCALING_ALPHAS: [f64; 3] = [0.05, 0.02, 0.01];
pub const SCALING_REFERENCE_ALPHA: f64 = 1e-4;

/// Small-α behavior of `I(α)/α²` for a family of normalized measures indexed by α.
pub fn small_alpha_scaling(
    model: &dyn ParametricModel,
    theta0: f64,
    measure_at: impl Fn(f64) -> Result<FiniteMeasureOnE>,
) -> Result<ScalingReport> {
    let ratio = |a: f64| -> Result<f64> { Ok(fisher_finite(model, theta0, &measure_at(a)?)?.total / (a * a)) };
    let reference = measure_at(SCALING_REFERENCE_ALPHA)?;
    let constant = ratio(SCALING_REFERENCE_ALPHA)?;
    let mut expansion_constant = 0.0;
    for (w, r) in reference.step_functions() {
        let (_, s) = level_set_moments(model, theta0, &r.level_set)?;
        expansion_constant += w * s * s;
    }
    let alphas = SCALING_ALPHAS.to_vec();
    let ratios = alphas.iter().map(|&a| ratio(a)).collect::<Result<Vec<_>>>()?;
    let deviations: Vec<f64> = ratios.iter().map(|r| (r - constant).abs()).collect();
    let c_bound = alphas
        .iter()
        .zip(&deviations)
        .map(|(a, d)| d / a)
        .fold(0.0, f64::max);
    let xs: Vec<f64> = alphas.iter().map(|a| a.ln()).collect();
    let ys: Vec<f64> = deviations.iter().map(|d| d.max(f64::MIN_POSITIVE).ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(ScalingReport {
        constant,
        expansion_constant,
        alphas,
        ratios,
        deviations,
        c_bound,
        order: sxy / sxx,
    })
}

/// The symmetric two-point measure on `{r̄, T r̄}` with `F⁺ = (split, ∞)`.
pub fn two_point_measure(alpha: f64, split: f64) -> Result<FiniteMeasureOnE> {
    FiniteMeasureOnE::two_point(
        alpha,
        IntervalSet::from_intervals(vec![Interval::open(split, f64::INFINITY)]),
    )
}
