//! Scalar-parameter statistical models and the base measures the staircase channels are
//! built from.
//!
//! Extended reals are plain `f64` values: `±∞` are legal interval endpoints, `NaN` is not.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_scalar, QuadratureSpec};
use crate::special::{
    cauchy_cdf, cauchy_pdf, cauchy_quantile, cauchy_sf, normal_cdf, normal_pdf, normal_quantile,
    normal_sf,
};

pub(crate) fn check_interval(a: f64, b: f64) -> Result<()> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::Domain {
            what: "interval endpoint",
            value: f64::NAN,
            domain: "the extended real line",
        });
    }
    if a > b {
        return Err(Error::Ordering { lo: a, hi: b });
    }
    Ok(())
}

/// A location-type family `p_θ` on the real line.
///
/// Implementors supply density, CDF, quantile and score. `interval_mass` and
/// `score_mass` have generic implementations; override them when closed forms exist.
pub trait ParametricModel: Debug + Send + Sync {
    fn name(&self) -> &'static str;

    /// Reference parameter at which Fisher information is evaluated.
    fn theta0(&self) -> f64;

    fn density(&self, theta: f64, x: f64) -> f64;

    fn cdf(&self, theta: f64, x: f64) -> f64;

    fn sf(&self, theta: f64, x: f64) -> f64 {
        1.0 - self.cdf(theta, x)
    }

    /// Inverse CDF, used to draw private data.
    fn quantile(&self, theta: f64, u: f64) -> f64;

    /// `∂/∂θ log p_θ(x)`.
    fn score(&self, theta: f64, x: f64) -> f64;

    /// `∫ s_θ² p_θ`, the non-private Fisher information.
    fn full_information(&self) -> f64;

    /// `F(θ, b) − F(θ, a)`, using the upper tail when the interval lies right of θ.
    fn interval_mass(&self, theta: f64, a: f64, b: f64) -> Result<f64> {
        check_interval(a, b)?;
        let m = if a > theta {
            self.sf(theta, a) - self.sf(theta, b)
        } else {
            self.cdf(theta, b) - self.cdf(theta, a)
        };
        Ok(m.clamp(0.0, 1.0))
    }

    /// `∫_a^b s(θ,x) p(θ,x) dx` by adaptive quadrature after mapping ℝ onto (−1, 1).
    fn score_mass(&self, theta: f64, a: f64, b: f64) -> Result<f64> {
        check_interval(a, b)?;
        if a == b {
            return Ok(0.0);
        }
        // x = θ + t / (1 − t²) maps (−1, 1) onto ℝ.
        let to_t = |x: f64| -> f64 {
            let y = x - theta;
            if x == f64::INFINITY {
                1.0
            } else if x == f64::NEG_INFINITY {
                -1.0
            } else if y == 0.0 {
                0.0
            } else {
                2.0 * y / (1.0 + (1.0 + 4.0 * y * y).sqrt())
            }
        };
        let integrand = |t: f64| {
            let d = 1.0 - t * t;
            let x = theta + t / d;
            let jac = (1.0 + t * t) / (d * d);
            let v = self.score(theta, x) * self.density(theta, x) * jac;
            if v.is_finite() {
                v
            } else {
                0.0
            }
        };
        let spec = QuadratureSpec {
            rel_tol: 1e-12,
            abs_tol: 1e-15,
            max_panels: 10_000,
        };
        integrate_scalar(integrand, to_t(a), to_t(b), &[0.0], &spec)
    }
}

/// `N(θ, σ²)` location family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianLocation {
    pub theta0: f64,
    pub sigma: f64,
}

impl GaussianLocation {
    pub fn new(theta0: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) || !theta0.is_finite() {
            return Err(Error::config(format!(
                "gaussian model needs finite θ₀ and σ > 0, got θ₀={theta0}, σ={sigma}"
            )));
        }
        Ok(GaussianLocation { theta0, sigma })
    }

    pub fn standard() -> Self {
        GaussianLocation {
            theta0: 0.0,
            sigma: 1.0,
        }
    }
}

impl ParametricModel for GaussianLocation {
    fn name(&self) -> &'static str {
        "gaussian-location"
    }

    fn theta0(&self) -> f64 {
        self.theta0
    }

    fn density(&self, theta: f64, x: f64) -> f64 {
        normal_pdf((x - theta) / self.sigma) / self.sigma
    }

    fn cdf(&self, theta: f64, x: f64) -> f64 {
        normal_cdf((x - theta) / self.sigma)
    }

    fn sf(&self, theta: f64, x: f64) -> f64 {
        normal_sf((x - theta) / self.sigma)
    }

    fn quantile(&self, theta: f64, u: f64) -> f64 {
        theta + self.sigma * normal_quantile(u)
    }

    fn score(&self, theta: f64, x: f64) -> f64 {
        (x - theta) / (self.sigma * self.sigma)
    }

    fn full_information(&self) -> f64 {
        1.0 / (self.sigma * self.sigma)
    }

    /// Closed form `(φ(a−θ) − φ(b−θ)) / σ` in standardized units.
    fn score_mass(&self, theta: f64, a: f64, b: f64) -> Result<f64> {
        check_interval(a, b)?;
        let za = (a - theta) / self.sigma;
        let zb = (b - theta) / self.sigma;
        Ok((normal_pdf(za) - normal_pdf(zb)) / self.sigma)
    }
}

/// Cauchy location family with scale γ; score mass uses the numeric fallback.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyLocation {
    pub theta0: f64,
    pub scale: f64,
}

impl CauchyLocation {
    pub fn new(theta0: f64, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) || !theta0.is_finite() {
            return Err(Error::config(format!(
                "cauchy model needs finite θ₀ and scale > 0, got θ₀={theta0}, γ={scale}"
            )));
        }
        Ok(CauchyLocation { theta0, scale })
    }
}

impl ParametricModel for CauchyLocation {
    fn name(&self) -> &'static str {
        "cauchy-location"
    }

    fn theta0(&self) -> f64 {
        self.theta0
    }

    fn density(&self, theta: f64, x: f64) -> f64 {
        cauchy_pdf((x - theta) / self.scale) / self.scale
    }

    fn cdf(&self, theta: f64, x: f64) -> f64 {
        cauchy_cdf((x - theta) / self.scale)
    }

    fn sf(&self, theta: f64, x: f64) -> f64 {
        cauchy_sf((x - theta) / self.scale)
    }

    fn quantile(&self, theta: f64, u: f64) -> f64 {
        theta + self.scale * cauchy_quantile(u)
    }

    fn score(&self, theta: f64, x: f64) -> f64 {
        let y = x - theta;
        2.0 * y / (self.scale * self.scale + y * y)
    }

    fn full_information(&self) -> f64 {
        0.5 / (self.scale * self.scale)
    }
}

/// Support of a base measure as an extended-real interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
}

impl Support {
    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn is_full_line(&self) -> bool {
        self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Positive,
    Negative,
}

/// Positive proposal density `ν` with CDF `Ξ` and quantile `Ξ⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseMeasure {
    Gaussian { mean: f64, sd: f64 },
    Cauchy { location: f64, scale: f64 },
    /// `2φ((x − split)/sd)/sd` restricted to one side of `split`.
    FoldedNormal { split: f64, sd: f64, side: Side },
}

impl BaseMeasure {
    pub fn standard_gaussian() -> Self {
        BaseMeasure::Gaussian { mean: 0.0, sd: 1.0 }
    }

    pub fn standard_cauchy() -> Self {
        BaseMeasure::Cauchy {
            location: 0.0,
            scale: 1.0,
        }
    }

    pub fn folded_normal(split: f64, side: Side) -> Self {
        BaseMeasure::FoldedNormal {
            split,
            sd: 1.0,
            side,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (loc, scale) = match *self {
            BaseMeasure::Gaussian { mean, sd } => (mean, sd),
            BaseMeasure::Cauchy { location, scale } => (location, scale),
            BaseMeasure::FoldedNormal { split, sd, .. } => (split, sd),
        };
        if !loc.is_finite() || !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::config(format!(
                "base measure {self:?} needs a finite location and positive scale"
            )));
        }
        Ok(())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            BaseMeasure::Gaussian { .. } => "gaussian",
            BaseMeasure::Cauchy { .. } => "cauchy",
            BaseMeasure::FoldedNormal { .. } => "folded-normal",
        }
    }

    pub fn support(&self) -> Support {
        match *self {
            BaseMeasure::FoldedNormal {
                split,
                side: Side::Positive,
                ..
            } => Support {
                lo: split,
                hi: f64::INFINITY,
            },
            BaseMeasure::FoldedNormal {
                split,
                side: Side::Negative,
                ..
            } => Support {
                lo: f64::NEG_INFINITY,
                hi: split,
            },
            _ => Support {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            },
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        match *self {
            BaseMeasure::Gaussian { mean, sd } => normal_pdf((x - mean) / sd) / sd,
            BaseMeasure::Cauchy { location, scale } => cauchy_pdf((x - location) / scale) / scale,
            BaseMeasure::FoldedNormal { split, sd, side } => {
                let inside = match side {
                    Side::Positive => x > split,
                    Side::Negative => x < split,
                };
                if inside {
                    2.0 * normal_pdf((x - split) / sd) / sd
                } else {
                    0.0
                }
            }
        }
    }

    /// `Ξ(x)`, clamped to `[0, 1]` outside the support.
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            BaseMeasure::Gaussian { mean, sd } => normal_cdf((x - mean) / sd),
            BaseMeasure::Cauchy { location, scale } => cauchy_cdf((x - location) / scale),
            BaseMeasure::FoldedNormal { split, sd, side } => {
                let z = (x - split) / sd;
                match side {
                    Side::Positive if z <= 0.0 => 0.0,
                    Side::Positive => libm::erf(z * std::f64::consts::FRAC_1_SQRT_2),
                    Side::Negative if z >= 0.0 => 1.0,
                    Side::Negative => 2.0 * normal_cdf(z),
                }
            }
        }
    }

    /// `Ξ⁻¹(u)` for `u ∈ (0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain {
                what: "quantile level",
                value: u,
                domain: "(0, 1)",
            });
        }
        Ok(self.inverse_cdf(u))
    }

    /// Quantile extended to `[0, 1]`, mapping the endpoints to the support ends.
    pub(crate) fn inverse_cdf(&self, u: f64) -> f64 {
        let s = self.support();
        if u <= 0.0 {
            return s.lo;
        }
        if u >= 1.0 {
            return s.hi;
        }
        match *self {
            BaseMeasure::Gaussian { mean, sd } => mean + sd * normal_quantile(u),
            BaseMeasure::Cauchy { location, scale } => location + scale * cauchy_quantile(u),
            BaseMeasure::FoldedNormal { split, sd, side } => match side {
                Side::Positive => split - sd * normal_quantile(0.5 * (1.0 - u)),
                Side::Negative => split + sd * normal_quantile(0.5 * u),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_scalar;
    use proptest::prelude::*;

    fn numeric_mass<M: ParametricModel>(m: &M, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let spec = QuadratureSpec {
            rel_tol: 1e-13,
            abs_tol: 1e-16,
            max_panels: 10_000,
        };
        let t = m.theta0();
        integrate_scalar(|x| f(x) * m.density(t, x), a, b, &[t], &spec).unwrap()
    }

    #[test]
    fn interval_mass_examples() {
        let m = GaussianLocation::standard();
        assert_eq!(m.interval_mass(0.0, f64::NEG_INFINITY, 0.0).unwrap(), 0.5);
        assert_eq!(
            m.interval_mass(0.0, f64::NEG_INFINITY, f64::INFINITY).unwrap(),
            1.0
        );
        let v = m.interval_mass(0.0, -1.0, 1.0).unwrap();
        assert!((v - 0.682_689_492_137_085_9).abs() < 1e-15);
        assert_eq!(
            m.interval_mass(0.0, 1.0, -1.0),
            Err(Error::Ordering { lo: 1.0, hi: -1.0 })
        );
    }

    #[test]
    fn score_mass_examples() {
        let m = GaussianLocation::standard();
        let v = m.score_mass(0.0, 0.0, f64::INFINITY).unwrap();
        assert!((v - 0.398_942_280_401_432_7).abs() < 1e-15);
        let quad = numeric_mass(&m, |x| x, 0.0, 40.0);
        assert!((v - quad).abs() < 1e-12);
        assert_eq!(
            m.score_mass(0.0, f64::NEG_INFINITY, f64::INFINITY).unwrap(),
            0.0
        );
        assert!(m.score_mass(0.0, -1.0, 1.0).unwrap().abs() < 1e-16);
        assert!(m.score_mass(0.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn gaussian_density_and_score_are_normalized_and_centered() {
        let m = GaussianLocation::new(0.7, 1.3).unwrap();
        let mass = numeric_mass(&m, |_| 1.0, -30.0, 30.0);
        let centered = numeric_mass(&m, |x| m.score(0.7, x), -30.0, 30.0);
        let info = numeric_mass(&m, |x| m.score(0.7, x).powi(2), -30.0, 30.0);
        assert!((mass - 1.0).abs() < 1e-8);
        assert!(centered.abs() < 1e-8);
        assert!((info - m.full_information()).abs() < 1e-8);
    }

    #[test]
    fn cauchy_model_uses_numeric_score_mass() {
        let m = CauchyLocation::new(0.0, 1.0).unwrap();
        // ∫_0^∞ 2x/(1+x²) · 1/(π(1+x²)) dx = 1/π.
        let v = m.score_mass(0.0, 0.0, f64::INFINITY).unwrap();
        assert!((v - 1.0 / std::f64::consts::PI).abs() < 1e-10);
        assert!(m.score_mass(0.0, f64::NEG_INFINITY, f64::INFINITY).unwrap().abs() < 1e-10);
        let v = m.score_mass(0.0, -2.0, 1.0).unwrap();
        // closed form (1/π)(1/(1+a²) − 1/(1+b²))
        let exact = (1.0 / 5.0 - 1.0 / 2.0) / std::f64::consts::PI;
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn quantile_examples() {
        let c = BaseMeasure::standard_cauchy();
        assert!((c.quantile(0.75).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(BaseMeasure::standard_gaussian().quantile(0.5).unwrap(), 0.0);
        let f = BaseMeasure::folded_normal(0.0, Side::Positive);
        assert!((f.quantile(0.5).unwrap() - 0.674_489_750_196_081_7).abs() < 1e-14);
        for bad in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(matches!(c.quantile(bad), Err(Error::Domain { .. })));
        }
    }

    #[test]
    fn base_measures_round_trip_on_grid() {
        let bases = [
            BaseMeasure::standard_gaussian(),
            BaseMeasure::standard_cauchy(),
            BaseMeasure::Gaussian { mean: 1.0, sd: 2.0 },
            BaseMeasure::folded_normal(0.0, Side::Positive),
            BaseMeasure::folded_normal(0.0, Side::Negative),
            BaseMeasure::folded_normal(0.5, Side::Positive),
        ];
        let n = 20_000;
        for b in bases {
            let mut prev = f64::NEG_INFINITY;
            for i in 0..=n {
                let u = 1e-9 + (1.0 - 2e-9) * i as f64 / n as f64;
                let x = b.quantile(u).unwrap();
                assert!(x > prev, "{b:?} not increasing at u={u}");
                prev = x;
                assert!((b.cdf(x) - u).abs() <= 1e-12, "{b:?} u={u}");
                assert!(b.density(x) > 0.0);
            }
        }
    }

    #[test]
    fn base_cdf_inverts_quantile_on_data_grid() {
        let b = BaseMeasure::standard_gaussian();
        // Above x≈5 the cdf is within 1e-7 of 1 and no longer pins x down to 1e-9.
        for i in -600..=500 {
            let x = i as f64 / 100.0;
            let u = b.cdf(x);
            assert!((b.inverse_cdf(u) - x).abs() < 1e-9 * (1.0 + x.abs()), "x={x}");
        }
    }

    fn models() -> Vec<Box<dyn ParametricModel>> {
        vec![
            Box::new(GaussianLocation::standard()),
            Box::new(GaussianLocation::new(-0.5, 0.7).unwrap()),
            Box::new(CauchyLocation::new(0.3, 1.5).unwrap()),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn interval_mass_is_additive(
            mut pts in proptest::array::uniform3(-8.0f64..8.0),
            which in 0usize..3,
        ) {
            pts.sort_by(f64::total_cmp);
            let m = &models()[which];
            let t = m.theta0();
            let ab = m.interval_mass(t, pts[0], pts[1]).unwrap();
            let bc = m.interval_mass(t, pts[1], pts[2]).unwrap();
            let ac = m.interval_mass(t, pts[0], pts[2]).unwrap();
            prop_assert!((ab + bc - ac).abs() <= 1e-12);
            prop_assert!((0.0..=1.0).contains(&ac));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn score_mass_matches_quadrature(mut pts in proptest::array::uniform2(-6.0f64..6.0)) {
            pts.sort_by(f64::total_cmp);
            let m = GaussianLocation::new(0.4, 1.2).unwrap();
            let closed = m.score_mass(0.4, pts[0], pts[1]).unwrap();
            let quad = numeric_mass(&m, |x| m.score(0.4, x), pts[0], pts[1]);
            prop_assert!((closed - quad).abs() <= 1e-9);
        }
    }
}
