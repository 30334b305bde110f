//! Boundary functions `g_c`, `d_c` of the asymmetric staircase construction and the
//! privatization interval `[d_c⁻¹(x), g_c⁻¹(x)]`.
//!
//! Everything is computed in quantile coordinates `u = Ξ(x)`: the lower boundary of the
//! output interval of a public value `x₀` sits at `Ξ⁻¹(u₀ − c/2)` and the upper one at
//! `Ξ⁻¹(u₀ + c/2)`, replaced by the support end once the shift leaves `(0, 1)`.

use crate::error::{Error, Result};
use crate::measures::{Interval, IntervalSet};
use crate::models::{BaseMeasure, Side, Support};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Layout {
    FullLine(BaseMeasure),
    /// One base measure on each side of `split`, as used by the binomial-approximation channel.
    HalfLinePair {
        split: f64,
        positive: BaseMeasure,
        negative: BaseMeasure,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryFamily {
    c: f64,
    layout: Layout,
}

/// Quantile-space image `[lo, hi]` of a privatization interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileInterval {
    pub lo: f64,
    pub hi: f64,
}

impl QuantileInterval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// The set of public values `x₀` whose output interval contains a private value `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivatizationInterval {
    /// `d_c⁻¹(x)`
    pub lo: f64,
    /// `g_c⁻¹(x)`
    pub hi: f64,
    pub quantiles: QuantileInterval,
    pub side: Option<Side>,
}

impl BoundaryFamily {
    pub fn full_line(base: BaseMeasure, c: f64) -> Result<Self> {
        check_c(c)?;
        base.validate()?;
        if !base.support().is_full_line() {
            return Err(Error::config(format!(
                "{} base measure is not supported on the whole line",
                base.kind()
            )));
        }
        Ok(BoundaryFamily {
            c,
            layout: Layout::FullLine(base),
        })
    }

    /// Folded normal measures on each side of `split`.
    pub fn folded_pair(split: f64, c: f64) -> Result<Self> {
        Self::half_line_pair(
            split,
            BaseMeasure::folded_normal(split, Side::Positive),
            BaseMeasure::folded_normal(split, Side::Negative),
            c,
        )
    }

    pub fn half_line_pair(
        split: f64,
        positive: BaseMeasure,
        negative: BaseMeasure,
        c: f64,
    ) -> Result<Self> {
        check_c(c)?;
        positive.validate()?;
        negative.validate()?;
        if !split.is_finite() {
            return Err(Error::config("half-line split must be finite"));
        }
        let (ps, ns) = (positive.support(), negative.support());
        if ps.lo != split || ps.hi != f64::INFINITY || ns.hi != split || ns.lo != f64::NEG_INFINITY {
            return Err(Error::config(format!(
                "half-line measures must live on ({split}, ∞) and (−∞, {split})"
            )));
        }
        Ok(BoundaryFamily {
            c,
            layout: Layout::HalfLinePair {
                split,
                positive,
                negative,
            },
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn split(&self) -> Option<f64> {
        match self.layout {
            Layout::FullLine(_) => None,
            Layout::HalfLinePair { split, .. } => Some(split),
        }
    }

    /// Base measure governing `x` together with its side (None for the full-line layout).
    /// The split point itself belongs to the negative side.
    pub fn base_for(&self, x: f64) -> (&BaseMeasure, Option<Side>) {
        match &self.layout {
            Layout::FullLine(b) => (b, None),
            Layout::HalfLinePair {
                split,
                positive,
                negative,
            } => {
                if x > *split {
                    (positive, Some(Side::Positive))
                } else {
                    (negative, Some(Side::Negative))
                }
            }
        }
    }

    pub fn bases(&self) -> Vec<&BaseMeasure> {
        match &self.layout {
            Layout::FullLine(b) => vec![b],
            Layout::HalfLinePair {
                positive, negative, ..
            } => vec![positive, negative],
        }
    }

    /// Output-interval boundaries for a public value at quantile `u0` of `base`.
    pub fn boundaries_at(&self, base: &BaseMeasure, u0: f64) -> (f64, f64) {
        let c = self.c;
        let Support { lo, hi } = base.support();
        let g = if u0 <= c { lo } else { base.inverse_cdf(u0 - 0.5 * c) };
        let d = if u0 >= 1.0 - c { hi } else { base.inverse_cdf(u0 + 0.5 * c) };
        (g, d)
    }

    /// Lower boundary `g_c(x₀)`: left-continuous, `−∞` (or the split) on `Ξ(x₀) ≤ c`.
    pub fn g_c(&self, x0: f64) -> f64 {
        let (base, _) = self.base_for(x0);
        self.boundaries_at(base, base.cdf(x0)).0
    }

    /// Upper boundary `d_c(x₀)`: right-continuous, `+∞` (or the split) on `Ξ(x₀) ≥ 1 − c`.
    pub fn d_c(&self, x0: f64) -> f64 {
        let (base, _) = self.base_for(x0);
        self.boundaries_at(base, base.cdf(x0)).1
    }

    /// Quantile image of the privatization interval for a private value at quantile `u`.
    pub fn quantile_interval(&self, u: f64) -> QuantileInterval {
        let c = self.c;
        let lo = if u <= 0.5 * c {
            0.0
        } else if u >= 1.0 - 0.5 * c {
            1.0 - c
        } else {
            u - 0.5 * c
        };
        QuantileInterval { lo, hi: lo + c }
    }

    /// `(d_c⁻¹(x), g_c⁻¹(x))` together with the quantile interval of mass `c`.
    pub fn privatization_interval(&self, x: f64) -> PrivatizationInterval {
        let (base, side) = self.base_for(x);
        let quantiles = self.quantile_interval(base.cdf(x));
        PrivatizationInterval {
            lo: base.inverse_cdf(quantiles.lo),
            hi: base.inverse_cdf(quantiles.hi),
            quantiles,
            side,
        }
    }

    /// Whether `x` lies in the output interval `[g_c(x₀), d_c(x₀)]`.
    ///
    /// Infinite ends are open; in the half-line layout the split is excluded on the
    /// positive side and included on the negative side.
    pub fn covers(&self, x0: f64, x: f64) -> bool {
        let (_, side0) = self.base_for(x0);
        let (_, side) = self.base_for(x);
        if side0 != side {
            return false;
        }
        // The split itself is on the negative side, so the side test already keeps it out
        // of positive-side intervals.
        self.g_c(x0) <= x && x <= self.d_c(x0)
    }

    /// Level set `F⁺` of the extremal function attached to `x₀`.
    pub fn level_set(&self, x0: f64) -> IntervalSet {
        let (_, side) = self.base_for(x0);
        let (g, d) = (self.g_c(x0), self.d_c(x0));
        let lo_closed = match (side, self.split()) {
            (Some(Side::Positive), Some(s)) => g != s && g.is_finite(),
            _ => g.is_finite(),
        };
        IntervalSet::from_intervals(vec![Interval::new(g, d, lo_closed, d.is_finite())])
    }
}

fn check_c(c: f64) -> Result<()> {
    if c > 0.0 && c < 1.0 {
        Ok(())
    } else {
        Err(Error::config(format!("c must lie in (0, 1), got {c}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::normal_quantile;
    use proptest::prelude::*;

    fn gauss(c: f64) -> BoundaryFamily {
        BoundaryFamily::full_line(BaseMeasure::standard_gaussian(), c).unwrap()
    }

    #[test]
    fn g_c_examples() {
        let f = gauss(0.5);
        assert_eq!(f.g_c(normal_quantile(0.4)), f64::NEG_INFINITY);
        assert!(f.g_c(normal_quantile(0.75)).abs() < 1e-15);
        let v = gauss(0.2).g_c(0.0);
        assert!((v - (-0.253_347_103_135_799_8)).abs() < 1e-14);
    }

    #[test]
    fn d_c_examples() {
        let f = gauss(0.5);
        assert_eq!(f.d_c(normal_quantile(0.6)), f64::INFINITY);
        assert!((gauss(0.2).d_c(0.0) - 0.253_347_103_135_799_8).abs() < 1e-14);
        assert!(f.d_c(normal_quantile(0.25)).abs() < 1e-15);
    }

    #[test]
    fn breakpoints_follow_one_sided_continuity() {
        let f = gauss(0.3);
        // g is −∞ up to and including Ξ⁻¹(c); d is +∞ from Ξ⁻¹(1−c) on.
        assert_eq!(f.boundaries_at(&BaseMeasure::standard_gaussian(), 0.3).0, f64::NEG_INFINITY);
        assert!(f.boundaries_at(&BaseMeasure::standard_gaussian(), 0.3 + 1e-12).0.is_finite());
        assert_eq!(f.boundaries_at(&BaseMeasure::standard_gaussian(), 0.7).1, f64::INFINITY);
        assert!(f.boundaries_at(&BaseMeasure::standard_gaussian(), 0.7 - 1e-12).1.is_finite());
    }

    #[test]
    fn privatization_interval_examples() {
        let f = gauss(0.5);
        let p = f.privatization_interval(0.0);
        assert_eq!(p.quantiles, QuantileInterval { lo: 0.25, hi: 0.75 });
        assert!((p.lo - normal_quantile(0.25)).abs() < 1e-15);
        assert!((p.hi - normal_quantile(0.75)).abs() < 1e-15);

        let p = f.privatization_interval(-10.0);
        assert_eq!(p.quantiles, QuantileInterval { lo: 0.0, hi: 0.5 });
        assert_eq!(p.lo, f64::NEG_INFINITY);
        assert_eq!(p.hi, 0.0);
    }

    #[test]
    fn rejects_bad_configuration() {
        assert!(BoundaryFamily::full_line(BaseMeasure::standard_gaussian(), 0.0).is_err());
        assert!(BoundaryFamily::full_line(BaseMeasure::standard_gaussian(), 1.0).is_err());
        assert!(
            BoundaryFamily::full_line(BaseMeasure::folded_normal(0.0, Side::Positive), 0.2).is_err()
        );
        assert!(BoundaryFamily::half_line_pair(
            0.0,
            BaseMeasure::folded_normal(1.0, Side::Positive),
            BaseMeasure::folded_normal(0.0, Side::Negative),
            0.2
        )
        .is_err());
    }

    #[test]
    fn half_line_boundaries_stay_on_their_side() {
        let f = BoundaryFamily::folded_pair(0.0, 0.3).unwrap();
        for i in 1..400 {
            let x0 = i as f64 / 50.0;
            assert!(f.g_c(x0) >= 0.0 && f.d_c(x0) >= 0.0);
            assert!(f.g_c(-x0) <= 0.0 && f.d_c(-x0) <= 0.0);
        }
        assert_eq!(f.g_c(0.01), 0.0);
        assert_eq!(f.d_c(-0.01), 0.0);
        assert_eq!(f.d_c(5.0), f64::INFINITY);
        assert_eq!(f.g_c(-5.0), f64::NEG_INFINITY);
    }

    fn family(kind: usize, c: f64) -> BoundaryFamily {
        match kind {
            0 => gauss(c),
            1 => BoundaryFamily::full_line(BaseMeasure::standard_cauchy(), c).unwrap(),
            2 => BoundaryFamily::full_line(BaseMeasure::Gaussian { mean: 0.5, sd: 2.0 }, c).unwrap(),
            _ => BoundaryFamily::folded_pair(0.0, c).unwrap(),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn mass_c_identity(kind in 0usize..4, c in 0.001f64..0.999, x in -30.0f64..30.0) {
            let f = family(kind, c);
            let p = f.privatization_interval(x);
            let (base, _) = f.base_for(x);
            let mass = base.cdf(p.hi) - base.cdf(p.lo);
            prop_assert!((mass - c).abs() <= 1e-10, "mass {mass} vs c {c}");
            prop_assert!((p.quantiles.width() - c).abs() <= 1e-15);
        }

        #[test]
        fn boundaries_are_monotone(kind in 0usize..4, c in 0.01f64..0.99, mut xs in proptest::array::uniform2(-10.0f64..10.0)) {
            xs.sort_by(f64::total_cmp);
            let f = family(kind, c);
            let same_side = f.base_for(xs[0]).1 == f.base_for(xs[1]).1;
            // The f64 quantile is monotone only up to a few ulps.
            let le = |a: f64, b: f64| a <= b || a - b <= 4.0 * f64::EPSILON * a.abs().max(b.abs());
            if same_side {
                prop_assert!(le(f.g_c(xs[0]), f.g_c(xs[1])));
                prop_assert!(le(f.d_c(xs[0]), f.d_c(xs[1])));
            }
            prop_assert!(f.g_c(xs[0]) < f.d_c(xs[0]));
        }
    }

    #[test]
    fn duality_on_grid() {
        for kind in 0..4 {
            for &c in &[0.05, 0.2, 0.5, 0.8] {
                let f = family(kind, c);
                let grid: Vec<f64> = (0..100).map(|i| -4.0 + 8.0 * (i as f64 + 0.37) / 100.0).collect();
                for &x in &grid {
                    let p = f.privatization_interval(x);
                    let (_, side) = f.base_for(x);
                    for &x0 in &grid {
                        let near = |b: f64| b.is_finite() && (x0 - b).abs() < 1e-9;
                        if near(p.lo) || near(p.hi) {
                            continue;
                        }
                        let rhs = f.base_for(x0).1 == side && p.lo <= x0 && x0 <= p.hi;
                        assert_eq!(f.covers(x0, x), rhs, "kind={kind} c={c} x={x} x0={x0}");
                    }
                }
            }
        }
    }

    #[test]
    fn level_set_matches_covers() {
        let f = BoundaryFamily::folded_pair(0.0, 0.4).unwrap();
        for x0 in [-3.0, -0.2, 0.05, 0.9, 4.0] {
            let set = f.level_set(x0);
            for i in -300..=300 {
                let x = i as f64 / 50.0;
                assert_eq!(set.contains(x), f.covers(x0, x), "x0={x0} x={x}");
            }
        }
    }
}
