//! Finitely supported measures on the extremal set `E`.
//!
//! An element `r ∈ E` takes the value `e^α` on its level set `F⁺` and `1` elsewhere; it is
//! stored as a [`StepFunction`] holding `F⁺` as a finite union of intervals. Because every
//! atom is piecewise constant in `x`, normalization can be checked exactly on the cells of
//! the common breakpoint partition.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Extended-real interval. Infinite ends are always open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: lo_closed && lo.is_finite(),
            hi_closed: hi_closed && hi.is_finite(),
        }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, false, false)
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, true, true)
    }

    pub fn real_line() -> Self {
        Self::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Disjoint, sorted union of intervals in canonical form: touching pieces are merged,
/// empty pieces dropped, so equal sets compare equal.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

fn cmp_lower(a: &Interval, b: &Interval) -> Ordering {
    a.lo.total_cmp(&b.lo)
        .then_with(|| b.lo_closed.cmp(&a.lo_closed))
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { parts: Vec::new() }
    }

    pub fn real_line() -> Self {
        IntervalSet {
            parts: vec![Interval::real_line()],
        }
    }

    pub fn from_intervals(mut parts: Vec<Interval>) -> Self {
        parts.retain(|p| !p.is_empty());
        parts.sort_by(cmp_lower);
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            if let Some(last) = merged.last_mut() {
                let touches = p.lo < last.hi || (p.lo == last.hi && (p.lo_closed || last.hi_closed));
                if touches {
                    match p.hi.total_cmp(&last.hi) {
                        Ordering::Greater => {
                            last.hi = p.hi;
                            last.hi_closed = p.hi_closed;
                        }
                        Ordering::Equal => last.hi_closed |= p.hi_closed,
                        Ordering::Less => {}
                    }
                    continue;
                }
            }
            merged.push(p);
        }
        IntervalSet { parts: merged }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.parts.len() + 1);
        let mut lo = f64::NEG_INFINITY;
        let mut lo_closed = false;
        for p in &self.parts {
            out.push(Interval::new(lo, p.lo, lo_closed, !p.lo_closed));
            lo = p.hi;
            lo_closed = !p.hi_closed;
        }
        out.push(Interval::new(lo, f64::INFINITY, lo_closed, false));
        Self::from_intervals(out)
    }

    /// Finite endpoints, for building the common refinement of several sets.
    pub fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.parts
            .iter()
            .flat_map(|p| [p.lo, p.hi])
            .filter(|x| x.is_finite())
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// `r(x) = 1 + (e^α − 1)·1{x ∈ F⁺}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    pub level_set: IntervalSet,
    pub alpha: f64,
}

impl StepFunction {
    pub fn new(level_set: IntervalSet, alpha: f64) -> Self {
        StepFunction { level_set, alpha }
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        if self.level_set.contains(x) {
            self.alpha.exp()
        } else {
            1.0
        }
    }

    /// The swap `T(r) = e^α + 1 − r`: the level set is replaced by its complement.
    pub fn apply_t(&self) -> Self {
        StepFunction {
            level_set: self.level_set.complement(),
            alpha: self.alpha,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub weight: f64,
    pub level_set: IntervalSet,
}

/// Weighted atoms with equal level sets coalesced, in first-seen order.
fn coalesce(atoms: impl IntoIterator<Item = Atom>) -> Vec<Atom> {
    let mut out: Vec<Atom> = Vec::new();
    for a in atoms {
        match out.iter_mut().find(|b| b.level_set == a.level_set) {
            Some(b) => b.weight += a.weight,
            None => out.push(a),
        }
    }
    out
}

/// Nonnegative finitely supported measure on `E`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMeasureOnE {
    alpha: f64,
    atoms: Vec<Atom>,
}

/// Result of [`FiniteMeasureOnE::check_normalized`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationCheck {
    pub normalized: bool,
    /// Cell with the largest deviation from 1 and the value found there.
    pub worst_cell: (f64, f64),
    pub worst_value: f64,
}

pub const NORMALIZATION_TOL: f64 = 1e-12;

impl FiniteMeasureOnE {
    pub fn new(alpha: f64, atoms: impl IntoIterator<Item = (f64, IntervalSet)>) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::config(format!("α must be finite and ≥ 0, got {alpha}")));
        }
        let mut list = Vec::new();
        for (weight, level_set) in atoms {
            if !(weight >= 0.0 && weight.is_finite()) {
                return Err(Error::config(format!("atom weight must be finite and ≥ 0, got {weight}")));
            }
            list.push(Atom { weight, level_set });
        }
        Ok(FiniteMeasureOnE {
            alpha,
            atoms: coalesce(list),
        })
    }

    /// Point mass of weight 1 on the step function with level set `level_set`.
    pub fn dirac(alpha: f64, level_set: IntervalSet) -> Result<Self> {
        Self::new(alpha, [(1.0, level_set)])
    }

    /// `(δ_r + δ_{T r}) / (1 + e^α)`, the binary randomized-response measure.
    pub fn two_point(alpha: f64, level_set: IntervalSet) -> Result<Self> {
        let w = 1.0 / (1.0 + alpha.exp());
        let complement = level_set.complement();
        Self::new(alpha, [(w, level_set), (w, complement)])
    }

    /// `1 / (K − 1 + e^α)` on each cell of a partition of ℝ into `K` pieces at `cuts`.
    pub fn partition(alpha: f64, cuts: &[f64]) -> Result<Self> {
        let mut cuts = cuts.to_vec();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let k = cuts.len() + 1;
        let w = 1.0 / ((k - 1) as f64 + alpha.exp());
        let mut edges = vec![f64::NEG_INFINITY];
        edges.extend(cuts);
        edges.push(f64::INFINITY);
        let atoms = edges
            .windows(2)
            .map(|e| (w, IntervalSet::from_intervals(vec![Interval::new(e[0], e[1], false, true)])));
        Self::new(alpha, atoms)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn step_functions(&self) -> impl Iterator<Item = (f64, StepFunction)> + '_ {
        self.atoms
            .iter()
            .map(|a| (a.weight, StepFunction::new(a.level_set.clone(), self.alpha)))
    }

    /// `μ(E)`.
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// `∫ e_x(r) μ(dr)`.
    pub fn evaluate_sum(&self, x: f64) -> f64 {
        let k = self.alpha.exp_m1();
        self.atoms
            .iter()
            .map(|a| a.weight * if a.level_set.contains(x) { 1.0 + k } else { 1.0 })
            .sum()
    }

    pub fn integrate(&self, f: impl Fn(&StepFunction) -> f64) -> f64 {
        self.step_functions().map(|(w, r)| w * f(&r)).sum()
    }

    /// Pushforward under `T`.
    pub fn apply_t(&self) -> Self {
        FiniteMeasureOnE {
            alpha: self.alpha,
            atoms: coalesce(self.atoms.iter().map(|a| Atom {
                weight: a.weight,
                level_set: a.level_set.complement(),
            })),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        FiniteMeasureOnE {
            alpha: self.alpha,
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    weight: a.weight * factor,
                    level_set: a.level_set.clone(),
                })
                .collect(),
        }
    }

    /// Convex combination `λ·self + (1−λ)·other`; both must share α.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.alpha != other.alpha {
            return Err(Error::config("cannot mix measures built for different α"));
        }
        let atoms = self
            .scaled(lambda)
            .atoms
            .into_iter()
            .chain(other.scaled(1.0 - lambda).atoms);
        Ok(FiniteMeasureOnE {
            alpha: self.alpha,
            atoms: coalesce(atoms),
        })
    }

    /// `μ^(s) = (μ + T μ) / ((e^α + 1) μ(E))`: normalized and `T`-invariant for any input.
    pub fn symmetrize(&self) -> Result<Self> {
        let mass = self.total_mass();
        if !(mass > 0.0) {
            return Err(Error::Degenerate(
                "cannot symmetrize a measure with zero total mass".into(),
            ));
        }
        let scale = 1.0 / ((self.alpha.exp() + 1.0) * mass);
        let atoms = self
            .atoms
            .iter()
            .cloned()
            .chain(self.apply_t().atoms)
            .map(|a| Atom {
                weight: a.weight * scale,
                level_set: a.level_set,
            });
        Ok(FiniteMeasureOnE {
            alpha: self.alpha,
            atoms: coalesce(atoms),
        })
    }

    /// `μ^(as) = μ − μ^(s)` as a signed measure.
    pub fn asymmetric_part(&self) -> Result<SignedMeasureOnE> {
        let sym = self.symmetrize()?;
        let atoms = self.atoms.iter().cloned().chain(sym.atoms.into_iter().map(|a| Atom {
            weight: -a.weight,
            level_set: a.level_set,
        }));
        Ok(SignedMeasureOnE {
            alpha: self.alpha,
            atoms: coalesce(atoms),
        })
    }

    /// Representative points of each open cell of the common breakpoint partition.
    fn cells(&self) -> Vec<(f64, f64, f64)> {
        let mut pts: Vec<f64> = self
            .atoms
            .iter()
            .flat_map(|a| a.level_set.breakpoints().collect::<Vec<_>>())
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        if pts.is_empty() {
            return vec![(f64::NEG_INFINITY, f64::INFINITY, 0.0)];
        }
        let mut cells = Vec::with_capacity(pts.len() + 1);
        cells.push((f64::NEG_INFINITY, pts[0], pts[0] - 1.0));
        for w in pts.windows(2) {
            cells.push((w[0], w[1], 0.5 * (w[0] + w[1])));
        }
        let last = pts[pts.len() - 1];
        cells.push((last, f64::INFINITY, last + 1.0));
        cells
    }

    /// Checks `Σ wᵢ rᵢ(x) = 1` on every open cell of the breakpoint partition (the sum is
    /// constant there; breakpoints themselves are a null set).
    pub fn check_normalized(&self) -> NormalizationCheck {
        let mut worst = NormalizationCheck {
            normalized: true,
            worst_cell: (f64::NEG_INFINITY, f64::INFINITY),
            worst_value: 1.0,
        };
        let mut worst_dev = -1.0;
        for (lo, hi, x) in self.cells() {
            let v = self.evaluate_sum(x);
            let dev = (v - 1.0).abs();
            if dev > worst_dev {
                worst_dev = dev;
                worst.worst_cell = (lo, hi);
                worst.worst_value = v;
            }
        }
        worst.normalized = worst_dev <= NORMALIZATION_TOL;
        worst
    }

    pub fn require_normalized(&self) -> Result<()> {
        let check = self.check_normalized();
        if check.normalized {
            Ok(())
        } else {
            Err(Error::NotNormalized {
                cell_lo: check.worst_cell.0,
                cell_hi: check.worst_cell.1,
                value: check.worst_value,
            })
        }
    }

    /// Atom-wise comparison up to `tol` in weight; atoms lighter than `tol` are ignored.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let a = SignedMeasureOnE {
            alpha: self.alpha,
            atoms: self.atoms.clone(),
        };
        let b = SignedMeasureOnE {
            alpha: other.alpha,
            atoms: other.atoms.clone(),
        };
        self.alpha == other.alpha && a.difference(&b).max_abs_weight() <= tol
    }
}

/// Signed finitely supported measure on `E`; only produced by
/// [`FiniteMeasureOnE::asymmetric_part`].
#[derive(Debug, Clone, PartialEq)]
pub struct SignedMeasureOnE {
    alpha: f64,
    atoms: Vec<Atom>,
}

impl SignedMeasureOnE {
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn integrate(&self, f: impl Fn(&StepFunction) -> f64) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.weight * f(&StepFunction::new(a.level_set.clone(), self.alpha)))
            .sum()
    }

    pub fn apply_t(&self) -> Self {
        SignedMeasureOnE {
            alpha: self.alpha,
            atoms: coalesce(self.atoms.iter().map(|a| Atom {
                weight: a.weight,
                level_set: a.level_set.complement(),
            })),
        }
    }

    pub fn max_abs_weight(&self) -> f64 {
        self.atoms.iter().fold(0.0, |m, a| m.max(a.weight.abs()))
    }

    fn difference(&self, other: &Self) -> Self {
        let atoms = self.atoms.iter().cloned().chain(other.atoms.iter().map(|a| Atom {
            weight: -a.weight,
            level_set: a.level_set.clone(),
        }));
        SignedMeasureOnE {
            alpha: self.alpha,
            atoms: coalesce(atoms),
        }
    }

    /// `self + other` atom-wise, compared against `target`.
    pub fn plus_matches(&self, other: &FiniteMeasureOnE, target: &FiniteMeasureOnE, tol: f64) -> bool {
        let sum = SignedMeasureOnE {
            alpha: self.alpha,
            atoms: coalesce(self.atoms.iter().cloned().chain(other.atoms.iter().cloned())),
        };
        let t = SignedMeasureOnE {
            alpha: target.alpha,
            atoms: target.atoms.clone(),
        };
        sum.difference(&t).max_abs_weight() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const INF: f64 = f64::INFINITY;

    fn set(parts: &[Interval]) -> IntervalSet {
        IntervalSet::from_intervals(parts.to_vec())
    }

    #[test]
    fn evaluate_examples() {
        let a = 0.8;
        let empty = StepFunction::new(IntervalSet::empty(), a);
        let full = StepFunction::new(IntervalSet::real_line(), a);
        let half = StepFunction::new(set(&[Interval::open(0.0, INF)]), a);
        for x in [-5.0, 0.0, 3.0] {
            assert_eq!(empty.evaluate(x), 1.0);
            assert_eq!(full.evaluate(x), a.exp());
        }
        assert_eq!(half.evaluate(-1.0), 1.0);
        assert_eq!(half.evaluate(1.0), a.exp());
    }

    #[test]
    fn complement_examples() {
        let half = set(&[Interval::open(0.0, INF)]);
        assert_eq!(half.complement(), set(&[Interval::new(-INF, 0.0, false, true)]));
        let mid = set(&[Interval::open(-1.0, 1.0)]);
        assert_eq!(
            mid.complement(),
            set(&[Interval::new(-INF, -1.0, false, true), Interval::new(1.0, INF, true, false)])
        );
        assert_eq!(IntervalSet::empty().complement(), IntervalSet::real_line());
        assert_eq!(IntervalSet::real_line().complement(), IntervalSet::empty());
    }

    #[test]
    fn t_swaps_values_pointwise() {
        let a = 1.1;
        let r = StepFunction::new(set(&[Interval::open(-1.0, 1.0), Interval::closed(2.0, 3.0)]), a);
        let tr = r.apply_t();
        for i in -80..=80 {
            let x = i as f64 / 20.0;
            assert!((tr.evaluate(x) - (a.exp() + 1.0 - r.evaluate(x))).abs() < 1e-15);
        }
    }

    #[test]
    fn canonical_form_merges_touching_pieces() {
        let s = set(&[Interval::new(0.0, 1.0, true, true), Interval::open(1.0, 2.0), Interval::open(5.0, 6.0)]);
        assert_eq!(s.intervals().len(), 2);
        assert_eq!(s.intervals()[0], Interval::new(0.0, 2.0, true, false));
        // Both open at 1: the point 1 is missing, so the pieces stay apart.
        let gap = set(&[Interval::open(0.0, 1.0), Interval::open(1.0, 2.0)]);
        assert_eq!(gap.intervals().len(), 2);
        assert!(!gap.contains(1.0));
    }

    #[test]
    fn symmetrize_dirac_gives_two_point() {
        let a = 0.5;
        let half = set(&[Interval::open(0.0, INF)]);
        let sym = FiniteMeasureOnE::dirac(a, half.clone()).unwrap().symmetrize().unwrap();
        let expected = FiniteMeasureOnE::two_point(a, half).unwrap();
        assert!(sym.approx_eq(&expected, 1e-15));
        assert_eq!(sym.atoms().len(), 2);
        for atom in sym.atoms() {
            assert!((atom.weight - 1.0 / (a.exp() + 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn symmetric_normalized_mass_law() {
        let a = 1.7;
        let m = FiniteMeasureOnE::two_point(a, set(&[Interval::open(-0.3, 2.0)])).unwrap();
        assert!(m.check_normalized().normalized);
        assert!((m.total_mass() - 2.0 / (a.exp() + 1.0)).abs() < 1e-14);
        assert!(m.symmetrize().unwrap().approx_eq(&m, 1e-15));
    }

    #[test]
    fn check_normalized_examples() {
        let a = 0.9;
        let d = FiniteMeasureOnE::dirac(a, set(&[Interval::open(0.0, 1.0)])).unwrap();
        let check = d.check_normalized();
        assert!(!check.normalized);
        assert!((check.worst_value - a.exp()).abs() < 1e-15);
        assert_eq!(check.worst_cell, (0.0, 1.0));
        assert!(matches!(d.require_normalized(), Err(Error::NotNormalized { .. })));
        assert!(d.symmetrize().unwrap().check_normalized().normalized);
        assert!(FiniteMeasureOnE::partition(a, &[-1.0, 0.5, 2.0]).unwrap().check_normalized().normalized);
    }

    #[test]
    fn zero_mass_cannot_be_symmetrized() {
        let m = FiniteMeasureOnE::new(1.0, Vec::<(f64, IntervalSet)>::new()).unwrap();
        assert!(matches!(m.symmetrize(), Err(Error::Degenerate(_))));
        assert!(FiniteMeasureOnE::new(1.0, [(-0.1, IntervalSet::empty())]).is_err());
    }

    #[test]
    fn asymmetric_part_of_symmetric_measure_vanishes() {
        let m = FiniteMeasureOnE::two_point(0.4, set(&[Interval::open(0.0, INF)])).unwrap();
        assert!(m.asymmetric_part().unwrap().max_abs_weight() < 1e-16);
    }

    #[test]
    fn asymmetric_part_of_partition_measure() {
        let m = FiniteMeasureOnE::partition(2.0, &[-0.5, 0.7]).unwrap();
        let asym = m.asymmetric_part().unwrap();
        assert!(asym.max_abs_weight() > 1e-3);
        let sym = m.symmetrize().unwrap();
        assert!(asym.plus_matches(&sym, &m, 1e-15));
        // T-antisymmetric test functional: f(r) = r(x₁) − r(x₂) integrates to its negation under T.
        let f = |r: &StepFunction| r.evaluate(0.1) - 2.0 * r.evaluate(1.3);
        let g = |r: &StepFunction| f(&r.apply_t());
        assert!((asym.apply_t().integrate(f) - asym.integrate(g)).abs() < 1e-14);
    }

    fn arb_set() -> impl Strategy<Value = IntervalSet> {
        proptest::collection::vec((-5.0f64..5.0, 0.01f64..3.0, any::<bool>(), any::<bool>()), 0..4).prop_map(
            |v| {
                IntervalSet::from_intervals(
                    v.into_iter()
                        .map(|(lo, w, a, b)| {
                            let hi = lo + w;
                            let lo = if lo < -4.5 { -INF } else { lo };
                            let hi = if hi > 6.0 { INF } else { hi };
                            Interval::new(lo, hi, a, b)
                        })
                        .collect(),
                )
            },
        )
    }

    fn arb_measure() -> impl Strategy<Value = FiniteMeasureOnE> {
        (0.05f64..5.0, proptest::collection::vec((0.01f64..2.0, arb_set()), 1..5))
            .prop_map(|(a, atoms)| FiniteMeasureOnE::new(a, atoms).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn symmetrize_is_normalized_and_invariant(m in arb_measure()) {
            let s = m.symmetrize().unwrap();
            let check = s.check_normalized();
            prop_assert!(check.normalized, "{check:?}");
            prop_assert!(s.approx_eq(&s.apply_t(), 1e-15));
            prop_assert!((s.total_mass() - 2.0 / (m.alpha().exp() + 1.0)).abs() <= 1e-14);
            prop_assert!(s.symmetrize().unwrap().approx_eq(&s, 1e-14));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn t_is_an_involution(s in arb_set(), a in 0.1f64..3.0) {
            let r = StepFunction::new(s, a);
            prop_assert_eq!(r.apply_t().apply_t(), r);
        }

        #[test]
        fn pushforward_identity(
            m in arb_measure(),
            pts in proptest::collection::vec((-6.0f64..6.0, -2.0f64..2.0), 1..6),
        ) {
            // Piecewise-constant test functional f(r) = Σ βⱼ r(xⱼ).
            let f = |r: &StepFunction| pts.iter().map(|&(x, b)| b * r.evaluate(x)).sum::<f64>();
            let lhs = m.apply_t().integrate(f);
            let rhs = m.integrate(|r| f(&r.apply_t()));
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }
    }
}
