//! Globally adaptive composite Gauss–Legendre quadrature with mandatory breakpoints.
//!
//! Each panel carries a coarse estimate (one 10-point rule over the panel) and a fine
//! estimate (the rule applied to both halves). Their difference is the panel's error
//! estimate; the panel with the largest error is bisected until the summed error meets
//! the tolerance. Integrands are vector-valued so several functionals can share the
//! same nodes, which keeps linear identities between them exact up to rounding.
//!
//! Final sums are reduced in left-to-right panel order, so results are bit-stable.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const ORDER: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    /// Absolute floor so integrals that are legitimately ~0 still terminate.
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-15,
            max_panels: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
    pub panels: usize,
}

fn legendre_rule() -> &'static ([f64; ORDER], [f64; ORDER]) {
    static RULE: OnceLock<([f64; ORDER], [f64; ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER;
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        for i in 0..n {
            // Newton on P_n starting from the Chebyshev-like guess.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

fn rule<const N: usize, F: Fn(f64) -> [f64; N]>(f: &F, a: f64, b: f64) -> [f64; N] {
    let (nodes, weights) = legendre_rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = [0.0; N];
    for (x, w) in nodes.iter().zip(weights) {
        let v = f(mid + half * x);
        for j in 0..N {
            acc[j] += w * v[j];
        }
    }
    acc.map(|s| s * half)
}

#[derive(Debug, Clone)]
struct Panel<const N: usize> {
    a: f64,
    b: f64,
    left: [f64; N],
    right: [f64; N],
    error: f64,
}

impl<const N: usize> Panel<N> {
    fn new<F: Fn(f64) -> [f64; N]>(f: &F, a: f64, b: f64, coarse: [f64; N]) -> Self {
        let m = 0.5 * (a + b);
        let left = rule(f, a, m);
        let right = rule(f, m, b);
        let error = (0..N)
            .map(|j| (left[j] + right[j] - coarse[j]).abs())
            .fold(0.0, f64::max);
        Panel {
            a,
            b,
            left,
            right,
            error,
        }
    }

    fn value(&self) -> [f64; N] {
        let mut v = [0.0; N];
        for j in 0..N {
            v[j] = self.left[j] + self.right[j];
        }
        v
    }
}

/// Integrate `f` over `[a, b]`, forcing panel boundaries at every breakpoint strictly inside.
///
/// Convergence is declared when the summed panel error is at most
/// `rel_tol · max_j |I_j| + abs_tol`.
pub fn integrate<const N: usize, F>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Integral<N>>
where
    F: Fn(f64) -> [f64; N],
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::config("quadrature bounds must be finite"));
    }
    if a > b {
        return Err(Error::Ordering { lo: a, hi: b });
    }
    if a == b {
        return Ok(Integral {
            value: [0.0; N],
            error: 0.0,
            panels: 0,
        });
    }

    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);

    let mut panels: Vec<Panel<N>> = edges
        .windows(2)
        .map(|w| Panel::new(&f, w[0], w[1], rule(&f, w[0], w[1])))
        .collect();

    loop {
        let (total, error) = summarize(&mut panels);
        let scale = total.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let target = spec.rel_tol * scale + spec.abs_tol;
        if error <= target {
            return Ok(Integral {
                value: total,
                error,
                panels: panels.len(),
            });
        }
        if panels.len() >= spec.max_panels {
            return Err(Error::Quadrature {
                achieved: error,
                target,
                panels: panels.len(),
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let m = 0.5 * (p.a + p.b);
        if !(m > p.a && m < p.b) {
            // Panel cannot be bisected in floating point any more.
            return Err(Error::Quadrature {
                achieved: error,
                target,
                panels: panels.len() + 1,
            });
        }
        panels.push(Panel::new(&f, p.a, m, p.left));
        panels.push(Panel::new(&f, m, p.b, p.right));
    }
}

fn summarize<const N: usize>(panels: &mut [Panel<N>]) -> ([f64; N], f64) {
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut total = [0.0; N];
    let mut error = 0.0;
    for p in panels.iter() {
        let v = p.value();
        for j in 0..N {
            total[j] += v[j];
        }
        error += p.error;
    }
    (total, error)
}

/// Scalar convenience wrapper around [`integrate`].
pub fn integrate_scalar<F>(f: F, a: f64, b: f64, breakpoints: &[f64], spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate(|x| [f(x)], a, b, breakpoints, spec).map(|r| r.value[0])
}
