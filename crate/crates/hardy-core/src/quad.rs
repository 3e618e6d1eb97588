//! Adaptive composite Gauss–Legendre quadrature over the whole real line.
//!
//! The substitution `t = tan θ` maps `ℝ` onto `(-π/2, π/2)`; every integrand
//! the crate produces decays polynomially, so the substituted integrand is
//! smooth except at images of listed singularities, which become panel
//! boundaries. Refinement halves every panel (the rule order stays fixed)
//! until the relative change drops under the tolerance or the doubling cap is
//! reached, in which case the result carries a non-convergence flag.
//!
//! Nodes are strictly interior to their panels, so a listed singularity is
//! never evaluated.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::tol;

/// Quadrature settings. `base_nodes` is the initial node count spread over
/// the panels, `tol` the relative refinement target.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    pub base_nodes: usize,
    pub tol: f64,
    pub max_doublings: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            base_nodes: tol::DEFAULT_BASE_NODES,
            tol: tol::DEFAULT_QUAD_TOL,
            max_doublings: tol::DEFAULT_MAX_DOUBLINGS,
        }
    }
}

impl QuadratureConfig {
    /// Clamp to the legal ranges (nodes >= 32, 0 < tol <= 1e-2).
    pub fn validated(self) -> Option<Self> {
        if self.base_nodes < 32 || !(self.tol > 0.0 && self.tol <= 1e-2) {
            None
        } else {
            Some(self)
        }
    }
}

/// Integral value with refinement diagnostics.
#[derive(Debug, Clone)]
pub struct QuadratureOutcome {
    pub value: Complex64,
    /// Absolute change at the last refinement, the error proxy.
    pub error_estimate: f64,
    pub converged: bool,
    /// `(node_count, value)` per refinement level.
    pub history: Vec<(usize, Complex64)>,
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    let m = n;
    for i in 0..m {
        // Standard initial guess followed by Newton on P_n.
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(core::cmp::Ordering::Equal));
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrate `f` over `ℝ` with panel splits at the listed real singularities.
pub fn integrate_real_line<F>(f: F, split_points: &[f64], cfg: &QuadratureConfig) -> QuadratureOutcome
where
    F: Fn(f64) -> Complex64,
{
    let half_pi = core::f64::consts::FRAC_PI_2;
    let mut cuts: Vec<f64> = split_points.iter().map(|&p| p.atan()).collect();
    cuts.push(-half_pi);
    cuts.push(half_pi);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);

    // Substituted integrand g(θ) = f(tan θ) sec²θ.
    let g = |theta: f64| -> Complex64 {
        let c = theta.cos();
        f(theta.tan()) / (c * c)
    };

    let rule = gauss_legendre(tol::NODES_PER_PANEL);
    let total_len: f64 = cuts.windows(2).map(|w| w[1] - w[0]).sum();
    let target_panels = (cfg.base_nodes / tol::NODES_PER_PANEL).max(1);

    // Initial panel layout: each segment gets panels proportional to length.
    let mut panels: Vec<(f64, f64)> = Vec::new();
    for w in cuts.windows(2) {
        let len = w[1] - w[0];
        if len <= 0.0 {
            continue;
        }
        let k = ((len / total_len * target_panels as f64).ceil() as usize).max(1);
        for i in 0..k {
            let a = w[0] + len * (i as f64) / (k as f64);
            let b = w[0] + len * ((i + 1) as f64) / (k as f64);
            panels.push((a, b));
        }
    }

    let sum_panels = |panels: &[(f64, f64)]| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(a, b) in panels {
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            let mut local = Complex64::new(0.0, 0.0);
            for &(x, w) in &rule {
                local += g(mid + half * x) * w;
            }
            acc += local * half;
        }
        acc
    };

    let mut value = sum_panels(&panels);
    let mut history = alloc::vec![(panels.len() * tol::NODES_PER_PANEL, value)];
    let mut error = f64::INFINITY;
    let mut converged = false;

    for _ in 0..cfg.max_doublings {
        let mut refined: Vec<(f64, f64)> = Vec::with_capacity(panels.len() * 2);
        for &(a, b) in &panels {
            let m = 0.5 * (a + b);
            refined.push((a, m));
            refined.push((m, b));
        }
        panels = refined;
        let next = sum_panels(&panels);
        error = (next - value).norm();
        value = next;
        history.push((panels.len() * tol::NODES_PER_PANEL, value));
        if error <= cfg.tol * (1.0 + value.norm()) {
            converged = true;
            break;
        }
    }

    QuadratureOutcome {
        value,
        error_estimate: error,
        converged,
        history,
    }
}

/// Mean of `f` over the unit circle, `(1/2π) ∮ f(e^{iθ}) dθ`, by the uniform
/// angle rule. Nodes sit at midpoints so flagged angles are never evaluated;
/// for periodic integrands this has the same spectral accuracy as the
/// trapezoidal rule.
pub fn circle_mean<F>(f: F, nodes: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let n = nodes.max(4);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let theta = 2.0 * core::f64::consts::PI * (k as f64 + 0.5) / (n as f64);
        acc += f(theta);
    }
    acc / (n as f64)
}
