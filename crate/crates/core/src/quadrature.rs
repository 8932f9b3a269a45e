//! Adaptive composite Gauss–Legendre quadrature.
//!
//! Each panel is integrated with a 15-point rule and compared against the
//! sum over its two halves; panels are bisected until the difference drops
//! below the panel tolerance. Panels are summed in left-to-right order.

use std::sync::OnceLock;

const ORDER: usize = 15;
const MAX_DEPTH: u32 = 60;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [−1, 1],
/// computed by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Absolute tolerance per panel.
    pub panel_tol: f64,
    /// Relative tolerance per panel, applied to the panel's value.
    pub rel_tol: f64,
    /// Integrand magnitude below which the [1, ∞) tail is cut.
    pub tail_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            panel_tol: 1e-12,
            rel_tol: 1e-14,
            tail_tol: 1e-14,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
    /// Some panel hit the depth limit without meeting its tolerance.
    pub unconverged: bool,
}

impl Quadrature {
    pub fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error: self.error + other.error,
            panels: self.panels + other.panels,
            unconverged: self.unconverged || other.unconverged,
        }
    }
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (x, w) = rule();
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    half * x.iter().zip(w).map(|(&xi, &wi)| wi * f(mid + half * xi)).sum::<f64>()
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, cfg: &QuadratureConfig, depth: u32) -> Quadrature {
    let m = 0.5 * (a + b);
    let left = panel(f, a, m);
    let right = panel(f, m, b);
    let diff = (left + right - whole).abs();
    let tol = cfg.panel_tol.max(cfg.rel_tol * (left + right).abs());
    if diff <= tol || !diff.is_finite() || depth >= MAX_DEPTH || m <= a || m >= b {
        return Quadrature {
            value: left + right,
            error: diff,
            panels: 2,
            unconverged: diff > tol,
        };
    }
    adapt(f, a, m, left, cfg, depth + 1).combine(adapt(f, m, b, right, cfg, depth + 1))
}

/// ∫_a^b f with adaptive bisection.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Quadrature {
    if a == b {
        return Quadrature::default();
    }
    let whole = panel(&f, a, b);
    adapt(&f, a, b, whole, cfg, 0)
}

/// ∫ over consecutive breakpoints, summed left to right.
pub fn integrate_breakpoints<F: Fn(f64) -> f64>(f: F, points: &[f64], cfg: &QuadratureConfig) -> Quadrature {
    points
        .windows(2)
        .map(|w| integrate(&f, w[0], w[1], cfg))
        .fold(Quadrature::default(), Quadrature::combine)
}
