//! Roots of the secular function on (0, k_max].
//!
//! A uniform scan brackets sign changes, which are bisected. Local minima of
//! |F| without a sign change are examined through F′: a vanishing F at the
//! critical point marks an even-order root, a sign flip marks a close pair.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::secular::SecularExpansion;
use crate::scattering::EvolutionOperator;

pub const DEFAULT_OVERSAMPLE: usize = 8;
/// Root refinement tolerance in k.
pub const ROOT_TOL: f64 = 1e-12;
/// |F| / max(1, scale) below which a critical point counts as a root.
pub const DEGENERATE_TOL: f64 = 1e-9;
/// Singular-value threshold used to read off multiplicities.
pub const KERNEL_TOL: f64 = 1e-6;
/// Allowed deviation of the root count from [`weyl_estimate`].
pub const WEYL_TOL: f64 = 2.0;

/// Smooth part of the counting function with the zero mode removed:
/// ℒk/π + (V − B)/2 − 1.
pub fn weyl_estimate(g: &crate::graph::MetricGraph, k: f64) -> f64 {
    g.total_length() * k / std::f64::consts::PI + 0.5 * (g.vertex_count() as f64 - g.bond_count() as f64) - 1.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    pub k: f64,
    pub multiplicity: usize,
    /// |det(I − U(k))|
    pub residual: f64,
    /// Smallest singular value of I − U(k).
    pub min_singular: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub roots: Vec<Root>,
    pub kernel_dim_at_zero: usize,
    pub theta: f64,
    pub k_max: f64,
    pub grid_step: f64,
    pub tolerance: f64,
    pub warnings: Vec<String>,
}

impl SpectrumResult {
    /// Roots repeated according to multiplicity.
    pub fn eigenvalues_k(&self) -> Vec<f64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.k, r.multiplicity))
            .collect()
    }

    pub fn count(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if b - a <= ROOT_TOL || m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Roots found inside one grid cell pair, in ascending order.
fn refine_cell(ex: &SecularExpansion, k: &[f64], f: &[f64], i: usize, threshold: f64) -> Vec<f64> {
    let sec = |x: f64| ex.secular_real(x);
    let mut out = Vec::new();
    if f[i] == 0.0 {
        out.push(k[i]);
    }
    if i + 1 < k.len() && f[i] * f[i + 1] < 0.0 {
        out.push(bisect(&sec, k[i], k[i + 1], f[i]));
    }
    // Local minimum of |F| at an interior grid point with no sign change.
    if i > 0 && i + 1 < k.len() && f[i] != 0.0 {
        let (l, m, r) = (f[i - 1].abs(), f[i].abs(), f[i + 1].abs());
        let same = f[i - 1] * f[i] > 0.0 && f[i] * f[i + 1] > 0.0;
        if same && m < l && m <= r {
            let d = |x: f64| ex.secular_derivative(Complex64::new(x, 0.0)).re;
            let (a, b) = (k[i - 1], k[i + 1]);
            let (da, db) = (d(a), d(b));
            if da * db < 0.0 {
                let c = bisect(&d, a, b, da);
                let fc = sec(c);
                if fc.abs() < threshold {
                    out.push(c);
                } else if (fc > 0.0) != (f[i] > 0.0) {
                    out.push(bisect(&sec, a, c, f[i - 1]));
                    out.push(bisect(&sec, c, b, fc));
                }
            }
        }
    }
    out
}

/// All roots of F on (0, k_max], scanning at step π/(ℒ·oversample).
pub fn find_spectrum(ex: &SecularExpansion, op: &EvolutionOperator, k_max: f64, oversample: usize) -> Result<SpectrumResult> {
    if !(k_max > 0.0) || !k_max.is_finite() {
        return Err(Error::NonPositiveKmax(k_max));
    }
    let oversample = oversample.max(2);
    let total = ex.total_length();
    let step = std::f64::consts::PI / (total * oversample as f64);
    let n = (k_max / step).ceil() as usize;
    // k_1 ≥ π/ℒ for connected Neumann graphs, so the scan starts at one step.
    let k: Vec<f64> = (1..=n).map(|i| (i as f64 * step).min(k_max)).collect();
    let f: Vec<f64> = k.par_iter().map(|&x| ex.secular_real(x)).collect();
    let threshold = DEGENERATE_TOL * ex.scale().max(1.0);

    let found: Vec<Vec<f64>> = (0..k.len())
        .into_par_iter()
        .map(|i| refine_cell(ex, &k, &f, i, threshold))
        .collect();
    let mut ks: Vec<f64> = found.into_iter().flatten().filter(|&x| x > 0.0 && x <= k_max).collect();
    ks.sort_by(f64::total_cmp);
    ks.dedup_by(|a, b| (*a - *b).abs() <= 10.0 * ROOT_TOL);

    let roots: Vec<Root> = ks
        .par_iter()
        .map(|&x| {
            let z = Complex64::new(x, 0.0);
            let sv = op.secular_singular_values(z);
            let kernel = sv.iter().filter(|&&s| s < KERNEL_TOL).count();
            let n = op.dim();
            let m = nalgebra::DMatrix::<Complex64>::identity(n, n) - op.evolution(z);
            Root {
                k: x,
                multiplicity: kernel.max(1),
                residual: m.determinant().norm(),
                min_singular: sv[0],
            }
        })
        .collect();

    let mut out = SpectrumResult {
        kernel_dim_at_zero: op.kernel_dim(0.0, KERNEL_TOL),
        theta: ex.theta(),
        k_max,
        grid_step: step,
        tolerance: ROOT_TOL,
        roots,
        warnings: Vec::new(),
    };
    let expected = weyl_estimate(op.graph(), k_max);
    let count = out.count() as f64;
    if (count - expected).abs() > WEYL_TOL {
        out.warnings.push(format!(
            "root count {count} differs from Weyl estimate {expected:.3} by more than {WEYL_TOL}; \
             roots may be missing, try a larger oversample"
        ));
    }
    Ok(out)
}
