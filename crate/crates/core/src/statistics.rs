//! Variance ⟨|a_n|²⟩_k of the characteristic-polynomial coefficients.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_xoshiro::rand_core::SeedableRng;
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;

use crate::charpoly::coeffs_direct;
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::orbits::IrreducibleSet;
use crate::scattering::EvolutionOperator;

/// Samples handled per parallel task; fixed so sums do not depend on the
/// number of workers.
const CHUNK: usize = 256;
/// Metric tolerance for grouping pseudo orbits by length.
pub const LENGTH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarianceMethod {
    Numeric,
    PairSum,
    Diagonal,
    RmtCoe,
    RmtCue,
}

impl VarianceMethod {
    pub fn tag(self) -> &'static str {
        match self {
            VarianceMethod::Numeric => "numeric",
            VarianceMethod::PairSum => "pair_sum",
            VarianceMethod::Diagonal => "diagonal",
            VarianceMethod::RmtCoe => "rmt_coe",
            VarianceMethod::RmtCue => "rmt_cue",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingInfo {
    pub samples: usize,
    pub k_max: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarianceCurve {
    pub method: VarianceMethod,
    /// Index n = 0..=2B.
    pub values: Vec<f64>,
    /// Standard error of each value (numeric only).
    pub std_err: Option<Vec<f64>>,
    /// Sample mean of a_n and its standard error (numeric only).
    pub mean: Option<Vec<(Complex64, f64)>>,
    pub sampling: Option<SamplingInfo>,
}

impl VarianceCurve {
    fn plain(method: VarianceMethod, values: Vec<f64>) -> Self {
        Self {
            method,
            values,
            std_err: None,
            mean: None,
            sampling: None,
        }
    }

    /// max_n |v_n − v_{2B−n}|
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.values.len();
        (0..n)
            .map(|i| (self.values[i] - self.values[n - 1 - i]).abs())
            .fold(0.0, f64::max)
    }
}

/// The k values used by [`variance_numeric`]: uniform on (0, k_max].
pub fn sample_points(n_samples: usize, k_max: f64, seed: u64) -> Vec<f64> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    (0..n_samples).map(|_| k_max * (1.0 - rng.random::<f64>())).collect()
}

#[derive(Clone)]
struct Partial {
    sq: Vec<f64>,
    sq2: Vec<f64>,
    sum: Vec<Complex64>,
}

impl Partial {
    fn new(n: usize) -> Self {
        Self {
            sq: vec![0.0; n],
            sq2: vec![0.0; n],
            sum: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    fn merge(mut self, other: &Self) -> Self {
        for i in 0..self.sq.len() {
            self.sq[i] += other.sq[i];
            self.sq2[i] += other.sq2[i];
            self.sum[i] += other.sum[i];
        }
        self
    }
}

/// Mean of |a_n(k)|² over `n_samples` uniform k in (0, k_max], with
/// coefficients from the eigenvalues of U(k).
pub fn variance_numeric(op: &EvolutionOperator, n_samples: usize, k_max: f64, seed: u64) -> Result<VarianceCurve> {
    if !(k_max > 0.0) {
        return Err(Error::NonPositiveKmax(k_max));
    }
    let dim = op.dim() + 1;
    let ks = sample_points(n_samples, k_max, seed);
    let partials: Vec<Result<Partial>> = ks
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut p = Partial::new(dim);
            for &k in chunk {
                let c = coeffs_direct(op, Complex64::new(k, 0.0))?;
                for (i, a) in c.a.iter().enumerate() {
                    let x = a.norm_sqr();
                    p.sq[i] += x;
                    p.sq2[i] += x * x;
                    p.sum[i] += a;
                }
            }
            Ok(p)
        })
        .collect();
    let mut total = Partial::new(dim);
    for p in partials {
        total = total.merge(&p?);
    }
    let n = n_samples as f64;
    let se = |s: f64, s2: f64| {
        if n_samples < 2 {
            return 0.0;
        }
        let mean = s / n;
        ((s2 / n - mean * mean).max(0.0) / (n - 1.0)).sqrt()
    };
    let values: Vec<f64> = total.sq.iter().map(|s| s / n).collect();
    let std_err = (0..dim).map(|i| se(total.sq[i], total.sq2[i])).collect();
    let mean = (0..dim)
        .map(|i| {
            let m = total.sum[i] / n;
            (m, se_complex(total.sq[i], m, n))
        })
        .collect();
    Ok(VarianceCurve {
        method: VarianceMethod::Numeric,
        values,
        std_err: Some(std_err),
        mean: Some(mean),
        sampling: Some(SamplingInfo {
            samples: n_samples,
            k_max,
            seed,
        }),
    })
}

/// Standard error of a complex sample mean: sqrt((⟨|x|²⟩ − |⟨x⟩|²)/(N − 1)).
fn se_complex(sum_abs2: f64, mean: Complex64, n: f64) -> f64 {
    if n < 2.0 {
        return 0.0;
    }
    ((sum_abs2 / n - mean.norm_sqr()).max(0.0) / (n - 1.0)).sqrt()
}

fn check_enumeration(set: &IrreducibleSet, op: &EvolutionOperator) -> Result<()> {
    if set.max_total < op.dim() {
        return Err(Error::EnumerationCap {
            have: set.max_total,
            need: op.dim(),
        });
    }
    Ok(())
}

/// Σ_{γ̄, γ̄': B = n, l_γ̄ = l_γ̄'} (−1)^{m+m'} A_γ̄ A*_γ̄'.
///
/// Equal lengths are decided by the undirected visit profile, which is
/// exact for incommensurate bond lengths; with `commensurate` set, metric
/// lengths equal to within [`LENGTH_TOL`] are grouped instead.
pub fn variance_pair(set: &IrreducibleSet, op: &EvolutionOperator, commensurate: bool) -> Result<VarianceCurve> {
    check_enumeration(set, op)?;
    let g = op.graph();
    let dim = op.dim() + 1;
    let amps = set.amplitudes(op);
    let mut values = vec![0.0; dim];
    if commensurate {
        let mut by_n: Vec<Vec<(f64, Complex64)>> = vec![Vec::new(); dim];
        for (p, a) in set.pseudo.iter().zip(&amps) {
            by_n[p.topological_length].push((p.metric_length, p.sign() * a));
        }
        for (n, mut list) in by_n.into_iter().enumerate() {
            list.sort_by(|x, y| x.0.total_cmp(&y.0));
            let mut total = 0.0;
            let mut i = 0;
            while i < list.len() {
                let mut s = CompensatedSum::default();
                let start = list[i].0;
                while i < list.len() && list[i].0 - start <= LENGTH_TOL * start.max(1.0) {
                    s.add(list[i].1);
                    i += 1;
                }
                total += s.value().norm_sqr();
            }
            values[n] = total;
        }
    } else {
        let mut groups: Vec<BTreeMap<Vec<u32>, CompensatedSum>> = vec![BTreeMap::new(); dim];
        for (p, a) in set.pseudo.iter().zip(&amps) {
            groups[p.topological_length]
                .entry(p.undirected_profile(g))
                .or_default()
                .add(p.sign() * a);
        }
        for (n, grp) in groups.iter().enumerate() {
            values[n] = grp.values().map(|s| s.value().norm_sqr()).sum();
        }
    }
    Ok(VarianceCurve::plain(VarianceMethod::PairSum, values))
}

/// Diagonal approximation Σ_{B_γ̄ = n} 2^{m_γ̄} |A_γ̄|².
pub fn variance_diagonal(set: &IrreducibleSet, op: &EvolutionOperator) -> Result<VarianceCurve> {
    check_enumeration(set, op)?;
    let mut values = vec![0.0; op.dim() + 1];
    for (p, a) in set.pseudo.iter().zip(set.amplitudes(op)) {
        values[p.topological_length] += 2f64.powi(p.orbit_count() as i32) * a.norm_sqr();
    }
    Ok(VarianceCurve::plain(VarianceMethod::Diagonal, values))
}

/// COE: 1 + n(2B − n)/(2B + 1); CUE: 1.
pub fn variance_rmt(bonds: usize, method: VarianceMethod) -> VarianceCurve {
    let two_b = 2 * bonds;
    let values = (0..=two_b)
        .map(|n| match method {
            VarianceMethod::RmtCoe => 1.0 + (n * (two_b - n)) as f64 / (two_b + 1) as f64,
            _ => 1.0,
        })
        .collect();
    let method = if method == VarianceMethod::RmtCoe {
        VarianceMethod::RmtCoe
    } else {
        VarianceMethod::RmtCue
    };
    VarianceCurve::plain(method, values)
}
