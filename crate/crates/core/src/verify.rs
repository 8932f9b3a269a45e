//! Oracle-equivalence suite run by `qgraph verify`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::charpoly::{
    coeffs_direct, coeffs_newton, coeffs_partition, coeffs_primitive_expansion, coeffs_pseudo_orbit,
    lemma_partition_identity, CoefficientVector, PARTITION_CAP,
};
use crate::error::Result;
use crate::graph::MetricGraph;
use crate::orbits::{enumerate_irreducible_pseudo_orbits, PRIMITIVE_CAP};
use crate::scattering::bond_scattering_matrix;
use crate::secular::{secular_direct, SecularExpansion};
use crate::spectrum::KERNEL_TOL;
use crate::statistics::sample_points;

pub const K_RANGE: f64 = 50.0;
pub const T_RANGE: (f64, f64) = (0.01, 50.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub samples: usize,
    pub seed: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    /// Fixed-width pass/fail table.
    pub fn render(&self) -> String {
        let mut out = format!("{:<32} {:<6} {:>12} {:>12}\n", "check", "status", "measured", "tolerance");
        for c in &self.checks {
            out.push_str(&format!(
                "{:<32} {:<6} {:>12.3e} {:>12.1e}\n",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.measured,
                c.tolerance
            ));
        }
        let n_pass = self.checks.iter().filter(|c| c.passed).count();
        out.push_str(&format!(
            "verify: {n_pass}/{} checks passed ({} samples, seed {})\n",
            self.checks.len(),
            self.samples,
            self.seed
        ));
        out
    }
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |a: f64, b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

fn check(name: &'static str, measured: f64, tolerance: f64) -> Check {
    Check {
        name,
        passed: measured <= tolerance,
        measured,
        tolerance,
    }
}

/// Run every oracle comparison on `g` at `samples` seeded random k in (0, 50]
/// and imaginary arguments it with t in [0.01, 50].
pub fn verify_graph(g: &MetricGraph, seed: u64, samples: usize) -> Result<VerifyReport> {
    let op = bond_scattering_matrix(g);
    let dim = op.dim();
    let set = enumerate_irreducible_pseudo_orbits(g, dim)?;
    let ex = SecularExpansion::new(&set, &op)?;
    let ks = sample_points(samples, K_RANGE, seed);
    let ts: Vec<f64> = sample_points(samples, T_RANGE.1 - T_RANGE.0, seed ^ 0x5DEE_CE66_D)
        .into_iter()
        .map(|x| T_RANGE.1 - x)
        .chain([T_RANGE.0, T_RANGE.1])
        .collect();

    let per_k: Vec<Result<(CoefficientVector, CoefficientVector, CoefficientVector, f64)>> = ks
        .par_iter()
        .map(|&k| {
            let z = Complex64::new(k, 0.0);
            let orbit = coeffs_pseudo_orbit(&set, &op, z)?;
            let direct = coeffs_direct(&op, z)?;
            let newton = coeffs_newton(&op, z);
            let fo = ex.secular(z);
            let fd = secular_direct(&op, z);
            let err = (fo - fd).norm() / fo.norm().max(1.0);
            Ok((orbit, direct, newton, err))
        })
        .collect();
    let per_k = per_k.into_iter().collect::<Result<Vec<_>>>()?;

    let mut checks = vec![
        check("scattering.unitarity", op.unitarity_defect(), 1e-12),
        check(
            "scattering.theta",
            if op.theta().is_ok() { 0.0 } else { f64::INFINITY },
            0.0,
        ),
        check(
            "charpoly.orbit_vs_direct",
            max_of(per_k.iter().map(|(o, d, _, _)| o.max_abs_diff(d))),
            1e-9,
        ),
        check(
            "charpoly.newton_vs_direct",
            max_of(per_k.iter().map(|(_, d, n, _)| n.max_abs_diff(d))),
            1e-8,
        ),
    ];

    let n_part = dim.min(PARTITION_CAP);
    let n_prim = dim.min(PRIMITIVE_CAP);
    let few = &ks[..ks.len().min(5)];
    let part: Vec<Result<f64>> = few
        .par_iter()
        .zip(&per_k[..few.len()])
        .map(|(&k, (_, d, _, _))| {
            let z = Complex64::new(k, 0.0);
            let mut worst: f64 = 0.0;
            for n in 1..=n_part {
                worst = worst.max((coeffs_partition(&op, z, n)? - d.a[n]).norm());
            }
            Ok(worst)
        })
        .collect();
    checks.push(check(
        "charpoly.partition_vs_direct",
        max_of(part.into_iter().collect::<Result<Vec<_>>>()?),
        1e-8,
    ));
    let prim: Vec<Result<f64>> = few
        .par_iter()
        .zip(&per_k[..few.len()])
        .map(|(&k, (o, _, _, _))| {
            let z = Complex64::new(k, 0.0);
            let mut worst: f64 = 0.0;
            for n in 0..=n_prim {
                worst = worst.max((coeffs_primitive_expansion(&op, z, n)? - o.a[n]).norm());
            }
            Ok(worst)
        })
        .collect();
    checks.push(check(
        "charpoly.primitive_vs_orbit",
        max_of(prim.into_iter().collect::<Result<Vec<_>>>()?),
        1e-10,
    ));
    checks.push(check(
        "charpoly.symmetry",
        max_of(per_k.iter().map(|(o, _, _, _)| o.symmetry_residual())),
        1e-10,
    ));
    checks.push(check("secular.real_axis", max_of(per_k.iter().map(|p| p.3)), 1e-9));
    let imag: Vec<f64> = ts
        .par_iter()
        .map(|&t| {
            let z = Complex64::new(0.0, t);
            let fo = ex.secular(z);
            (fo - secular_direct(&op, z)).norm() / fo.norm().max(1.0)
        })
        .collect();
    checks.push(check("secular.imaginary_axis", max_of(imag), 1e-9));
    let kernel = op.kernel_dim(0.0, KERNEL_TOL) as f64;
    let beta = g.zero_mode_order() as f64;
    checks.push(check("kernel.dim_at_zero", (kernel - beta).abs(), 0.0));
    let lemma_ok = lemma_partition_identity(1) == -BigRational::one()
        && (2..=12).all(|q| lemma_partition_identity(q).is_zero());
    checks.push(check("lemma.partition_identity", if lemma_ok { 0.0 } else { 1.0 }, 0.0));

    Ok(VerifyReport { checks, samples, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_graph;

    #[test]
    fn k4_passes_and_is_deterministic() {
        let g = complete_graph(&["a", "b", "c", "d"], &[0.31, 0.47, 0.59, 0.73, 0.83, 0.97]).unwrap();
        let a = verify_graph(&g, 7, 12).unwrap();
        assert!(a.passed(), "{}", a.render());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| verify_graph(&g, 7, 12).unwrap());
        assert_eq!(a.render(), b.render());
    }
}
