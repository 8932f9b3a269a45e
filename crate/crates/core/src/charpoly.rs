//! Coefficients of the characteristic polynomial det(ξI − U(k)) = Σ a_n ξ^{2B−n}.
//!
//! Five routes are provided so they can check each other:
//! the irreducible pseudo-orbit sum, eigenvalues of U(k), Newton's
//! identities on traces, the closed partition formula, and the sum over
//! primitive pseudo orbits.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{eigenvalues, partitions, CompensatedSum};
use crate::orbits::{enumerate_primitive_orbits, enumerate_primitive_pseudo_orbits, orbit_amplitude, IrreducibleSet};
use crate::scattering::{CMatrix, EvolutionOperator};

/// Default cap for [`coeffs_partition`].
pub const PARTITION_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    pub k: Complex64,
    /// a_0 … a_{2B}
    pub a: Vec<Complex64>,
}

impl CoefficientVector {
    /// 2B
    pub fn degree(&self) -> usize {
        self.a.len() - 1
    }

    /// a_{2B} = det U(k)
    pub fn top(&self) -> Complex64 {
        self.a[self.degree()]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.a
            .iter()
            .zip(&other.a)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// max_n |a_n − a_{2B} conj(a_{2B−n})|; zero for real k.
    pub fn symmetry_residual(&self) -> f64 {
        check_symmetry(self)
    }
}

pub fn check_symmetry(c: &CoefficientVector) -> f64 {
    let n = c.degree();
    let top = c.top();
    (0..=n)
        .map(|i| (c.a[i] - top * c.a[n - i].conj()).norm())
        .fold(0.0, f64::max)
}

/// a_n = Σ_{γ̄: B_γ̄ = n} (−1)^m A_γ̄ e^{ik l_γ̄}
pub fn coeffs_pseudo_orbit(set: &IrreducibleSet, op: &EvolutionOperator, k: Complex64) -> Result<CoefficientVector> {
    let n = op.dim();
    if set.max_total < n {
        return Err(Error::EnumerationCap {
            have: set.max_total,
            need: n,
        });
    }
    let amps = set.amplitudes(op);
    let mut sums = vec![CompensatedSum::default(); n + 1];
    for (p, amp) in set.pseudo.iter().zip(amps) {
        let phase = (Complex64::i() * k * p.metric_length).exp();
        sums[p.topological_length].add(p.sign() * amp * phase);
    }
    Ok(CoefficientVector {
        k,
        a: sums.iter().map(CompensatedSum::value).collect(),
    })
}

/// Coefficients from the eigenvalues of U(k): a_n = (−1)^n e_n(μ_1, …, μ_2B).
pub fn coeffs_direct(op: &EvolutionOperator, k: Complex64) -> Result<CoefficientVector> {
    let mu = eigenvalues(&op.evolution(k))?;
    Ok(CoefficientVector {
        k,
        a: poly_from_roots(&mu),
    })
}

/// Coefficients of Π (ξ − μ_i) in descending powers of ξ.
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut a = vec![Complex64::zero(); roots.len() + 1];
    a[0] = Complex64::one();
    for (m, &mu) in roots.iter().enumerate() {
        for n in (1..=m + 1).rev() {
            let prev = a[n - 1];
            a[n] -= mu * prev;
        }
    }
    a
}

/// T_j = Tr U(k)^j for j = 1..=n (index 0 holds T_0 = 2B).
pub fn traces(op: &EvolutionOperator, k: Complex64, n: usize) -> Vec<Complex64> {
    let u = op.evolution(k);
    let mut out = Vec::with_capacity(n + 1);
    out.push(Complex64::new(op.dim() as f64, 0.0));
    let mut power: CMatrix = CMatrix::identity(op.dim(), op.dim());
    for _ in 1..=n {
        power = &power * &u;
        out.push(power.trace());
    }
    out
}

/// Newton's identities: a_n = −(1/n) Σ_{j=0}^{n−1} T_{n−j} a_j, a_0 = 1.
pub fn coeffs_newton(op: &EvolutionOperator, k: Complex64) -> CoefficientVector {
    let n = op.dim();
    let t = traces(op, k, n);
    let mut a = vec![Complex64::one()];
    for m in 1..=n {
        let s: CompensatedSum = (0..m).map(|j| t[m - j] * a[j]).collect();
        a.push(-s.value() / m as f64);
    }
    CoefficientVector { k, a }
}

/// a_n = Σ_{P ∈ 𝒫_n} Π_j (1/m_j!) (−T_j/j)^{m_j}
pub fn coeffs_partition(op: &EvolutionOperator, k: Complex64, n: usize) -> Result<Complex64> {
    if n > PARTITION_CAP {
        return Err(Error::PartitionCap {
            cap: PARTITION_CAP,
            requested: n,
        });
    }
    let t = traces(op, k, n);
    let mut sum = CompensatedSum::default();
    for m in partitions(n) {
        let mut term = Complex64::one();
        for (idx, &mult) in m.iter().enumerate() {
            let j = idx + 1;
            let base = -t[j] / j as f64;
            for r in 1..=mult {
                term *= base / r as f64;
            }
        }
        sum.add(term);
    }
    Ok(sum.value())
}

/// a_n as a sum over sets of distinct primitive orbits of total length n.
pub fn coeffs_primitive_expansion(op: &EvolutionOperator, k: Complex64, n: usize) -> Result<Complex64> {
    if n == 0 {
        return Ok(Complex64::one());
    }
    let (_, sets) = enumerate_primitive_pseudo_orbits(op, n)?;
    let s: CompensatedSum = sets
        .iter()
        .map(|p| p.sign() * p.amplitude * (Complex64::i() * k * p.metric_length).exp())
        .collect();
    Ok(s.value())
}

/// T_j from periodic orbits: Σ_{γ: B_γ = j} (j / r_γ) A_γ e^{ik l_γ}, where each
/// γ is a repetition of a primitive orbit whose length divides j.
pub fn trace_via_orbits(op: &EvolutionOperator, k: Complex64, j: usize) -> Result<Complex64> {
    let prims = enumerate_primitive_orbits(op.graph(), j)?;
    let s: CompensatedSum = prims
        .iter()
        .filter(|p| j % p.topological_length() == 0)
        .map(|p| {
            let r = (j / p.topological_length()) as i32;
            let base = orbit_amplitude(op, p) * (Complex64::i() * k * p.metric_length()).exp();
            p.topological_length() as f64 * base.powi(r)
        })
        .collect();
    Ok(s.value())
}

/// Σ_{Q ∈ 𝒫_q} Π_r (−1)^{n_r} / (n_r! r^{n_r}), exactly.
pub fn lemma_partition_identity(q: usize) -> BigRational {
    let mut total = BigRational::zero();
    for m in partitions(q) {
        let mut term = BigRational::one();
        for (idx, &mult) in m.iter().enumerate() {
            let r = BigInt::from(idx + 1);
            for i in 1..=mult {
                term = term * BigRational::new(BigInt::from(-1), r.clone() * BigInt::from(i));
            }
        }
        total += term;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, complete_graph, GraphSpec, MetricGraph};
    use crate::orbits::enumerate_irreducible_pseudo_orbits;
    use crate::scattering::bond_scattering_matrix;

    fn path() -> MetricGraph {
        build_graph(&GraphSpec::new(["a", "b", "c"]).edge("a", "b", 0.4).edge("b", "c", 0.6)).unwrap()
    }

    fn k4() -> MetricGraph {
        complete_graph(&["a", "b", "c", "d"], &[0.31, 0.47, 0.59, 0.73, 0.83, 0.97]).unwrap()
    }

    fn c(k: f64) -> Complex64 {
        Complex64::new(k, 0.0)
    }

    #[test]
    fn identity_polynomial() {
        let a = poly_from_roots(&[c(1.0), c(1.0)]);
        assert_eq!(a, vec![c(1.0), c(-2.0), c(1.0)]);
    }

    #[test]
    fn path_closed_form() {
        let g = path();
        let op = bond_scattering_matrix(&g);
        let set = enumerate_irreducible_pseudo_orbits(&g, 4).unwrap();
        for &k in &[0.3, 1.7, 12.9] {
            let expected = vec![
                c(1.0),
                c(0.0),
                c(0.0),
                c(0.0),
                -(Complex64::i() * 2.0 * k * g.total_length()).exp(),
            ];
            let orbit = coeffs_pseudo_orbit(&set, &op, c(k)).unwrap();
            let direct = coeffs_direct(&op, c(k)).unwrap();
            for n in 0..5 {
                assert!((orbit.a[n] - expected[n]).norm() < 1e-14);
                assert!((direct.a[n] - expected[n]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn k4_orbit_matches_direct() {
        let g = k4();
        let op = bond_scattering_matrix(&g);
        let set = enumerate_irreducible_pseudo_orbits(&g, 12).unwrap();
        let orbit = coeffs_pseudo_orbit(&set, &op, c(1.0)).unwrap();
        let direct = coeffs_direct(&op, c(1.0)).unwrap();
        assert!(orbit.max_abs_diff(&direct) < 1e-10);
        assert_eq!(orbit.a[0], c(1.0));
        assert!((orbit.top().norm() - 1.0).abs() < 1e-12);
        assert!(orbit.symmetry_residual() < 1e-10);

        let at_zero = coeffs_direct(&op, c(0.0)).unwrap();
        assert!(at_zero.a.iter().all(|z| z.im.abs() < 1e-12));
    }

    #[test]
    fn newton_and_partition() {
        let op = bond_scattering_matrix(&k4());
        let k = c(0.7);
        let t = traces(&op, k, 2);
        let newton = coeffs_newton(&op, k);
        assert!((newton.a[1] + t[1]).norm() < 1e-15);
        let direct = coeffs_direct(&op, k).unwrap();
        assert!(newton.max_abs_diff(&direct) < 1e-9);

        assert!((coeffs_partition(&op, k, 1).unwrap() + t[1]).norm() < 1e-15);
        let two = coeffs_partition(&op, k, 2).unwrap();
        assert!((two - (t[1] * t[1] / 2.0 - t[2] / 2.0)).norm() < 1e-14);
        assert!((coeffs_partition(&op, k, 5).unwrap() - direct.a[5]).norm() < 1e-9);
        assert!(matches!(coeffs_partition(&op, k, 13), Err(Error::PartitionCap { .. })));
    }

    #[test]
    fn traces_from_orbits() {
        let op = bond_scattering_matrix(&k4());
        let k = c(2.3);
        let t = traces(&op, k, 6);
        for j in 1..=6 {
            let via = trace_via_orbits(&op, k, j).unwrap();
            assert!((via - t[j]).norm() < 1e-10, "T_{j}");
        }
    }

    #[test]
    fn primitive_expansion_small_n() {
        let g = path();
        let op = bond_scattering_matrix(&g);
        let k = c(1.3);
        assert_eq!(coeffs_primitive_expansion(&op, k, 0).unwrap(), c(1.0));
        let a4 = coeffs_primitive_expansion(&op, k, 4).unwrap();
        let expected = -(Complex64::i() * 2.0 * k * g.total_length()).exp();
        assert!((a4 - expected).norm() < 1e-14);
        assert!(matches!(
            coeffs_primitive_expansion(&op, k, 7),
            Err(Error::PrimitiveCap { .. })
        ));
    }

    #[test]
    fn lemma_values() {
        assert_eq!(lemma_partition_identity(1), BigRational::from_integer(BigInt::from(-1)));
        for q in 2..=12 {
            assert!(lemma_partition_identity(q).is_zero(), "q = {q}");
        }
    }
}
