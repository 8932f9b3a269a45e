//! The secular function F(z) = det(U)^{−1/2} det(I − U(z)) as a finite sum
//! over irreducible pseudo orbits, its determinant form, and the reduced
//! function F̂(z) = F(z)/z^β with the zero modes divided out (β = B − V + 2).
//!
//! Branch and sign: F̂ is scaled by a unit constant so that
//! F̂(it) → +e^{tℒ}/t^β as t → ∞. On the imaginary axis this makes
//! F̂(it) = e^{tℒ} t^{−β} det(I − U(it)), which is positive for t > 0.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::orbits::{enumerate_irreducible_pseudo_orbits, IrreducibleSet};
use crate::scattering::{CMatrix, EvolutionOperator};

/// Number of Taylor coefficients of F̂ kept for small |z|.
const SERIES_TERMS: usize = 48;
/// The Taylor series is used while |z|·ℒ ≤ this.
const SERIES_RADIUS: f64 = 1.0;

/// One pseudo orbit with B_γ̄ ≤ B, carrying (−1)^m A_γ̄ H(B − B_γ̄).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecularTerm {
    pub weight: Complex64,
    pub metric_length: f64,
    pub topological_length: usize,
}

/// Truncated pseudo-orbit expansion of F and everything derived from it.
#[derive(Debug, Clone)]
pub struct SecularExpansion {
    terms: Vec<SecularTerm>,
    theta: f64,
    det_s: Complex64,
    total_length: f64,
    beta: usize,
    bonds: usize,
    /// F̂(z) = Σ_m series[m] z^m near the origin.
    series: Vec<Complex64>,
    /// max_{j<β} |d_j|, where F(z) = Σ_j d_j z^j; zero in exact arithmetic.
    low_order_residual: f64,
}

impl SecularExpansion {
    /// Build from an enumeration that reaches at least B.
    pub fn new(set: &IrreducibleSet, op: &EvolutionOperator) -> Result<Self> {
        let g = op.graph();
        let bonds = g.bond_count();
        if set.max_total < bonds {
            return Err(Error::EnumerationCap {
                have: set.max_total,
                need: bonds,
            });
        }
        let amps = set.amplitudes(op);
        let terms: Vec<SecularTerm> = set
            .pseudo
            .iter()
            .zip(amps)
            .filter(|(p, a)| p.topological_length <= bonds && *a != Complex64::new(0.0, 0.0))
            .map(|(p, a)| {
                let h = if p.topological_length == bonds { 0.5 } else { 1.0 };
                SecularTerm {
                    weight: p.sign() * h * a,
                    metric_length: p.metric_length,
                    topological_length: p.topological_length,
                }
            })
            .collect();
        let mut out = Self {
            terms,
            theta: op.phase(),
            det_s: op.det_s(),
            total_length: g.total_length(),
            beta: g.zero_mode_order(),
            bonds,
            series: Vec::new(),
            low_order_residual: 0.0,
        };
        out.build_series();
        Ok(out)
    }

    /// Enumerate irreducible pseudo orbits up to B and build the expansion.
    pub fn from_operator(op: &EvolutionOperator) -> Result<Self> {
        let set = enumerate_irreducible_pseudo_orbits(op.graph(), op.graph().bond_count())?;
        Self::new(&set, op)
    }

    pub fn terms(&self) -> &[SecularTerm] {
        &self.terms
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    /// β = B − V + 2
    pub fn zero_order(&self) -> usize {
        self.beta
    }

    pub fn bond_count(&self) -> usize {
        self.bonds
    }

    /// e^{2iθ} = det S rounded to ±1 for Neumann graphs.
    fn reflection_sign(&self) -> f64 {
        if self.det_s.re >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Upper bound on |F(k)| for real k.
    pub fn scale(&self) -> f64 {
        self.terms.iter().map(|t| 2.0 * t.weight.norm()).sum()
    }

    /// Largest Taylor coefficient of F below order β (should vanish).
    pub fn low_order_residual(&self) -> f64 {
        self.low_order_residual
    }

    fn split(&self, t: &SecularTerm) -> (Complex64, Complex64) {
        let e = Complex64::from_polar(1.0, self.theta);
        (t.weight * e.conj(), t.weight.conj() * e)
    }

    fn build_series(&mut self) {
        let n = self.beta + SERIES_TERMS;
        let mut d = vec![CompensatedSum::default(); n];
        for t in &self.terms {
            let (alpha, gamma) = self.split(t);
            let delta = t.metric_length - self.total_length;
            let mut p = Complex64::new(1.0, 0.0);
            for (j, dj) in d.iter_mut().enumerate() {
                if j > 0 {
                    p *= Complex64::new(0.0, delta) / j as f64;
                }
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                dj.add(p * (alpha + sign * gamma));
            }
        }
        let d: Vec<Complex64> = d.iter().map(CompensatedSum::value).collect();
        self.low_order_residual = d[..self.beta].iter().map(|z| z.norm()).fold(0.0, f64::max);
        let c = self.normalization();
        self.series = d[self.beta..].iter().map(|&x| c * x).collect();
    }

    /// c = i^β e^{iθ}, fixing F̂(it) → +e^{tℒ}/t^β.
    fn normalization(&self) -> Complex64 {
        Complex64::i().powi(self.beta as i32) * Complex64::from_polar(1.0, self.theta)
    }

    /// F(z) = Σ H [w e^{iφ} + w̄ e^{−iφ}], φ = z(l − ℒ) − θ.
    /// For real amplitudes this is 2 Σ H w cos(z(l − ℒ) − θ).
    pub fn secular(&self, z: Complex64) -> Complex64 {
        let s: CompensatedSum = self
            .terms
            .iter()
            .map(|t| {
                let (alpha, gamma) = self.split(t);
                let e = (Complex64::i() * z * (t.metric_length - self.total_length)).exp();
                alpha * e + gamma / e
            })
            .collect();
        s.value()
    }

    /// F(k) for real k, imaginary part dropped.
    pub fn secular_real(&self, k: f64) -> f64 {
        self.secular(Complex64::new(k, 0.0)).re
    }

    /// dF/dz
    pub fn secular_derivative(&self, z: Complex64) -> Complex64 {
        let s: CompensatedSum = self
            .terms
            .iter()
            .map(|t| {
                let (alpha, gamma) = self.split(t);
                let delta = t.metric_length - self.total_length;
                let e = (Complex64::i() * z * delta).exp();
                Complex64::i() * delta * (alpha * e - gamma / e)
            })
            .collect();
        s.value()
    }

    fn use_series(&self, z: Complex64) -> bool {
        z.norm() * self.total_length <= SERIES_RADIUS
    }

    fn series_value(&self, z: Complex64) -> Complex64 {
        self.series.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    fn series_derivative(&self, z: Complex64) -> Complex64 {
        self.series
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (m, &c)| acc * z + m as f64 * c)
    }

    /// F̂(z) = c F(z)/z^β with |c| = 1; the Taylor series is used near 0.
    pub fn fhat(&self, z: Complex64) -> Complex64 {
        if self.use_series(z) {
            self.series_value(z)
        } else {
            self.normalization() * self.secular(z) / z.powi(self.beta as i32)
        }
    }

    /// F̂(0)
    pub fn fhat_at_zero(&self) -> Complex64 {
        self.series[0]
    }

    /// G(t) = e^{−tℒ} t^β F̂(it) = Σ H [w e^{−tl} + e^{2iθ} w̄ e^{−t(2ℒ−l)}] and G'(t).
    /// Real parts; the imaginary parts vanish for Neumann graphs.
    pub fn reduced_imag(&self, t: f64) -> (f64, f64) {
        let sign = self.reflection_sign();
        let mut g = CompensatedSum::default();
        let mut dg = CompensatedSum::default();
        for term in &self.terms {
            let l = term.metric_length;
            let l2 = 2.0 * self.total_length - l;
            let a = term.weight * (-t * l).exp();
            let b = sign * term.weight.conj() * (-t * l2).exp();
            g.add(a + b);
            dg.add(-l * a - l2 * b);
        }
        (g.value().re, dg.value().re)
    }

    /// log F̂(it) for t > 0; NaN where the orbit sum is not positive.
    pub fn log_fhat_imag(&self, t: f64) -> f64 {
        let z = Complex64::new(0.0, t);
        if self.use_series(z) {
            return self.series_value(z).re.ln();
        }
        let (g, _) = self.reduced_imag(t);
        if g <= 0.0 {
            return f64::NAN;
        }
        t * self.total_length - self.beta as f64 * t.ln() + g.ln()
    }

    /// d/dt log F̂(it); NaN where the orbit sum is not positive.
    pub fn dlog_fhat_imag(&self, t: f64) -> f64 {
        let z = Complex64::new(0.0, t);
        if self.use_series(z) {
            // d/dt F̂(it) = i F̂'(it)
            let v = self.series_value(z);
            let dv = Complex64::i() * self.series_derivative(z);
            return (dv / v).re;
        }
        let (g, dg) = self.reduced_imag(t);
        if g <= 0.0 {
            return f64::NAN;
        }
        self.total_length - self.beta as f64 / t + dg / g
    }

    /// Whether the tail quotient G'/G is usable at t.
    pub fn reduced_positive(&self, t: f64) -> bool {
        self.reduced_imag(t).0 > 0.0
    }
}

/// det(U(z))^{−1/2} det(I − U(z)) = e^{−izℒ − iθ} det(I − U(z)).
pub fn secular_direct(op: &EvolutionOperator, z: Complex64) -> Complex64 {
    let n = op.dim();
    let m = CMatrix::identity(n, n) - op.evolution(z);
    let phase = (-Complex64::i() * (z * op.total_length() + op.phase())).exp();
    phase * m.determinant()
}

/// det(I − U(it)) from the eigenvalues of U(it): Π (1 − μ_j). Accurate in
/// relative terms even when β eigenvalues approach 1.
pub fn reduced_direct(op: &EvolutionOperator, t: f64) -> Result<Complex64> {
    let mu = crate::numeric::eigenvalues(&op.evolution(Complex64::new(0.0, t)))?;
    Ok(mu.iter().map(|m| Complex64::new(1.0, 0.0) - m).product())
}

/// log F̂(it) from the matrix, for t > 0.
pub fn log_fhat_imag_direct(op: &EvolutionOperator, t: f64) -> Result<f64> {
    let g = reduced_direct(op, t)?;
    let beta = op.graph().zero_mode_order() as f64;
    Ok(t * op.total_length() - beta * t.ln() + g.re.ln())
}
