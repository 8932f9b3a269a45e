//! Spectral zeta function ζ(s, λ) = Σ' (k_n² + λ)^{−s}, the spectral
//! determinant 𝒮(λ) = exp(−∂_s ζ(0, λ)) and the vacuum energy ℰ_c = ½ ζ(−½, 0).
//!
//! Two representations of the log-derivative φ(t) = d/dt log F̂(it) are used:
//! the pseudo-orbit sum, and the matrix form
//! φ(t) = ℒ − β/t + g(t), g(t) = Tr[(I − U(it))^{−1} L U(it)] = d/dt log det(I − U(it)).
//! Near t = 0 the matrix form is replaced by a Taylor series of φ whose
//! coefficients come from samples on a circle of radius π/(2ℒ); φ is
//! analytic inside |t| < π/ℒ because no eigenvalue k_n lies below π/ℒ.

use std::cell::Cell;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::quadrature::{integrate_breakpoints, Quadrature, QuadratureConfig};
use crate::scattering::{bond_scattering_matrix, EvolutionOperator};
use crate::secular::SecularExpansion;

pub const QUADRATURE_RULE: &str = "adaptive gauss-legendre 15";
/// Smallest λ accepted by the integral oracle.
pub const MIN_LAMBDA: f64 = 1e-8;
/// Relative step for the Casimir force difference quotient.
pub const FORCE_STEP: f64 = 1e-4;
const CIRCLE_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    SpectralDeterminant,
    VacuumEnergy,
    Zeta,
    CasimirForce,
}

impl Quantity {
    pub fn tag(self) -> &'static str {
        match self {
            Quantity::SpectralDeterminant => "specdet",
            Quantity::VacuumEnergy => "vacuum",
            Quantity::Zeta => "zeta",
            Quantity::CasimirForce => "force",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    OrbitSum,
    IntegralOracle,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::OrbitSum => "orbit_sum",
            Method::IntegralOracle => "integral_oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureInfo {
    pub rule: &'static str,
    pub panels: usize,
    pub tail_cutoff: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarReport {
    pub quantity: Quantity,
    pub inputs: Vec<(&'static str, f64)>,
    pub value: f64,
    pub method: Method,
    pub quadrature: Option<QuadratureInfo>,
    pub warnings: Vec<String>,
}

impl ScalarReport {
    pub fn error_estimate(&self) -> f64 {
        self.quadrature.as_ref().map_or(0.0, |q| q.error)
    }
}

/// 1/Γ(x), zero at the poles of Γ.
fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.round() {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

/// Decay rate bound for g: every non-null pseudo orbit is at least as long
/// as the shortest periodic orbit, which is at least 2 l_min.
fn decay_rate(g: &MetricGraph) -> f64 {
    2.0 * g.bond_lengths().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Cutoff T ≥ a with T^p e^{−κ(T−a)} below the tail tolerance.
fn tail_cutoff(a: f64, p: f64, kappa: f64, tol: f64) -> f64 {
    let mut t = a + 1.0;
    for _ in 0..20 {
        t = a + 1.0 + (-tol.ln() + p.max(0.0) * t.max(1.0).ln()) / kappa;
    }
    t
}

/// Breakpoints a, 2a, 4a, … up to 1, then 2, 4, … up to T.
fn geometric_points(a: f64, t_max: f64) -> Vec<f64> {
    let mut pts = vec![a];
    let mut x = if a > 0.0 { 2.0 * a } else { 1.0 };
    while x < t_max {
        if x > *pts.last().unwrap() {
            pts.push(x);
        }
        x = if x < 1.0 { (2.0 * x).min(1.0) } else { 2.0 * x };
    }
    pts.push(t_max);
    pts
}

/// Matrix-side evaluator of g and φ.
pub struct MatrixIntegrand<'a> {
    op: &'a EvolutionOperator,
    beta: f64,
    total: f64,
    radius: f64,
    /// φ(t) ≈ Σ coeffs[j] t^j for t < radius/2
    coeffs: Vec<f64>,
}

impl<'a> MatrixIntegrand<'a> {
    pub fn new(op: &'a EvolutionOperator) -> Self {
        let g = op.graph();
        let total = g.total_length();
        let radius = PI / (2.0 * total);
        let mut out = Self {
            op,
            beta: g.zero_mode_order() as f64,
            total,
            radius,
            coeffs: Vec::new(),
        };
        let samples: Vec<(Complex64, Complex64)> = (0..CIRCLE_SAMPLES)
            .map(|j| {
                let tau = Complex64::from_polar(radius, 2.0 * PI * j as f64 / CIRCLE_SAMPLES as f64);
                (tau, out.phi_complex(tau))
            })
            .collect();
        // φ is odd, so only odd powers are kept.
        out.coeffs = (0..CIRCLE_SAMPLES / 2)
            .map(|j| {
                if j % 2 == 0 {
                    return 0.0;
                }
                let s: Complex64 = samples.iter().map(|&(tau, v)| v * tau.powi(-(j as i32))).sum();
                s.re / CIRCLE_SAMPLES as f64
            })
            .collect();
        out
    }

    /// g(τ) = Tr[(I − U(iτ))^{−1} L U(iτ)] for complex τ.
    pub fn g_complex(&self, tau: Complex64) -> Complex64 {
        let n = self.op.dim();
        let u = self.op.evolution(Complex64::i() * tau);
        let mut lu_rhs = u.clone();
        for (row, &l) in self.op.arc_lengths().iter().enumerate() {
            for x in lu_rhs.row_mut(row).iter_mut() {
                *x *= l;
            }
        }
        let m = DMatrix::<Complex64>::identity(n, n) - u;
        match m.lu().solve(&lu_rhs) {
            Some(x) => x.trace(),
            None => Complex64::new(f64::NAN, f64::NAN),
        }
    }

    fn phi_complex(&self, tau: Complex64) -> Complex64 {
        self.total - self.beta / tau + self.g_complex(tau)
    }

    /// Below this t the circle series is used.
    pub fn series_limit(&self) -> f64 {
        0.5 * self.radius
    }

    /// φ(t) = d/dt log F̂(it)
    pub fn phi(&self, t: f64) -> f64 {
        if t < self.series_limit() {
            self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
        } else {
            self.phi_complex(Complex64::new(t, 0.0)).re
        }
    }

    /// φ(t)/t, regular at 0.
    pub fn phi_over_t(&self, t: f64) -> f64 {
        if t < self.series_limit() {
            self.coeffs.iter().skip(1).rev().fold(0.0, |acc, &c| acc * t + c)
        } else {
            self.phi(t) / t
        }
    }

    /// g(t) = φ(t) − ℒ + β/t
    pub fn g(&self, t: f64) -> f64 {
        if t < self.series_limit() {
            self.phi(t) - self.total + self.beta / t
        } else {
            self.g_complex(Complex64::new(t, 0.0)).re
        }
    }
}

fn info(q: &Quadrature, tail_cutoff: f64, remainder: f64) -> QuadratureInfo {
    QuadratureInfo {
        rule: QUADRATURE_RULE,
        panels: q.panels,
        tail_cutoff,
        error: q.error + remainder,
    }
}

fn unconverged_warning(q: &Quadrature, warnings: &mut Vec<String>) {
    if q.unconverged {
        warnings.push("quadrature hit the bisection depth limit on some panel".into());
    }
}

/// 𝒮(λ) = (2/λ^{β/2}) Σ_{B_γ̄ ≤ B} (−1)^m A_γ̄ H(B − B_γ̄) C(√λ(ℒ − l_γ̄)),
/// C = cosh for θ = 0 and sinh for θ = π/2.
pub fn spectral_determinant_orbits(ex: &SecularExpansion, lambda: f64) -> Result<ScalarReport> {
    if !(lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    let t = lambda.sqrt();
    let value = if t * ex.total_length() <= 1.0 {
        ex.fhat(Complex64::new(0.0, t)).re
    } else {
        let odd = ex.theta() != 0.0;
        let sum: f64 = ex
            .terms()
            .iter()
            .map(|term| {
                let x = t * (ex.total_length() - term.metric_length);
                term.weight.re * if odd { x.sinh() } else { x.cosh() }
            })
            .sum();
        2.0 * sum / t.powi(ex.zero_order() as i32)
    };
    Ok(ScalarReport {
        quantity: Quantity::SpectralDeterminant,
        inputs: vec![("lambda", lambda)],
        value,
        method: Method::OrbitSum,
        quadrature: None,
        warnings: Vec::new(),
    })
}

/// exp(−ζ'(0, λ)) with ζ'(0, λ) = ∫_{√λ}^∞ g(t) dt − ℒ√λ + (β/2) log λ.
pub fn spectral_determinant_integral(op: &EvolutionOperator, lambda: f64, cfg: &QuadratureConfig) -> Result<ScalarReport> {
    if !(lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    if lambda < MIN_LAMBDA {
        return Err(Error::ZeroModeRegime(lambda));
    }
    let m = MatrixIntegrand::new(op);
    let a = lambda.sqrt();
    let kappa = decay_rate(op.graph());
    let t_max = tail_cutoff(a, 0.0, kappa, cfg.tail_tol);
    let q = integrate_breakpoints(|t| m.g(t), &geometric_points(a, t_max), cfg);
    let remainder = m.g(t_max).abs() / kappa;
    let beta = op.graph().zero_mode_order() as f64;
    let dzeta = q.value - op.total_length() * a + 0.5 * beta * lambda.ln();
    let value = (-dzeta).exp();
    let mut warnings = Vec::new();
    unconverged_warning(&q, &mut warnings);
    let mut qi = info(&q, t_max, remainder);
    qi.error *= value;
    Ok(ScalarReport {
        quantity: Quantity::SpectralDeterminant,
        inputs: vec![("lambda", lambda)],
        value,
        method: Method::IntegralOracle,
        quadrature: Some(qi),
        warnings,
    })
}

fn vacuum_assemble(op_total: f64, beta: f64, i0: f64, i1: f64) -> f64 {
    -(i0 + i1) / (2.0 * PI) + op_total / (4.0 * PI) - beta / (2.0 * PI)
}

/// ℰ_c = −(1/2π) ∫_0^∞ t [φ(t) − (ℒ − β/t) 1_{t>1}] dt + ℒ/(4π) − β/(2π),
/// with φ from the pseudo-orbit sum. Where the orbit sum for det(I − U(it))
/// is not positive the matrix integrand is used instead.
pub fn vacuum_energy(ex: &SecularExpansion, op: &EvolutionOperator, cfg: &QuadratureConfig) -> Result<ScalarReport> {
    let total = ex.total_length();
    let beta = ex.zero_order() as f64;
    let kappa = decay_rate(op.graph());
    let t_max = tail_cutoff(1.0, 1.0, kappa, cfg.tail_tol);
    let mut warnings = Vec::new();

    let bad = Cell::new(false);
    let guard = |v: f64| {
        if !v.is_finite() {
            bad.set(true);
            0.0
        } else {
            v
        }
    };
    let split = (1.0 / total).min(1.0);
    let head_pts: Vec<f64> = if split < 1.0 { vec![0.0, split, 1.0] } else { vec![0.0, 1.0] };
    let mut head = integrate_breakpoints(|t| t * guard(ex.dlog_fhat_imag(t)), &head_pts, cfg);
    let tail_pts = geometric_points(1.0, t_max);
    let tail_fn = |t: f64| {
        let (g, dg) = ex.reduced_imag(t);
        if g <= 0.0 {
            bad.set(true);
            return 0.0;
        }
        t * dg / g
    };
    let mut tail = integrate_breakpoints(tail_fn, &tail_pts, cfg);
    let mut method = Method::OrbitSum;
    if bad.get() {
        warnings.push("orbit-sum representation unstable, falling back to matrix integrand".into());
        let m = MatrixIntegrand::new(op);
        let mpts = matrix_head_points(&m);
        head = integrate_breakpoints(|t| t * m.phi(t), &mpts, cfg);
        tail = integrate_breakpoints(|t| t * m.g(t), &tail_pts, cfg);
        method = Method::IntegralOracle;
    }
    let (_, dg_end) = ex.reduced_imag(t_max);
    let remainder = (t_max * dg_end).abs() * (1.0 / kappa + 1.0 / (kappa * kappa * t_max));
    let q = head.combine(tail);
    unconverged_warning(&q, &mut warnings);
    Ok(ScalarReport {
        quantity: Quantity::VacuumEnergy,
        inputs: Vec::new(),
        value: vacuum_assemble(total, beta, head.value, tail.value),
        method,
        quadrature: Some(info(&q, t_max, remainder / (2.0 * PI))),
        warnings,
    })
}

fn matrix_head_points(m: &MatrixIntegrand) -> Vec<f64> {
    let s = m.series_limit();
    if s < 1.0 {
        vec![0.0, s, 1.0]
    } else {
        vec![0.0, 1.0]
    }
}

/// ℰ_c from the matrix integrand only.
pub fn vacuum_energy_matrix(op: &EvolutionOperator, cfg: &QuadratureConfig) -> Result<ScalarReport> {
    let g = op.graph();
    let m = MatrixIntegrand::new(op);
    let kappa = decay_rate(g);
    let t_max = tail_cutoff(1.0, 1.0, kappa, cfg.tail_tol);
    let head = integrate_breakpoints(|t| t * m.phi(t), &matrix_head_points(&m), cfg);
    let tail = integrate_breakpoints(|t| t * m.g(t), &geometric_points(1.0, t_max), cfg);
    let remainder = (t_max * m.g(t_max)).abs() * (1.0 / kappa + 1.0 / (kappa * kappa * t_max));
    let q = head.combine(tail);
    let mut warnings = Vec::new();
    unconverged_warning(&q, &mut warnings);
    Ok(ScalarReport {
        quantity: Quantity::VacuumEnergy,
        inputs: Vec::new(),
        value: vacuum_assemble(g.total_length(), g.zero_mode_order() as f64, head.value, tail.value),
        method: Method::IntegralOracle,
        quadrature: Some(info(&q, t_max, remainder / (2.0 * PI))),
        warnings,
    })
}

/// Casimir force −∂ℰ_c/∂l_b by a central difference with step 10⁻⁴ l_b.
pub fn casimir_force(g: &MetricGraph, bond: usize, cfg: &QuadratureConfig) -> Result<ScalarReport> {
    if bond >= g.bond_count() {
        return Err(Error::BondIndex {
            index: bond,
            bonds: g.bond_count(),
        });
    }
    let l = g.bond_length(bond);
    let h = FORCE_STEP * l;
    let energy = |len: f64| -> Result<ScalarReport> {
        let gg = g.with_bond_length(bond, len)?;
        let op = bond_scattering_matrix(&gg);
        let ex = SecularExpansion::from_operator(&op)?;
        vacuum_energy(&ex, &op, cfg)
    };
    let plus = energy(l + h)?;
    let minus = energy(l - h)?;
    let mut warnings = plus.warnings.clone();
    warnings.extend(minus.warnings.iter().cloned());
    warnings.dedup();
    let method = if plus.method == Method::OrbitSum && minus.method == Method::OrbitSum {
        Method::OrbitSum
    } else {
        Method::IntegralOracle
    };
    Ok(ScalarReport {
        quantity: Quantity::CasimirForce,
        inputs: vec![("bond", bond as f64), ("step", h)],
        value: -(plus.value - minus.value) / (2.0 * h),
        method,
        quadrature: Some(QuadratureInfo {
            rule: QUADRATURE_RULE,
            panels: plus.quadrature.as_ref().map_or(0, |q| q.panels) + minus.quadrature.as_ref().map_or(0, |q| q.panels),
            tail_cutoff: plus.quadrature.as_ref().map_or(0.0, |q| q.tail_cutoff),
            error: (plus.error_estimate() + minus.error_estimate()) / (2.0 * h),
        }),
        warnings,
    })
}

/// ζ(s, λ) for real s < 1 from the matrix integrand.
///
/// λ > 0: (sin πs/π) ∫_{√λ}^∞ (t² − λ)^{−s} g(t) dt
///        + ℒ Γ(s − ½)/(2√π Γ(s)) λ^{½−s} − (β/2) λ^{−s};
/// λ = 0: (sin πs/π) [∫_0^1 t^{−2s} φ dt + ∫_1^∞ t^{−2s} g dt + ℒ/(2s − 1) − β/(2s)].
pub fn zeta_value(op: &EvolutionOperator, s: f64, lambda: f64, cfg: &QuadratureConfig) -> Result<ScalarReport> {
    let pole = if lambda > 0.0 {
        // Γ(s − ½) has poles at s = ½, −½, −3/2, …
        let x = s - 0.5;
        x <= 0.0 && (x - x.round()).abs() < 1e-12
    } else {
        (s - 0.5).abs() < 1e-12
    };
    if !s.is_finite() || s >= 1.0 || pole || !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::ZetaStrip(s));
    }
    let g = op.graph();
    let total = g.total_length();
    let beta = g.zero_mode_order() as f64;
    let m = MatrixIntegrand::new(op);
    let kappa = decay_rate(g);
    let ps = (PI * s).sin() / PI;
    let mut warnings = Vec::new();

    let (value, q, t_max) = if lambda > 0.0 {
        let a = lambda.sqrt();
        let t_max = tail_cutoff(a, -2.0 * s, kappa, cfg.tail_tol);
        let pts = geometric_points(a, t_max);
        let q = if s > 0.0 {
            let p = 1.0 / (1.0 - s);
            let vpts: Vec<f64> = pts.iter().map(|&t| (t - a).max(0.0).powf(1.0 / p)).collect();
            integrate_breakpoints(
                |v| {
                    let t = a + v.powf(p);
                    p * (t + a).powf(-s) * m.g(t)
                },
                &vpts,
                cfg,
            )
        } else {
            integrate_breakpoints(|t| (t * t - lambda).powf(-s) * m.g(t), &pts, cfg)
        };
        let weyl = total * gamma(s - 0.5) * recip_gamma(s) / (2.0 * PI.sqrt()) * lambda.powf(0.5 - s);
        (ps * q.value + weyl - 0.5 * beta * lambda.powf(-s), q, t_max)
    } else if s == 0.0 {
        (-0.5 * beta, Quadrature::default(), 0.0)
    } else {
        let t_max = tail_cutoff(1.0, -2.0 * s, kappa, cfg.tail_tol);
        let head = if s > 0.0 {
            let p = 1.0 / (2.0 - 2.0 * s);
            let split = m.series_limit().min(1.0).powf(1.0 / p);
            integrate_breakpoints(|v| p * m.phi_over_t(v.powf(p)), &[0.0, split, 1.0], cfg)
        } else {
            integrate_breakpoints(|t| t.powf(-2.0 * s) * m.phi(t), &matrix_head_points(&m), cfg)
        };
        let tail = integrate_breakpoints(|t| t.powf(-2.0 * s) * m.g(t), &geometric_points(1.0, t_max), cfg);
        let q = head.combine(tail);
        let bracket = head.value + tail.value + total / (2.0 * s - 1.0) - beta / (2.0 * s);
        (ps * bracket, q, t_max)
    };
    unconverged_warning(&q, &mut warnings);
    Ok(ScalarReport {
        quantity: Quantity::Zeta,
        inputs: vec![("s", s), ("lambda", lambda)],
        value,
        method: Method::IntegralOracle,
        quadrature: Some(info(&q, t_max, 0.0)),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, complete_graph, GraphSpec};

    fn interval(l1: f64, l2: f64) -> MetricGraph {
        build_graph(&GraphSpec::new(["a", "b", "c"]).edge("a", "b", l1).edge("b", "c", l2)).unwrap()
    }

    fn k4() -> MetricGraph {
        complete_graph(&["a", "b", "c", "d"], &[0.31, 0.47, 0.59, 0.73, 0.83, 0.97]).unwrap()
    }

    #[test]
    fn circle_series_matches_direct_phi() {
        let op = bond_scattering_matrix(&k4());
        let m = MatrixIntegrand::new(&op);
        let t = 0.999 * m.series_limit();
        let direct = m.phi_complex(Complex64::new(t, 0.0)).re;
        assert!((m.phi(t) - direct).abs() < 1e-11);
        let ex = SecularExpansion::from_operator(&op).unwrap();
        for &t in &[0.01, 0.2, 1.0, 5.0] {
            assert!((m.phi(t) - ex.dlog_fhat_imag(t)).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn interval_determinant_is_sinh() {
        // Neumann interval with the zero mode removed: 2 sinh(√λ L)/√λ.
        let g = interval(0.3, 0.7);
        let op = bond_scattering_matrix(&g);
        let ex = SecularExpansion::from_operator(&op).unwrap();
        let cfg = QuadratureConfig::default();
        for &lambda in &[1e-3f64, 0.5, 2.0, 10.0] {
            let r = lambda.sqrt();
            let exact = 2.0 * r.sinh() / r;
            let a = spectral_determinant_orbits(&ex, lambda).unwrap().value;
            let b = spectral_determinant_integral(&op, lambda, &cfg).unwrap().value;
            assert!((a - exact).abs() < 1e-12 * exact);
            assert!((b - exact).abs() < 1e-9 * exact, "{lambda}: {b} vs {exact}");
        }
        assert!(matches!(spectral_determinant_integral(&op, 1e-9, &cfg), Err(Error::ZeroModeRegime(_))));
        assert!(spectral_determinant_orbits(&ex, 0.0).is_err());
    }

    #[test]
    fn interval_vacuum_energy() {
        let cfg = QuadratureConfig::default();
        let target = -PI / 24.0;
        for (a, b) in [(0.3, 0.7), (0.5, 0.5)] {
            let g = interval(a, b);
            let op = bond_scattering_matrix(&g);
            let ex = SecularExpansion::from_operator(&op).unwrap();
            let e = vacuum_energy(&ex, &op, &cfg).unwrap();
            assert_eq!(e.method, Method::OrbitSum);
            assert!((e.value - target).abs() < 1e-10, "{}", e.value);
            let em = vacuum_energy_matrix(&op, &cfg).unwrap();
            assert!((em.value - target).abs() < 1e-10, "{}", em.value);
        }
    }

    #[test]
    fn k4_vacuum_two_ways() {
        let cfg = QuadratureConfig::default();
        let op = bond_scattering_matrix(&k4());
        let ex = SecularExpansion::from_operator(&op).unwrap();
        let a = vacuum_energy(&ex, &op, &cfg).unwrap();
        let b = vacuum_energy_matrix(&op, &cfg).unwrap();
        assert!((a.value - b.value).abs() < 1e-9, "{} {}", a.value, b.value);
        let z = zeta_value(&op, -0.5, 0.0, &cfg).unwrap();
        assert!((z.value - 2.0 * b.value).abs() < 1e-10);
    }

    #[test]
    fn interval_zeta_closed_forms() {
        // k_n = nπ on the unit interval: ζ(s, 0) = π^{−2s} ζ_R(2s).
        let op = bond_scattering_matrix(&interval(0.4, 0.6));
        let cfg = QuadratureConfig::default();
        // ζ_R(−1) = −1/12, ζ_R(0) = −1/2, ζ_R(−2) = 0
        let z = zeta_value(&op, -0.5, 0.0, &cfg).unwrap().value;
        assert!((z - PI * (-1.0 / 12.0)).abs() < 1e-10);
        assert!((zeta_value(&op, 0.0, 0.0, &cfg).unwrap().value + 0.5).abs() < 1e-15);
        assert!(zeta_value(&op, -1.0, 0.0, &cfg).unwrap().value.abs() < 1e-10);
        // ζ_R(1.5) = 2.612375348685488
        let z = zeta_value(&op, 0.75, 0.0, &cfg).unwrap().value;
        assert!((z - PI.powf(-1.5) * 2.612_375_348_685_488).abs() < 1e-9, "{z}");
        // Σ 1/(n²π² + 1)^{1/2 ± …} against a direct partial sum with s = 0.9
        let s = 0.9;
        let lambda = 1.0;
        let direct: f64 = (1..2_000_000).map(|n| ((n as f64 * PI).powi(2) + lambda).powf(-s)).sum::<f64>();
        let tail = PI.powf(-2.0 * s) * (2_000_000f64).powf(1.0 - 2.0 * s) / (2.0 * s - 1.0);
        let z = zeta_value(&op, s, lambda, &cfg).unwrap().value;
        assert!((z - direct - tail).abs() < 1e-7, "{z} vs {}", direct + tail);
        assert!(zeta_value(&op, 0.5, 0.0, &cfg).is_err());
        assert!(zeta_value(&op, -0.5, 1.0, &cfg).is_err());
        assert!(zeta_value(&op, 1.0, 0.0, &cfg).is_err());
    }

    #[test]
    fn force_on_interval() {
        // ℰ = −π/(24 L): total-length derivative gives F = −π/(24 L²).
        let g = interval(0.3, 0.7);
        let f = casimir_force(&g, 0, &QuadratureConfig::default()).unwrap();
        assert!((f.value + PI / 24.0).abs() < 1e-6, "{}", f.value);
    }
}
