//! Vertex-scattering matrices, the bond-scattering matrix and U(k).

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::MetricGraph;

pub type CMatrix = DMatrix<Complex64>;

/// Tolerance on |det S ∓ 1| for classifying θ.
pub const THETA_TOL: f64 = 1e-8;

/// Neumann vertex-scattering matrix of a degree-`d` vertex: `2/d − δ`.
pub fn vertex_scattering_matrix(d: usize) -> Result<DMatrix<f64>> {
    if d == 0 {
        return Err(Error::ZeroDegree);
    }
    let off = 2.0 / d as f64;
    Ok(DMatrix::from_fn(d, d, |i, j| if i == j { off - 1.0 } else { off }))
}

/// The k-independent bond-scattering matrix S together with the arc lengths
/// needed to form `U(k) = diag(e^{ik l_b}) S`.
#[derive(Debug, Clone)]
pub struct EvolutionOperator {
    graph: MetricGraph,
    s: CMatrix,
    arc_lengths: Vec<f64>,
    det_s: Complex64,
    neumann: bool,
}

/// Assemble S for Neumann conditions at every vertex.
pub fn bond_scattering_matrix(g: &MetricGraph) -> EvolutionOperator {
    EvolutionOperator::with_vertex_matrices(g, &BTreeMap::new())
        .expect("Neumann vertex matrices always have the right shape")
}

impl EvolutionOperator {
    pub fn neumann(g: &MetricGraph) -> Self {
        bond_scattering_matrix(g)
    }

    /// S built from user-supplied k-independent vertex matrices, keyed by
    /// vertex label. Vertices not in `custom` get Neumann conditions. Rows and
    /// columns of each matrix follow the ascending order of the arcs leaving
    /// that vertex.
    pub fn with_vertex_matrices(g: &MetricGraph, custom: &BTreeMap<String, CMatrix>) -> Result<Self> {
        let n = g.arc_count();
        let mut blocks = Vec::with_capacity(g.vertex_count());
        for v in 0..g.vertex_count() {
            let d = g.degree(v);
            let block = match custom.get(g.label(v)) {
                Some(m) => {
                    if m.nrows() != d || m.ncols() != d {
                        return Err(Error::VertexMatrixShape {
                            vertex: g.label(v).to_owned(),
                            expected: d,
                        });
                    }
                    m.clone()
                }
                None => vertex_scattering_matrix(d)?.map(|x| Complex64::new(x, 0.0)),
            };
            blocks.push(block);
        }
        if let Some(label) = custom.keys().find(|l| g.vertex_index(l).is_none()) {
            return Err(Error::UnknownVertex(label.clone()));
        }

        let slot = |arc: usize| {
            let v = g.origin(arc);
            g.out_arcs(v).binary_search(&arc).expect("arc leaves its origin")
        };
        let mut s = CMatrix::zeros(n, n);
        for b in 0..n {
            let v = g.terminus(b);
            let incoming = slot(g.reverse(b));
            for &out in g.out_arcs(v) {
                s[(out, b)] = blocks[v][(slot(out), incoming)];
            }
        }
        let det_s = s.clone().determinant();
        Ok(Self {
            graph: g.clone(),
            s,
            arc_lengths: g.arc_lengths(),
            det_s,
            neumann: custom.is_empty(),
        })
    }

    pub fn graph(&self) -> &MetricGraph {
        &self.graph
    }

    pub fn s(&self) -> &CMatrix {
        &self.s
    }

    pub fn arc_lengths(&self) -> &[f64] {
        &self.arc_lengths
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    pub fn total_length(&self) -> f64 {
        self.graph.total_length()
    }

    pub fn is_neumann(&self) -> bool {
        self.neumann
    }

    pub fn det_s(&self) -> Complex64 {
        self.det_s
    }

    /// `U(k) = diag(e^{ik l_b}) S`: row `b'` of S scaled by `e^{ik l_{b'}}`.
    pub fn evolution(&self, k: Complex64) -> CMatrix {
        let mut u = self.s.clone();
        for (row, &l) in self.arc_lengths.iter().enumerate() {
            let phase = (Complex64::i() * k * l).exp();
            for x in u.row_mut(row).iter_mut() {
                *x *= phase;
            }
        }
        u
    }

    pub fn evolution_real(&self, k: f64) -> CMatrix {
        self.evolution(Complex64::new(k, 0.0))
    }

    /// θ ∈ {0, π/2} with det S = e^{2iθ}.
    pub fn theta(&self) -> Result<f64> {
        if (self.det_s - 1.0).norm() <= THETA_TOL {
            Ok(0.0)
        } else if (self.det_s + 1.0).norm() <= THETA_TOL {
            Ok(FRAC_PI_2)
        } else {
            Err(Error::NonNeumann {
                re: self.det_s.re,
                im: self.det_s.im,
            })
        }
    }

    /// θ for arbitrary unitary S: the half-argument of det S in (−π/2, π/2].
    /// Agrees with [`theta`](Self::theta) whenever that succeeds.
    pub fn phase(&self) -> f64 {
        match self.theta() {
            Ok(t) => t,
            Err(_) => self.det_s.arg() / 2.0,
        }
    }

    /// ‖S†S − I‖_max
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.s.adjoint() * &self.s;
        max_abs_diff_identity(&prod)
    }

    /// Singular values of I − U(k), ascending.
    pub fn secular_singular_values(&self, k: Complex64) -> Vec<f64> {
        let m = CMatrix::identity(self.dim(), self.dim()) - self.evolution(k);
        let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
        sv.sort_by(f64::total_cmp);
        sv
    }

    /// Number of singular values of I − U(k) below `tol`.
    pub fn kernel_dim(&self, k: f64, tol: f64) -> usize {
        self.secular_singular_values(Complex64::new(k, 0.0))
            .iter()
            .filter(|&&s| s < tol)
            .count()
    }
}

pub(crate) fn max_abs_diff_identity(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((m[(i, j)] - target).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, complete_graph, GraphSpec};

    fn path() -> MetricGraph {
        build_graph(&GraphSpec::new(["a", "b", "c"]).edge("a", "b", 0.4).edge("b", "c", 0.6)).unwrap()
    }

    fn k4() -> MetricGraph {
        complete_graph(&["a", "b", "c", "d"], &[0.31, 0.47, 0.59, 0.73, 0.83, 0.97]).unwrap()
    }

    #[test]
    fn vertex_matrices() {
        assert_eq!(vertex_scattering_matrix(1).unwrap()[(0, 0)], 1.0);
        let t = vertex_scattering_matrix(2).unwrap();
        assert_eq!(t, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let m = vertex_scattering_matrix(3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { -1.0 / 3.0 } else { 2.0 / 3.0 };
                assert!((m[(i, j)] - expected).abs() < 1e-15);
            }
        }
        assert!(matches!(vertex_scattering_matrix(0), Err(Error::ZeroDegree)));
        for d in 1..8 {
            let m = vertex_scattering_matrix(d).unwrap();
            assert_eq!(m, m.transpose());
            let id = &m * &m;
            assert!((id - DMatrix::identity(d, d)).amax() < 1e-14);
            for row in m.row_iter() {
                assert!((row.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn path_scattering_matrix() {
        let op = bond_scattering_matrix(&path());
        let g = op.graph();
        // Six structurally allowed entries (Σ d_v²); the two backscatter
        // entries at b are exactly zero.
        let allowed = (0..4)
            .flat_map(|b| (0..4).map(move |bp| (b, bp)))
            .filter(|&(b, bp)| g.terminus(b) == g.origin(bp))
            .count();
        assert_eq!(allowed, 6);
        let nonzero = op.s().iter().filter(|x| x.norm() > 0.0).count();
        assert_eq!(nonzero, 4);
        // Backscattering at the degree-2 vertex b vanishes.
        let b = g.vertex_index("b").unwrap();
        for arc in 0..4 {
            if g.terminus(arc) == b {
                assert_eq!(op.s()[(g.reverse(arc), arc)].norm(), 0.0);
            }
        }
        assert_eq!(op.theta().unwrap(), FRAC_PI_2);
    }

    #[test]
    fn k4_rows() {
        let op = bond_scattering_matrix(&k4());
        for row in op.s().row_iter() {
            let nz: Vec<f64> = row.iter().filter(|x| x.norm() > 0.0).map(|x| x.re).collect();
            assert_eq!(nz.len(), 3);
            for x in nz {
                assert!((x + 1.0 / 3.0).abs() < 1e-15 || (x - 2.0 / 3.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn structural_invariants() {
        for g in [path(), k4()] {
            let op = bond_scattering_matrix(&g);
            assert!(op.unitarity_defect() < 1e-12);
            let n = g.arc_count();
            for b in 0..n {
                for bp in 0..n {
                    if op.s()[(bp, b)].norm() > 0.0 {
                        assert_eq!(g.terminus(b), g.origin(bp));
                    }
                }
            }
            let det = op.det_s();
            assert!((det.norm() - 1.0).abs() < 1e-10 && det.im.abs() < 1e-10);
            assert!(op.theta().is_ok());
            assert_eq!(op.kernel_dim(0.0, 1e-8), g.zero_mode_order());
        }
    }

    #[test]
    fn evolution_operator_scaling() {
        let op = bond_scattering_matrix(&k4());
        assert_eq!(op.evolution_real(0.0), *op.s());
        let u = op.evolution_real(2.7);
        let prod = u.adjoint() * &u;
        assert!(max_abs_diff_identity(&prod) < 1e-12);

        let t = 3.0;
        let lmin = op.arc_lengths().iter().copied().fold(f64::INFINITY, f64::min);
        let smax = op.s().iter().map(|x| x.norm()).fold(0.0, f64::max);
        let ui = op.evolution(Complex64::new(0.0, t));
        for x in ui.iter() {
            assert!(x.norm() <= (-t * lmin).exp() * smax + 1e-15);
        }
    }

    #[test]
    fn path_eigenphases_continuous() {
        // U(k) for the path is a weighted 4-cycle permutation, so its
        // eigenvalues are the fourth roots of e^{2ik(l1+l2)} det-phase; track
        // the sorted phases on a fine grid and check small steps.
        let op = bond_scattering_matrix(&path());
        let mut prev: Option<Vec<Complex64>> = None;
        for i in 0..400 {
            let k = i as f64 * 0.01;
            let mut ev = crate::numeric::eigenvalues(&op.evolution_real(k)).unwrap();
            if let Some(p) = &prev {
                // Each new eigenvalue is close to some previous one.
                for z in &ev {
                    let d = p.iter().map(|w| (z - w).norm()).fold(f64::INFINITY, f64::min);
                    assert!(d < 0.05, "jump {d} at k={k}");
                }
            }
            ev.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
            prev = Some(ev);
        }
    }

    #[test]
    fn custom_vertex_matrix_shape_checked() {
        let g = path();
        let mut custom = BTreeMap::new();
        custom.insert("b".to_owned(), CMatrix::identity(3, 3));
        assert!(matches!(
            EvolutionOperator::with_vertex_matrices(&g, &custom),
            Err(Error::VertexMatrixShape { .. })
        ));
        let mut custom = BTreeMap::new();
        custom.insert("zz".to_owned(), CMatrix::identity(1, 1));
        assert!(EvolutionOperator::with_vertex_matrices(&g, &custom).is_err());
    }

    #[test]
    fn custom_unitary_vertex_matrix() {
        // A complex unitary 2×2 at the middle vertex of the path.
        let g = path();
        let (c, s) = (0.6, 0.8);
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(c, 0.0),
                Complex64::new(0.0, s),
                Complex64::new(0.0, s),
                Complex64::new(c, 0.0),
            ],
        );
        let mut custom = BTreeMap::new();
        custom.insert("b".to_owned(), m);
        let op = EvolutionOperator::with_vertex_matrices(&g, &custom).unwrap();
        assert!(!op.is_neumann());
        assert!(op.unitarity_defect() < 1e-12);
        assert!((op.det_s().norm() - 1.0).abs() < 1e-12);
    }
}
