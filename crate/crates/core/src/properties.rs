//! Randomized invariants over bond lengths.

use num_complex::Complex64;
use proptest::prelude::*;

use crate::charpoly::{coeffs_direct, coeffs_pseudo_orbit};
use crate::graph::complete_graph;
use crate::orbits::enumerate_irreducible_pseudo_orbits;
use crate::scattering::bond_scattering_matrix;
use crate::secular::{secular_direct, SecularExpansion};

fn lengths() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..1.0, 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn k4_orbit_coefficients_match_determinant(ls in lengths(), k in 0.01f64..80.0) {
        let g = complete_graph(&["a", "b", "c", "d"], &ls).unwrap();
        let op = bond_scattering_matrix(&g);
        prop_assert!(op.unitarity_defect() < 1e-12);
        let set = enumerate_irreducible_pseudo_orbits(&g, op.dim()).unwrap();
        let z = Complex64::new(k, 0.0);
        let o = coeffs_pseudo_orbit(&set, &op, z).unwrap();
        let d = coeffs_direct(&op, z).unwrap();
        prop_assert!(o.max_abs_diff(&d) < 1e-9);
        prop_assert!(o.symmetry_residual() < 1e-10);
    }

    #[test]
    fn secular_function_is_real_and_matches(ls in lengths(), k in 0.01f64..80.0, t in 0.01f64..30.0) {
        let g = complete_graph(&["a", "b", "c", "d"], &ls).unwrap();
        let op = bond_scattering_matrix(&g);
        let ex = SecularExpansion::from_operator(&op).unwrap();
        let z = Complex64::new(k, 0.0);
        let f = ex.secular(z);
        prop_assert!(f.im.abs() < 1e-9 * f.norm().max(1.0));
        prop_assert!((f - secular_direct(&op, z)).norm() < 1e-9 * f.norm().max(1.0));
        prop_assert!(ex.fhat(Complex64::new(0.0, t)).re > 0.0);
    }

    #[test]
    fn scaling_lengths_scales_roots(ls in lengths(), c in 0.5f64..2.0, k in 0.01f64..40.0) {
        // F_{cL}(k/c) = F_L(k)
        let g = complete_graph(&["a", "b", "c", "d"], &ls).unwrap();
        let scaled: Vec<f64> = ls.iter().map(|l| l * c).collect();
        let h = complete_graph(&["a", "b", "c", "d"], &scaled).unwrap();
        let fg = SecularExpansion::from_operator(&bond_scattering_matrix(&g)).unwrap().secular_real(k);
        let fh = SecularExpansion::from_operator(&bond_scattering_matrix(&h)).unwrap().secular_real(k / c);
        prop_assert!((fg - fh).abs() < 1e-9 * fg.abs().max(1.0));
    }
}
