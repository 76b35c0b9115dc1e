use std::sync::Arc;

use proptest::prelude::*;

use elastweak::cli::MeshSource;
use elastweak::fespace::{FeSpace, SpaceSpec};
use elastweak::mesh::{build_box_mesh, read_msh, write_msh};
use elastweak::polyform::{cross, cross_skew_check, ratio, vect, vect_inv, xi, xi_inv, Poly, PolyForm, Rational, ValueSpace};
use elastweak::verify::{fit_rate, run_identity_suite, IdentityHooks};

fn q() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, d)| ratio(p, d))
}

fn vec3() -> impl Strategy<Value = [Rational; 3]> {
    [q(), q(), q()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vect_inverts_vect_inv(v in vec3()) {
        prop_assert_eq!(vect(&vect_inv(&v)).unwrap(), v);
    }

    #[test]
    fn xi_pair_inverts(m in [vec3(), vec3(), vec3()]) {
        prop_assert_eq!(xi_inv(&xi(&m)), m.clone());
        prop_assert_eq!(xi(&xi_inv(&m)), m);
    }

    #[test]
    fn cross_product_is_twice_skew_axial(a in vec3(), b in vec3()) {
        let (lhs, rhs) = cross_skew_check(&a, &b);
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(lhs, cross(&a, &b));
    }

    #[test]
    fn fitted_slope_recovers_power_law(c in 0.01f64..100.0, p in 0.5f64..4.0, h0 in 0.1f64..1.0) {
        let h: Vec<f64> = (0..4).map(|i| h0 / 2f64.powi(i)).collect();
        let e: Vec<f64> = h.iter().map(|h| c * h.powf(p)).collect();
        prop_assert!((fit_rate(&h, &e) - p).abs() < 1e-9);
    }

    #[test]
    fn box_mesh_sources_round_trip(ns in proptest::collection::vec(1usize..20, 1..5)) {
        let src = MeshSource::Box(ns);
        prop_assert_eq!(src.to_string().parse::<MeshSource>().unwrap(), src);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn identity_suite_holds_for_any_seed(seed in any::<u64>()) {
        let report = run_identity_suite(seed, 3, &IdentityHooks::default());
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn box_meshes_are_contractible(n in 1usize..4) {
        let mesh = build_box_mesh(n).unwrap();
        prop_assert_eq!(mesh.num_tets(), 6 * n * n * n);
        prop_assert_eq!(mesh.euler_characteristic(), 1);
        let mut buf = Vec::new();
        write_msh(&mesh, &mut buf).unwrap();
        let back = read_msh(buf.as_slice()).unwrap();
        prop_assert_eq!(back.num_faces(), mesh.num_faces());
        prop_assert_eq!(back.vertices(), mesh.vertices());
    }

    #[test]
    fn linear_stress_fields_are_reproduced(c in proptest::collection::vec(q(), 12)) {
        // one affine coefficient per basis 2-form and value component
        let mesh = Arc::new(build_box_mesh(1).unwrap());
        let space = FeSpace::<Rational>::new(mesh, SpaceSpec::p(1, 2, ValueSpace::V)).unwrap();
        let mut w = PolyForm::zero(3, 2, ValueSpace::V);
        for comp in 0..3 {
            for b in 0..3 {
                let i = 4 * comp + b;
                let p = Poly::constant(3, c[i].clone()).add(&Poly::var(3, b).scale(&c[(i + 3) % 12]));
                *w.coeff_mut(comp, b) = p;
            }
        }
        let coeffs = space.interpolate_poly(&w);
        for t in 0..space.num_cells() {
            prop_assert_eq!(space.physical_form(t, &coeffs), w.clone());
        }
    }
}
