use polyconf::configspace::area_closure_residual;
use polyconf::family5::{
    basis_vectors, build_polytope, canonical_normals, classify, decompose, measure_areas, measure_perimeters,
    perimeters_from_xy, satisfies_type_i, satisfies_type_ii, satisfies_type_iii, xy_from_perimeters, FamilyParams,
    PerimeterVector, Plane, Verdict, EPS_CLASS, RAY_SLOPE,
};
use polyconf::geometry::{equal_up_to_translation, face_normal_set, Vec3};
use proptest::prelude::*;

fn log_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / (n - 1) as f64)).collect()
}

fn rel_close(a: &PerimeterVector, b: &PerimeterVector, tol: f64) -> bool {
    (0..5).all(|k| (a[k] - b[k]).abs() <= tol * b[k].abs())
}

#[test]
fn inverse_on_log_grid() {
    let g = log_grid(20);
    for &x in &g {
        for &y in &g {
            let l = perimeters_from_xy(&FamilyParams::new(x, y).unwrap()).unwrap();
            let p = xy_from_perimeters(&l).unwrap();
            assert!((p.x - x).abs() <= 1e-9 * x && (p.y - y).abs() <= 1e-9 * y, "({x}, {y}) -> {p:?}");
        }
    }
}

#[test]
fn measured_type_matches_parameter_order() {
    let g = log_grid(12);
    for &x in &g {
        for &y in &g {
            let l = measure_perimeters(&build_polytope(&FamilyParams::new(x, y).unwrap()).unwrap());
            let want = match x.partial_cmp(&y).unwrap() {
                std::cmp::Ordering::Less => Verdict::TypeI,
                std::cmp::Ordering::Equal => Verdict::TypeII,
                std::cmp::Ordering::Greater => Verdict::TypeIII,
            };
            assert_eq!(classify(&l, EPS_CLASS).verdict, want, "x={x} y={y}");
        }
    }
}

#[test]
fn type_ii_is_the_limit_of_type_i() {
    let base = perimeters_from_xy(&FamilyParams::new(1.0, 1.0).unwrap()).unwrap();
    let mut last = f64::INFINITY;
    for e in 1..12 {
        let delta = 10f64.powi(-e);
        let l = perimeters_from_xy(&FamilyParams::new(1.0, 1.0 + delta).unwrap()).unwrap();
        let gap = (l - base).max_abs();
        assert!(gap < last && gap <= 4.0 * delta * (1.0 + 1e-3) + 1e-14);
        last = gap;
    }
}

#[test]
fn area_closure_on_family_polytopes() {
    let p = build_polytope(&FamilyParams::new(1.0, 2.0).unwrap()).unwrap();
    let areas = measure_areas(&p);
    let r = area_closure_residual(&canonical_normals(), &areas).unwrap();
    assert!(r <= 1e-18, "{r:e}");
    let s2 = std::f64::consts::SQRT_2;
    for (a, want) in areas.iter().zip([8.0, s2, s2, 3.0 * s2, 3.0 * s2]) {
        assert!((a - want).abs() < 1e-12);
    }
}

#[test]
fn decompose_rejects_off_plane_points() {
    let l = PerimeterVector([1.0, 2.0, 3.0, 4.0, 5.0]);
    assert!(decompose(&l, Plane::LambdaI).is_err());
    assert!(decompose(&l, Plane::LambdaIII).is_err());
}

fn member_strategy() -> impl Strategy<Value = (Verdict, PerimeterVector)> {
    let b = basis_vectors();
    prop_oneof![
        (1e-3f64..1.0, 1e-3f64..10.0)
            .prop_map(move |(a, u)| (Verdict::TypeI, a * b.v_i + RAY_SLOPE * a * (1.0 + u) * b.v_ii)),
        (1e-2f64..100.0).prop_map(move |g| (Verdict::TypeII, g * b.v_ii)),
        (1e-3f64..1.0, 1e-3f64..10.0)
            .prop_map(move |(d, u)| (Verdict::TypeIII, d * b.v_iii + RAY_SLOPE * d * (1.0 + u) * b.v_ii)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closed_form_matches_kernel(x in 0.01f64..100.0, y in 0.01f64..100.0) {
        let params = FamilyParams::new(x, y).unwrap();
        let measured = measure_perimeters(&build_polytope(&params).unwrap());
        prop_assert!(rel_close(&measured, &perimeters_from_xy(&params).unwrap(), 1e-8));
    }

    #[test]
    fn members_are_exactly_the_buildable_vectors((verdict, l) in member_strategy()) {
        let c = classify(&l, EPS_CLASS);
        prop_assert_eq!(c.verdict, verdict);
        let poly = build_polytope(&xy_from_perimeters(&l).unwrap()).unwrap();
        prop_assert_eq!(face_normal_set(&poly).len(), 5);
        prop_assert!(rel_close(&measure_perimeters(&poly), &l, 1e-8));
    }

    #[test]
    fn verdict_predicates_are_exclusive(l in prop::array::uniform5(-10.0f64..10.0)) {
        let l = PerimeterVector(l);
        let hits = [satisfies_type_i(&l, EPS_CLASS), satisfies_type_ii(&l, EPS_CLASS), satisfies_type_iii(&l, EPS_CLASS)]
            .iter()
            .filter(|b| **b)
            .count();
        prop_assert!(hits <= 1);
        // a generic point of R^5 is not realizable
        prop_assert_eq!(classify(&l, EPS_CLASS).verdict, Verdict::NotMember);
    }

    #[test]
    fn coefficient_window_decides_type_i(a in -1.0f64..1.0, beta in -1.0f64..10.0) {
        let b = basis_vectors();
        let l = a * b.v_i + beta * b.v_ii;
        let inside = beta > RAY_SLOPE * a * (1.0 + 1e-6) && a > 1e-6;
        let outside = a < -1e-6 || beta < RAY_SLOPE * a * (1.0 - 1e-6);
        if inside {
            prop_assert!(satisfies_type_i(&l, EPS_CLASS));
        }
        if outside {
            prop_assert!(!satisfies_type_i(&l, EPS_CLASS));
        }
    }

    #[test]
    fn reconstructions_agree_up_to_translation(
        x in 0.05f64..20.0, y in 0.05f64..20.0,
        cx in -5.0f64..5.0, cy in -5.0f64..5.0, cz in -5.0f64..5.0,
    ) {
        let l = perimeters_from_xy(&FamilyParams::new(x, y).unwrap()).unwrap();
        let params = xy_from_perimeters(&l).unwrap();
        let a = build_polytope(&params).unwrap();
        let b = build_polytope(&params.with_center(Vec3::new(cx, cy, cz))).unwrap();
        let source = build_polytope(&FamilyParams::new(x, y).unwrap()).unwrap();
        prop_assert!(equal_up_to_translation(&a, &b, 1e-9 * a.diameter().max(1.0)));
        prop_assert!(equal_up_to_translation(&a, &source, 1e-8 * a.diameter()));
    }
}
