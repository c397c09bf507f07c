use polyconf::configspace::{
    area_closure_residual, convexity_witness, probe_line, subspace_intersection, SubspaceBasis,
};
use polyconf::family5::{
    basis_vectors, build_polytope, canonical_normals, measure_areas, FamilyParams, PerimeterVector, Verdict,
};
use proptest::prelude::*;

#[test]
fn witness_points() {
    let w = convexity_witness();
    assert!(w.holds());
    let b = basis_vectors();
    let mid = b.v_ii + 0.05 * b.v_i + 0.05 * b.v_iii;
    assert!((w.mid - mid).max_abs() < 1e-15);
    assert!((w.mid[1] - 0.926_794_919_243_112).abs() < 1e-12);
    assert!((w.mid[1] - w.mid[3]).abs() < 1e-15);
    assert!((w.mid[0] - 1.664_101_615_137_754_6).abs() < 1e-12);
}

#[test]
fn control_probe_along_the_ray() {
    let b = basis_vectors();
    let r = probe_line(&b.v_ii, &b.v_ii, 0.5, 100).unwrap();
    assert_eq!(r.half_branch_count, 2);
    assert!(r.samples.iter().all(|s| s.verdict.verdict == Verdict::TypeII));
}

#[test]
fn lambda_ii_is_inside_both_planes() {
    let ii = SubspaceBasis::lambda_ii();
    assert_eq!(subspace_intersection(&ii, &SubspaceBasis::lambda_i()).dim(), 1);
    assert_eq!(subspace_intersection(&ii, &SubspaceBasis::lambda_iii()).dim(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sampled_members_have_one_type(a in -0.3f64..0.3, c in -0.3f64..0.3, g in 0.1f64..3.0) {
        let b = basis_vectors();
        let l = g * b.v_ii + a * b.v_i + c * b.v_iii;
        let r = probe_line(&l, &b.v_i, 0.05, 16).unwrap();
        for s in &r.samples {
            let p = l + s.t * b.v_i;
            let types = [Verdict::TypeI, Verdict::TypeII, Verdict::TypeIII];
            prop_assert!(s.verdict.verdict == Verdict::NotMember || types.contains(&s.verdict.verdict));
            prop_assert!(p.is_finite());
        }
    }

    #[test]
    fn closure_vanishes_on_measured_areas(x in 0.01f64..100.0, y in 0.01f64..100.0) {
        let areas = measure_areas(&build_polytope(&FamilyParams::new(x, y).unwrap()).unwrap());
        let total: f64 = areas.iter().sum();
        let r = area_closure_residual(&canonical_normals(), &areas).unwrap();
        prop_assert!(r <= 1e-16 * total * total);
    }

    #[test]
    fn closure_positive_off_the_plane(f in prop::array::uniform5(0.1f64..10.0)) {
        // the closure equation is linear in F; generic F misses its kernel
        let r = area_closure_residual(&canonical_normals(), &f).unwrap();
        let sum_x = (f[1] - f[2]) / std::f64::consts::SQRT_2;
        let sum_y = (f[3] - f[4]) / std::f64::consts::SQRT_2;
        let sum_z = -f[0] + (f[1] + f[2] + f[3] + f[4]) / std::f64::consts::SQRT_2;
        prop_assert!((r - (sum_x * sum_x + sum_y * sum_y + sum_z * sum_z)).abs() <= 1e-12 * r.max(1.0));
        prop_assert!(r > 0.0 || PerimeterVector(f).max_abs() == 0.0);
    }
}
