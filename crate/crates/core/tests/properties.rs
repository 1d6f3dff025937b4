use fstruct_core::flagmetric::{metric_inner, nomizu_alpha, Metric};
use fstruct_core::liealg::{bracket, bracket_tangent, killing_inner, Block, SuElement, TangentVector};
use fstruct_core::phispace::{build_theta, canonical_f, canonical_h, operator_distance, InnerAutomorphism};
use nalgebra::Vector6;
use num_complex::Complex64;
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -1.0f64..1.0
}

fn complex() -> impl Strategy<Value = Complex64> {
    (coord(), coord()).prop_map(|(re, im)| Complex64::new(re, im))
}

fn tangent() -> impl Strategy<Value = TangentVector> {
    (complex(), complex(), complex()).prop_map(|(a, b, c)| TangentVector::new(a, b, c))
}

fn element() -> impl Strategy<Value = SuElement> {
    (coord(), coord(), tangent()).prop_map(|(p1, p2, d)| SuElement::new(p1, p2, d.a, d.b, d.c))
}

fn metric() -> impl Strategy<Value = Metric> {
    (0.1f64..6.0, 0.1f64..6.0, 0.1f64..6.0).prop_map(|(a, b, c)| Metric::new(a, b, c).unwrap())
}

fn block() -> impl Strategy<Value = Block> {
    (0usize..3).prop_map(Block::from_index)
}

/// A diagonal element `diag(ω^p, ω^q, ω^{-p-q})` of exact order `k`, or
/// `None` when the powers generate a smaller order.
fn automorphism() -> impl Strategy<Value = Option<InnerAutomorphism>> {
    (3u32..9, 0i64..9, 0i64..9).prop_map(|(k, p, q)| InnerAutomorphism::from_root_powers(k, [p, q, -p - q]).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn jacobi_identity(x in element(), y in element(), z in element()) {
        let j = bracket(&x, &bracket(&y, &z)) + bracket(&y, &bracket(&z, &x)) + bracket(&z, &bracket(&x, &y));
        prop_assert!(j.max_abs() <= 1e-9);
    }

    #[test]
    fn bracket_grading(b in block(), z1 in complex(), z2 in complex()) {
        let x = TangentVector::in_block(b, z1);
        let same = bracket_tangent(&x, &TangentVector::in_block(b, z2));
        prop_assert!(same.tangent().max_abs() <= 1e-12);
        let next = bracket_tangent(&x, &TangentVector::in_block(b.next(), z2));
        prop_assert!(next.isotropy_part().max_abs() <= 1e-12);
        let t = next.tangent();
        prop_assert!((t - t.block_part(b.after_next())).max_abs() <= 1e-12);
    }

    #[test]
    fn trace_form_is_ad_invariant(x in element(), y in element(), z in element()) {
        let lhs = killing_inner(&bracket(&x, &y), &z);
        let rhs = killing_inner(&x, &bracket(&y, &z));
        prop_assert!((lhs - rhs).abs() <= 1e-9);
    }

    #[test]
    fn nomizu_map_is_torsion_free_and_metric(g in metric(), x in tangent(), y in tangent(), z in tangent()) {
        let torsion = nomizu_alpha(&g, &x, &y) - nomizu_alpha(&g, &y, &x) - fstruct_core::liealg::bracket_m(&x, &y);
        prop_assert!(torsion.max_abs() <= 1e-9);
        let skew = metric_inner(&g, &nomizu_alpha(&g, &x, &y), &z) + metric_inner(&g, &y, &nomizu_alpha(&g, &x, &z));
        prop_assert!(skew.abs() <= 1e-9);
    }

    #[test]
    fn theta_is_orthogonal(auto in automorphism(), x in tangent(), y in tangent()) {
        prop_assume!(auto.is_some());
        let theta = build_theta(&auto.unwrap()).unwrap();
        let v = |t: &TangentVector| Vector6::from_column_slice(&t.to_real());
        let (vx, vy) = (theta.identity() * v(&x), theta.identity() * v(&y));
        let (tx, ty) = (theta.matrix() * vx, theta.matrix() * vy);
        prop_assert!((tx.dot(&ty) - vx.dot(&vy)).abs() <= 1e-9);
    }

    #[test]
    fn canonical_structures_commute(auto in automorphism(), zeta in prop::collection::vec(-1i8..=1, 4), xi in prop::collection::vec(-1i8..=1, 5)) {
        prop_assume!(auto.is_some());
        let theta = build_theta(&auto.unwrap()).unwrap();
        let u = theta.free_coefficients();
        prop_assume!(zeta[..u].iter().any(|z| *z != 0));
        let f = canonical_f(&theta, &zeta[..u]).unwrap();
        let hlen = u + usize::from(theta.order().is_multiple_of(2));
        let h = canonical_h(&theta, &xi[..hlen]).unwrap();
        prop_assert!(operator_distance(&(f.op * h.op), &(h.op * f.op)) <= 1e-9);
        prop_assert!(operator_distance(&(f.op * theta.matrix()), &(theta.matrix() * f.op)) <= 1e-9);
        prop_assert!(f.defining_residual(theta.identity()) <= 1e-9);
        prop_assert!(h.defining_residual(theta.identity()) <= 1e-9);
    }
}
