use super::*;
use crate::perm::simultaneous_conjugator;
use crate::poly::{match_sets, ratio};
use alloc::vec;

fn sphere() -> TernaryForm {
    TernaryForm::from_terms(2, &[(1, [2, 0, 0]), (1, [0, 2, 0]), (1, [0, 0, 2])]).unwrap()
}

fn fermat_instance() -> TowerInstance {
    TowerInstance::new(TernaryForm::fermat(), sphere(), ratio(1, 2), 1, Line::from_i64([0, 0, 1]).unwrap()).unwrap()
}

#[test]
fn fermat_slice() {
    let s = slice(&fermat_instance()).unwrap();
    assert_eq!(s.model.b, QPoly::from_i64(&[1, 0, 0, 0, 1]));
    assert_eq!(s.model.q, QPoly::from_i64(&[1, 0, 1]));
    // (1 + u²)² − (1 + u⁴)/2 = (u⁴ + 4u² + 1)/2
    assert_eq!(s.model.d, QPoly::from_i64(&[1, 0, 4, 0, 1]).scale(&ratio(1, 2)));
    let zeta8: Vec<Complex64> = (0..4)
        .map(|k| Complex64::from_polar(1.0, core::f64::consts::FRAC_PI_4 * (2 * k + 1) as f64))
        .collect();
    assert!(match_sets(&s.branch.a, &zeta8).unwrap() < 1e-12);
    let p: Vec<Complex64> = [-2.0 + 3f64.sqrt(), -2.0 - 3f64.sqrt()]
        .iter()
        .flat_map(|&u2: &f64| {
            let r = Complex64::new(u2, 0.0).sqrt();
            [r, -r]
        })
        .collect();
    assert!(match_sets(&s.branch.p, &p).unwrap() < 1e-12);
    assert!(s.ledger.balanced(), "{:?}", s.ledger);
    assert_eq!(s.ledger.total_deficiency, 12);
    assert_eq!((s.ledger.genus_upper, s.ledger.genus_lower), (3, 1));
}

#[test]
fn tangent_line_rejected() {
    // B₀ = x⁴ + 2y⁴ − 3z⁴ passes through (1:1:1) with tangent x + 2y − 3z = 0
    let b0 = TernaryForm::from_terms(4, &[(1, [4, 0, 0]), (2, [0, 4, 0]), (-3, [0, 0, 4])]).unwrap();
    let line = Line::from_i64([1, 2, -3]).unwrap();
    let inst = [ratio(1, 3), ratio(-1, 2), ratio(2, 7), ratio(-3, 5)]
        .into_iter()
        .find_map(|l| TowerInstance::new(b0.clone(), sphere(), l, 1, line.clone()).ok())
        .expect("a smooth Δ₀ in the pencil");
    let err = slice(&inst).unwrap_err();
    assert_eq!(err, TowerError::NonGenericLine("double root in b(u)".into()));
    assert_eq!(err.to_string(), "non-generic line: double root in b(u)");
}

#[test]
fn instance_errors() {
    let line = Line::from_i64([0, 0, 1]).unwrap();
    assert_eq!(
        TowerInstance::new(TernaryForm::fermat(), sphere(), ratio(0, 1), 1, line.clone()).unwrap_err(),
        TowerError::LambdaZero
    );
    assert_eq!(
        TowerInstance::new(TernaryForm::fermat(), sphere(), rat(2), 1, line).unwrap_err(),
        TowerError::Singular("Δ0")
    );
}

#[test]
fn dual_identities() {
    let inst = fermat_instance();
    let s = slice(&inst).unwrap();
    let dual = bigonal_dual(&s.model, 3);
    assert!(dual.pencil_identity);
    assert!(dual.max_residual < 1e-10, "{}", dual.max_residual);
    assert_eq!(dual.model.d, s.model.d);
    // μ ↦ −μ gives the same dual
    let s2 = slice(&inst.with_mu_sign(-1)).unwrap();
    assert_eq!(s2.model.mu, -s.model.mu);
    let dual2 = bigonal_dual(&s2.model, 3);
    assert_eq!(dual2.model, dual.model);
    assert!(dual2.max_residual < 1e-10);
}

#[test]
fn step2_branch_swap() {
    let s = slice(&fermat_instance()).unwrap();
    let dual = bigonal_dual(&s.model, 1).model;
    let r = verify_step2(&s.branch, &dual);
    assert!(r.passed(1e-10), "{r:?}");
    assert!(r.mismatch.is_none());

    let mut bad = dual.clone();
    bad.d = &bad.d + &QPoly::from_i64(&[0, 1]).scale(&ratio(1, 100));
    let r = verify_step2(&s.branch, &bad);
    assert!(!r.passed(1e-10));
    assert!(!r.lower_exact);
    assert!(r.mismatch.unwrap().contains("η-cover"));
}

#[test]
fn step3_signs_and_divisor() {
    let inst = fermat_instance();
    let s = slice(&inst).unwrap();
    let dual = bigonal_dual(&s.model, 1).model;
    let sw = slice_in_chart(&inst.swapped().unwrap(), &s.chart).unwrap();
    assert_eq!(sw.model.b, s.model.d);
    let r = verify_step3(&dual, &sw.model);
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.signs.len(), 4);
    assert!(r.signs.iter().all(|&x| x == r.signs[0]));
    assert_eq!(r.twist, rat(2));

    // d replaced by q² − λ′b with λ′ ≠ λ
    let wrong = DualModel {
        d: &s.model.q.pow(2) - &s.model.b.scale(&ratio(1, 3)),
        q: s.model.q.clone(),
        lambda: ratio(1, 3),
    };
    let r = verify_step3(&wrong, &sw.model);
    assert!(!r.passed());
    assert!(r.mismatch.is_some());
}

#[test]
fn dual_of_dual() {
    let inst = fermat_instance();
    let s = slice(&inst).unwrap();
    let sw = slice_in_chart(&inst.swapped().unwrap(), &s.chart).unwrap();
    let dd = bigonal_dual(&sw.model, 2);
    assert!(dd.pencil_identity);
    let bd = dd.model.branch_data();
    assert!(match_sets(&bd.a, &s.branch.a).unwrap() < 1e-10);
    assert!(match_sets(&bd.p, &s.branch.p).unwrap() < 1e-10);
    // the first dual swaps the two sets
    let d1 = bigonal_dual(&s.model, 2).model.branch_data();
    assert!(match_sets(&d1.a, &s.branch.p).unwrap() < 1e-10);
    assert!(match_sets(&d1.p, &s.branch.a).unwrap() < 1e-10);
}

#[test]
fn fermat_monodromy() {
    let s = slice(&fermat_instance()).unwrap();
    let m = fiber_monodromy(&s.model.equations(), &MonodromyOptions::default()).unwrap();
    assert_eq!(m.perms.len(), 8);
    assert!(m.cycle_types_ok(), "{:?}", m.perms);
    assert!(m.product().is_identity());
    assert!(m.is_transitive());
    assert_eq!(m.genus(), 3);
    let tau = Monodromy::tau();
    assert!(m.perms.iter().all(|p| p.commutes_with(&tau)));

    // a nearby basepoint gives simultaneously conjugate permutations
    let near = MonodromyOptions { basepoint: Some(m.basepoint + m.radius * 0.1), ..Default::default() };
    let m2 = fiber_monodromy(&s.model.equations(), &near).unwrap();
    assert_eq!(m2.branch_points.len(), 8);
    for (a, b) in m.branch_points.iter().zip(&m2.branch_points) {
        assert!((a - b).norm() < 1e-12);
    }
    assert!(simultaneous_conjugator(&m.perms, &m2.perms).is_some());

    // the dual tower has the same shape
    let dual = bigonal_dual(&s.model, 1).model;
    let md = fiber_monodromy(&dual.equations(), &MonodromyOptions::default()).unwrap();
    assert!(md.cycle_types_ok() && md.product().is_identity() && md.is_transitive());
}

#[test]
fn dual_ledger() {
    let s = slice(&fermat_instance()).unwrap();
    let dual = bigonal_dual(&s.model, 1).model;
    assert!(dual.equations().genus_ledger(1e-6).balanced());
    assert_eq!(
        vec![s.ledger.deficiencies_lower.len(), s.ledger.deficiencies_upper.len()],
        vec![4, 4]
    );
}
