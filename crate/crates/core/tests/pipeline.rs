use bigonal_core::lattice::{fixtures, glue_map, nikulin_isometry_class_equal, Embedding, Lattice};
use bigonal_core::linalg::IntMatrix;
use bigonal_core::poly::ratio;
use bigonal_core::prym::{homology_with_intersection, polarization_type, prym_sublattice, CoverPresentation};
use bigonal_core::quartics::{Line, TernaryForm};
use bigonal_core::towers::{bigonal_dual, fiber_monodromy, slice, MonodromyOptions, TowerInstance};
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for &(a, b, k) in ops {
        let (a, b) = (a % n, b % n);
        if a != b {
            u.add_row_multiple(a, b, &BigInt::from(k));
        }
    }
    u
}

fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..32, 0usize..32, -2i64..=2), 0..24)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sublattice_basis_does_not_matter(ops in ops()) {
        let e = fixtures::i17_2_in_k3();
        let v = unimodular(e.rank(), &ops);
        let e2 = Embedding::new(e.ambient().clone(), &v * e.basis()).unwrap();
        prop_assert!(e2.is_primitive());
        let k = e2.orthogonal_complement().unwrap().sublattice();
        prop_assert_eq!(k.triple().unwrap(), e.orthogonal_complement().unwrap().sublattice().triple().unwrap());
        let g = glue_map(&e2).unwrap();
        prop_assert!(g.verified() && g.check.exhaustive);
    }

    #[test]
    fn congruent_grams_share_invariants(ops in ops()) {
        let l = fixtures::i17_2();
        let u = unimodular(l.rank(), &ops);
        let l2 = Lattice::new(u.congruence(l.gram())).unwrap();
        prop_assert_eq!(l2.triple().unwrap(), l.triple().unwrap());
        prop_assert_eq!(l2.determinant(), l.determinant());
    }
}

#[test]
fn alternative_embedding_has_isometric_complement() {
    let a = fixtures::i17_2_in_k3().orthogonal_complement().unwrap().sublattice();
    let b = fixtures::i17_2_in_k3_alt().orthogonal_complement().unwrap().sublattice();
    assert!(nikulin_isometry_class_equal(&a, &b).unwrap());
}

#[test]
fn tower_to_prym_through_text() {
    let sphere = TernaryForm::from_terms(2, &[(1, [2, 0, 0]), (1, [0, 2, 0]), (1, [0, 0, 2])]).unwrap();
    let inst =
        TowerInstance::new(TernaryForm::fermat(), sphere, ratio(1, 2), 1, Line::from_i64([1, 2, 5]).unwrap()).unwrap();
    let s = slice(&inst).unwrap();
    let dual = bigonal_dual(&s.model, 1).model;
    for eq in [s.model.equations(), dual.equations()] {
        let m = fiber_monodromy(&eq, &MonodromyOptions::default()).unwrap();
        let p = CoverPresentation::from_monodromy(&m).unwrap();
        let back = CoverPresentation::from_text(&p.to_text()).unwrap();
        assert_eq!(back.perms, p.perms);
        let h = homology_with_intersection(&back).unwrap();
        assert!(h.is_valid());
        let prym = prym_sublattice(&h).unwrap();
        assert_eq!(polarization_type(&prym).unwrap(), vec![BigInt::one(), BigInt::from(2)]);
        assert!(prym.component_order.is_one());
    }
}
