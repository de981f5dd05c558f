use super::fixtures::{i17_2, i17_2_in_k3, i17_2_in_k3_alt};
use super::*;
use crate::linalg::{integer_kernel, row_lattice_basis};
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

fn emb(ambient: Lattice, rows: &[&[i64]]) -> Embedding {
    Embedding::new(ambient, IntMatrix::from_rows(rows)).unwrap()
}

fn uu() -> Lattice {
    Lattice::hyperbolic_plane().direct_sum(&Lattice::hyperbolic_plane())
}

fn triple(sig: (usize, usize), a: usize, delta: u8) -> Triple {
    Triple { rank: sig.0 + sig.1, signature: sig, a, delta }
}

#[test]
fn triples() {
    assert_eq!(i17_2().triple().unwrap(), triple((1, 7), 8, 1));
    let u2 = Lattice::hyperbolic_plane().rescale(2);
    assert_eq!(u2.triple().unwrap(), triple((1, 1), 2, 0));
    assert_eq!(Lattice::hyperbolic_plane().triple().unwrap(), triple((1, 1), 0, 0));
    assert_eq!(Lattice::a1().triple().unwrap(), triple((0, 1), 1, 1));
    assert_eq!(Lattice::e8().rescale(2).triple().unwrap(), triple((8, 0), 8, 0));
}

#[test]
fn triple_errors() {
    assert_eq!(Lattice::odd_unimodular(1, 1).triple(), Err(LatticeError::NotEven));
    assert_eq!(
        Lattice::from_rows(&[[2, 0], [0, 0]]).unwrap().triple(),
        Err(LatticeError::Degenerate)
    );
    assert!(matches!(
        Lattice::from_rows(&[[4]]).unwrap().triple(),
        Err(LatticeError::NotTwoElementary(_))
    ));
    assert_eq!(Lattice::from_rows(&[[0, 1], [2, 0]]), Err(LatticeError::NotSymmetric));
}

#[test]
fn discriminant_forms() {
    // U(2): generators e/2, f/2 with q = 0 and b = 1/2
    let d = Lattice::hyperbolic_plane().rescale(2).discriminant_group().unwrap();
    assert_eq!(d.order(), BigInt::from(4));
    let gens = d.generator_classes();
    for g in &gens {
        assert!(d.quadratic(g).is_zero());
    }
    assert_eq!(d.bilinear(&gens[0], &gens[1]), BigRational::new(1.into(), 2.into()));
    // A1 = <-2>: q(x/2) = -1/2 = 3/2 mod 2
    let a1 = Lattice::a1().discriminant_group().unwrap();
    assert_eq!(a1.quadratic(&[BigInt::from(1)]), BigRational::new(3.into(), 2.into()));
    // classes are independent of the chosen representative
    let x = a1.representative(&[BigInt::from(1)]);
    let shifted: Vec<BigRational> = x.iter().map(|v| v + BigRational::from_integer(5.into())).collect();
    assert_eq!(a1.class_of(&shifted).unwrap(), vec![BigInt::from(1)]);
    let third = vec![BigRational::new(1.into(), 3.into())];
    assert_eq!(a1.class_of(&third), Err(LatticeError::NotDualVector));
    assert_eq!(d.elements().count(), 4);
}

#[test]
fn k3_lattice() {
    let k3 = Lattice::k3();
    assert_eq!(k3.rank(), 22);
    assert_eq!(k3.signature().unwrap(), (3, 19));
    assert!(k3.is_even());
    assert!(k3.is_unimodular());
    assert_eq!(Lattice::e8().determinant(), BigInt::from(1));
}

#[test]
fn complements() {
    let u = Lattice::hyperbolic_plane();
    let c = emb(u.clone(), &[&[1, 1]]).orthogonal_complement().unwrap();
    assert_eq!(row_lattice_basis(c.basis()), row_lattice_basis(&IntMatrix::from_rows(&[[1, -1]])));
    let full = emb(u, &[&[1, 0], &[0, 1]]).orthogonal_complement().unwrap();
    assert_eq!(full.rank(), 0);

    let e = i17_2_in_k3();
    assert_eq!(e.sublattice(), i17_2());
    let k = e.orthogonal_complement().unwrap();
    assert_eq!(k.rank(), 14);
    assert_eq!(k.rank() - 2, 12);
    let kl = k.sublattice();
    assert_eq!(kl.signature().unwrap(), (2, 12));
    assert_eq!(kl.triple().unwrap(), triple((2, 12), 8, 1));
    assert!(k.is_primitive());
    assert!((&e.basis().clone() * e.ambient().gram())
        .mul_vec(&k.basis().row_vec(0))
        .iter()
        .all(Zero::is_zero));
}

#[test]
fn primitivity() {
    let u = Lattice::hyperbolic_plane();
    assert!(emb(u.clone(), &[&[1, 1]]).is_primitive());
    assert!(!emb(u.clone(), &[&[2, 0]]).is_primitive());
    let e = emb(u, &[&[1, 1], &[1, -1]]);
    assert!(!e.is_primitive());
    assert_eq!(e.saturation_index(), BigInt::from(2));
    assert!(e.saturation().is_primitive());
    assert!(i17_2_in_k3().is_primitive());
    assert!(i17_2_in_k3_alt().is_primitive());
}

#[test]
fn glue_in_hyperbolic_plane() {
    let g = glue_map(&emb(Lattice::hyperbolic_plane(), &[&[1, 1]])).unwrap();
    assert_eq!(g.order(), BigInt::from(2));
    assert!(g.verified());
    let x = vec![BigInt::from(1)];
    assert_eq!(g.source.quadratic(&x), BigRational::new(1.into(), 2.into()));
    assert_eq!(g.target.quadratic(&g.apply(&x)), BigRational::new(3.into(), 2.into()));
}

#[test]
fn glue_trivial_and_errors() {
    let g = glue_map(&emb(uu(), &[&[1, 0, 0, 0], &[0, 1, 0, 0]])).unwrap();
    assert!(g.source.is_trivial() && g.target.is_trivial());
    assert!(g.verified());
    assert_eq!(
        glue_map(&emb(Lattice::hyperbolic_plane(), &[&[2, 0]])).unwrap_err(),
        LatticeError::NotPrimitive
    );
    let a1a1 = Lattice::a1().direct_sum(&Lattice::a1());
    assert_eq!(
        glue_map(&emb(a1a1, &[&[1, 0]])).unwrap_err(),
        LatticeError::NotUnimodular
    );
}

#[test]
fn glue_in_k3() {
    let g = glue_map(&i17_2_in_k3()).unwrap();
    assert_eq!(g.order(), BigInt::from(256));
    assert_eq!(g.target.order(), BigInt::from(256));
    assert!(g.check.exhaustive);
    assert_eq!(g.check.elements_checked, 256);
    assert!(g.verified(), "{:?}", g.check);
}

fn check_involution(e: &Embedding, inv: &IntMatrix) {
    let n = e.ambient().rank();
    let g = e.ambient().gram();
    let id = IntMatrix::identity(n);
    assert_eq!(&(inv * inv), &id);
    assert_eq!(&(&inv.transpose() * g) * inv, *g);
    let fixed = integer_kernel(&inv.sub(&id));
    assert_eq!(fixed, row_lattice_basis(&e.saturation().basis().clone()));
    let anti = integer_kernel(&inv.add(&id));
    let perp = e.orthogonal_complement().unwrap();
    assert_eq!(anti, row_lattice_basis(perp.basis()));
}

#[test]
fn involutions() {
    let e = emb(Lattice::hyperbolic_plane(), &[&[1, 1]]);
    let inv = involution_from_sublattice(&e).unwrap();
    assert_eq!(inv, IntMatrix::from_rows(&[[0, 1], [1, 0]]));
    check_involution(&e, &inv);

    let full = emb(uu(), &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
    assert_eq!(involution_from_sublattice(&full).unwrap(), IntMatrix::identity(4));

    let e = i17_2_in_k3();
    let inv = involution_from_sublattice(&e).unwrap();
    check_involution(&e, &inv);
    assert_eq!(integer_kernel(&inv.sub(&IntMatrix::identity(22))).rows(), 8);
    assert_eq!(integer_kernel(&inv.add(&IntMatrix::identity(22))).rows(), 14);
}

#[test]
fn involution_not_integral() {
    // <e + 2f> has norm 4; the projection of e is (e + 2f)/2
    let e = emb(Lattice::hyperbolic_plane(), &[&[1, 2]]);
    assert!(matches!(
        involution_from_sublattice(&e),
        Err(LatticeError::ExtensionNotIntegral(_))
    ));
}

#[test]
fn extensions() {
    let u = Lattice::hyperbolic_plane();
    let e = emb(u.clone(), &[&[1, 1]]);
    let id1 = IntMatrix::identity(1);
    let neg1 = id1.neg();
    assert_eq!(
        extend_isometry(&e, &e, &id1, &id1).unwrap(),
        Extension::Isometry(IntMatrix::identity(2))
    );
    assert_eq!(
        extend_isometry(&e, &e, &neg1, &neg1).unwrap(),
        Extension::Isometry(IntMatrix::identity(2).neg())
    );
    // Z/2 has a single automorphism, so (id, −id) glues: it is the swap e ↔ f.
    assert_eq!(
        extend_isometry(&e, &e, &id1, &neg1).unwrap(),
        Extension::Isometry(IntMatrix::from_rows(&[[0, 1], [1, 0]]))
    );

    let e = i17_2_in_k3();
    let k = 14;
    assert_eq!(
        extend_isometry(&e, &e, &IntMatrix::identity(8), &IntMatrix::identity(k)).unwrap(),
        Extension::Isometry(IntMatrix::identity(22))
    );
    assert_eq!(
        extend_isometry(&e, &e, &IntMatrix::identity(8), &IntMatrix::identity(k).neg()).unwrap(),
        Extension::Isometry(involution_from_sublattice(&e).unwrap())
    );
}

#[test]
fn extension_incompatible() {
    // M = <e1+f1, e2+f2>: A_M = (Z/2)², swapping the two generators on M only
    let e = emb(uu(), &[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
    let swap = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
    let id = IntMatrix::identity(2);
    match extend_isometry(&e, &e, &swap, &id).unwrap() {
        Extension::Incompatible(m) => {
            assert!(!m.is_empty());
            for x in &m {
                assert_ne!(x.via_sublattice, x.via_complement);
            }
        }
        other => panic!("expected incompatibility, got {other:?}"),
    }
    // swapping on both sides is compatible and exchanges the two U summands
    let t = match extend_isometry(&e, &e, &swap, &swap).unwrap() {
        Extension::Isometry(t) => t,
        other => panic!("{other:?}"),
    };
    let g = uu().gram().clone();
    assert_eq!(&(&t.transpose() * &g) * &t, g);
}

#[test]
fn extension_rejects_non_isometry() {
    let e = emb(Lattice::hyperbolic_plane(), &[&[1, 1]]);
    let two = IntMatrix::from_rows(&[[2]]);
    let id1 = IntMatrix::identity(1);
    assert_eq!(
        extend_isometry(&e, &e, &two, &id1).unwrap_err(),
        LatticeError::NotIsometry("phi")
    );
    assert_eq!(
        extend_isometry(&e, &e, &id1, &two).unwrap_err(),
        LatticeError::NotIsometry("psi")
    );
}

#[test]
fn extension_between_embeddings() {
    // Two embeddings of <2> in U ⊕ U, one in each summand.
    let a = emb(uu(), &[&[1, 1, 0, 0]]);
    let b = emb(uu(), &[&[0, 0, 1, 1]]);
    let ka = a.orthogonal_complement().unwrap().sublattice();
    let kb = b.orthogonal_complement().unwrap().sublattice();
    assert!(nikulin_isometry_class_equal(&ka, &kb).unwrap());
    // ψ must be a Gram isometry in the chosen complement bases; find one by search.
    let psi = find_isometry(ka.gram(), kb.gram()).expect("complements are isometric");
    match extend_isometry(&a, &b, &IntMatrix::identity(1), &psi).unwrap() {
        Extension::Isometry(t) => {
            let g = uu().gram().clone();
            assert_eq!(&(&t.transpose() * &g) * &t, g);
            let img = t.mul_vec(&a.basis().row_vec(0));
            assert_eq!(img, b.basis().row_vec(0));
        }
        Extension::Incompatible(m) => panic!("{m:?}"),
    }
}

/// Brute-force search over small entries for `Ψ` with `Ψᵀ·G2·Ψ = G1`.
fn find_isometry(g1: &IntMatrix, g2: &IntMatrix) -> Option<IntMatrix> {
    let n = g1.rows();
    let vals: Vec<i64> = (-1..=1).collect();
    let total = vals.len().pow((n * n) as u32);
    (0..total).find_map(|mut code| {
        let mut data = Vec::with_capacity(n * n);
        for _ in 0..n * n {
            data.push(vals[code % vals.len()]);
            code /= vals.len();
        }
        let m = IntMatrix::from_i64(n, n, &data);
        (&(&m.transpose() * g2) * &m == *g1).then_some(m)
    })
}

#[test]
fn nikulin() {
    assert!(nikulin_isometry_class_equal(&i17_2(), &i17_2()).unwrap());
    let u = Lattice::hyperbolic_plane();
    assert!(!nikulin_isometry_class_equal(&u, &u.rescale(2)).unwrap());
    let k1 = i17_2_in_k3().orthogonal_complement().unwrap().sublattice();
    let k2 = i17_2_in_k3_alt().orthogonal_complement().unwrap().sublattice();
    assert_ne!(k1.gram(), k2.gram());
    assert!(nikulin_isometry_class_equal(&k1, &k2).unwrap());
    assert_eq!(
        nikulin_isometry_class_equal(&Lattice::e8().rescale(2), &u),
        Err(LatticeError::Definite)
    );
    assert!(matches!(
        nikulin_isometry_class_equal(&Lattice::from_rows(&[[0, 3], [3, 0]]).unwrap(), &u),
        Err(LatticeError::NotTwoElementary(_))
    ));
}

fn unimodular_strategy(n: usize) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec((0..n, 0..n, -2i64..=2), 0..12).prop_map(move |ops| {
        let mut p = IntMatrix::identity(n);
        for (i, j, k) in ops {
            if i != j {
                p.add_row_multiple(i, j, &BigInt::from(k));
            }
        }
        p
    })
}

proptest! {
    #[test]
    fn triple_is_basis_invariant(p in unimodular_strategy(8)) {
        let l = i17_2();
        let t = l.triple().unwrap();
        prop_assert_eq!(l.change_basis(&p).unwrap().triple().unwrap(), t);
    }

    #[test]
    fn rank_one_involutions(a in -4i64..=4, b in -4i64..=4, c in -4i64..=4, d in -4i64..=4) {
        let v = [a, b, c, d];
        prop_assume!(v.iter().any(|&x| x != 0));
        let e = emb(uu(), &[&v]).saturation();
        prop_assume!(e.sublattice().is_nondegenerate());
        // v is primitive in a unimodular lattice, so v·L = Z and 2(v·x)/v² is
        // integral for all x iff v² divides 2
        let norm = e.sublattice().gram()[(0, 0)].clone();
        match involution_from_sublattice(&e) {
            Ok(inv) => {
                prop_assert!(norm.abs() <= BigInt::from(2));
                check_involution(&e, &inv);
            }
            Err(LatticeError::ExtensionNotIntegral(_)) => {
                prop_assert!(norm.abs() > BigInt::from(2));
            }
            Err(other) => prop_assert!(false, "{other:?}"),
        }
    }

    #[test]
    fn glue_on_rank_one(a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, d in -3i64..=3) {
        let v = [a, b, c, d];
        prop_assume!(v.iter().any(|&x| x != 0));
        let e = emb(uu(), &[&v]).saturation();
        prop_assume!(e.sublattice().is_nondegenerate());
        let g = glue_map(&e).unwrap();
        prop_assert!(g.verified(), "{:?}", g.check);
        prop_assert_eq!(g.source.order(), g.target.order());
    }
}
