//! Seeded random U-members with a generic line.

use bigonal_core::quartics::{is_smooth, make_tangent_pair, monomial_count, Line, PairStatus, TernaryForm, Tolerances};
use bigonal_core::towers::{slice, TowerInstance};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::input::InstanceRecord;

const ATTEMPTS: usize = 200;

/// Stream `index` of `seed`, so instance `i` does not depend on how many
/// others are generated or in which order.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_form(rng: &mut ChaCha8Rng, degree: usize, bound: i64) -> Option<TernaryForm> {
    let c: Vec<i64> = (0..monomial_count(degree)).map(|_| rng.gen_range(-bound..=bound)).collect();
    TernaryForm::from_i64(degree, &c).ok()
}

/// A smooth quartic with small integer coefficients.
pub fn random_smooth_quartic(rng: &mut ChaCha8Rng) -> TernaryForm {
    loop {
        if let Some(f) = random_form(rng, 4, 5) {
            if is_smooth(&f).unwrap_or(false) {
                return f;
            }
        }
    }
}

/// `(B₀, Q, λ)` with both quartics smooth and `B₀ ∩ Q` eight distinct
/// points, plus a line on which the tower slice is nondegenerate.
pub fn random_record(seed: u64, index: u64) -> InstanceRecord {
    let mut rng = instance_rng(seed, index);
    let tol = Tolerances::default();
    for _ in 0..ATTEMPTS {
        let b0 = random_smooth_quartic(&mut rng);
        let Some(q) = random_form(&mut rng, 2, 3) else { continue };
        let num = loop {
            let n: i64 = rng.gen_range(-6..=6);
            if n != 0 {
                break n;
            }
        };
        let lambda = BigRational::new(num.into(), rng.gen_range(1i64..=6).into());
        let mu_sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let line = loop {
            let l = [rng.gen_range(-3..=3), rng.gen_range(-3..=3), rng.gen_range(-3..=3)];
            if let Ok(l) = Line::from_i64(l) {
                break l;
            }
        };
        let Ok(inst) = TowerInstance::new(b0.clone(), q.clone(), lambda.clone(), mu_sign, line.clone()) else {
            continue;
        };
        let Ok(pair) = make_tangent_pair(&b0, &q, &lambda, seed, &tol) else { continue };
        if pair.status != PairStatus::UMember || !pair.tangency.as_ref().is_some_and(|t| t.transversal) {
            continue;
        }
        if slice(&inst).is_err() {
            continue;
        }
        return InstanceRecord {
            id: format!("u{index:03}"),
            b0,
            q,
            lambda,
            mu_sign,
            line: Some(line),
            seed: Some(seed.wrapping_add(index)),
            tol: Vec::new(),
        };
    }
    panic!("no valid instance after {ATTEMPTS} attempts for seed {seed}, index {index}");
}
