use super::*;
use crate::C64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_mat(n: usize, seed: u64) -> CMat {
    let mut s = crate::sampling::Sampler::new(seed);
    CMat::from_fn(n, n, |_, _| s.complex(1.0, 1.0))
}

fn close(a: &CMat, b: &CMat, tol: f64) -> bool {
    (a - b).max_abs() < tol
}

#[test]
fn embed_identity_is_identity() {
    let id = CMat::identity(4);
    assert_eq!(embed_pair(&id, 0, 1, 3, 2).unwrap(), CMat::identity(8));
}

#[test]
fn embedded_permutation_squares_to_one() {
    for (a, b) in [(0, 2), (2, 1), (1, 0)] {
        let p = embed_pair(&permutation(3), a, b, 3, 3).unwrap();
        assert!(close(&(&p * &p), &CMat::identity(27), 1e-15));
    }
}

#[test]
fn embed_matches_kronecker_assembly() {
    let (x, y) = (random_mat(2, 1), random_mat(2, 2));
    let got = embed_pair(&x.kron(&y), 0, 2, 3, 2).unwrap();
    let want = x.kron(&CMat::identity(2)).kron(&y);
    assert!(close(&got, &want, 1e-15));
    // reversed site order
    let got = embed_pair(&x.kron(&y), 2, 0, 3, 2).unwrap();
    let want = y.kron(&CMat::identity(2)).kron(&x);
    assert!(close(&got, &want, 1e-15));
}

#[test]
fn embed_pair_swap_rule() {
    let o = random_mat(9, 5);
    let a = embed_pair(&o, 0, 2, 3, 3).unwrap();
    let b = embed_pair(&swap_conj(&o, 3), 2, 0, 3, 3).unwrap();
    assert!(close(&a, &b, 1e-14));
}

#[test]
fn embed_errors() {
    let o = CMat::identity(4);
    assert!(matches!(
        embed_pair(&o, 1, 1, 3, 2),
        Err(crate::Error::SiteCollision(1))
    ));
    assert!(matches!(
        embed_pair(&o, 0, 3, 3, 2),
        Err(crate::Error::SiteOutOfRange { .. })
    ));
    assert!(matches!(
        embed_pair(&CMat::identity(3), 0, 1, 3, 2),
        Err(crate::Error::ShapeMismatch(_))
    ));
}

#[test]
fn kappa_example() {
    assert!((kappa(2, (1, 0), (0, 1)) - c(0.0, -1.0)).norm() < 1e-15);
}

#[test]
fn t_alpha_t_minus_alpha_is_identity() {
    for n in 1..=4 {
        for a in indices(n) {
            let prod = &t(n, a) * &t(n, neg(a));
            assert!((kappa(n, a, neg(a)) - 1.0).norm() < 1e-15);
            assert!(close(&prod, &CMat::identity(n), 1e-14));
        }
    }
}

#[test]
fn heisenberg_relations() {
    for n in 2..=4 {
        for a in indices(n) {
            for b in indices(n) {
                let ab = &t(n, a) * &t(n, b);
                let want = t(n, (a.0 + b.0, a.1 + b.1)) * kappa(n, a, b);
                assert!(close(&ab, &want, 1e-13), "n={n} a={a:?} b={b:?}");
                let delta =
                    (a.0 + b.0).rem_euclid(n as i64) == 0 && (a.1 + b.1).rem_euclid(n as i64) == 0;
                if !delta {
                    assert!((&t(n, a) * &t(n, b)).trace().norm() < 1e-13);
                }
                let conj = &(&t(n, a) * &t(n, b)) * &t(n, neg(a));
                let k = kappa(n, a, b);
                assert!(close(&conj, &(t(n, b) * (k * k)), 1e-13));
            }
            let tr = (&t(n, a) * &t(n, neg(a))).trace();
            assert!((tr - n as f64).norm() < 1e-13);
            let tt = t(n, a).transpose();
            assert!(close(&tt, &t(n, (a.0, -a.1)), 1e-14));
        }
    }
}

#[test]
fn permutation_formulas_agree() {
    for n in 1..=4 {
        assert!(close(&permutation(n), &permutation_via_t(n), 1e-14));
    }
}

#[test]
fn comm_and_norms() {
    let a = SiteOperator::from_mat(2, 2, 1, random_mat(4, 9)).unwrap();
    assert_eq!(comm(&a, &a).unwrap().max_abs(), 0.0);
    assert_eq!(SiteOperator::zeros(3, 2, 2).max_abs(), 0.0);
    let b = SiteOperator::zeros(1, 2, 2);
    assert!(comm(&a, &b).is_err());
}

#[test]
fn partial_trace_of_permutation() {
    let p = embed_pair(&permutation(3), 0, 1, 2, 3).unwrap();
    let op = SiteOperator::from_mat(1, 3, 2, p).unwrap();
    let tr = op.partial_site_trace(1).unwrap();
    assert_eq!(tr.sites(), 1);
    assert!(close(tr.mat(), &CMat::identity(3), 1e-15));
}

#[test]
fn partial_trace_keeps_aux_blocks() {
    let x = random_mat(2, 3);
    let y = random_mat(2, 4);
    let e = random_mat(2, 6);
    let op = SiteOperator::from_mat(2, 2, 2, e.kron(&x.kron(&y))).unwrap();
    let tr = op.partial_site_trace(0).unwrap();
    assert!(close(tr.mat(), &(e.kron(&y) * x.trace()), 1e-13));
}

#[test]
fn embed_aux_places_block() {
    let payload = random_mat(4, 11);
    let op = embed_aux(3, 2, 0, &payload, 2, 2).unwrap();
    assert_eq!(op.aux_block(2, 0), payload);
    assert_eq!(op.aux_block(0, 2).max_abs(), 0.0);
}

proptest! {
    #[test]
    fn embedding_is_multiplicative(s1 in 0u64..1000, s2 in 0u64..1000, a in 0usize..3, b in 0usize..3) {
        prop_assume!(a != b);
        let (o1, o2) = (random_mat(4, s1), random_mat(4, s2));
        let lhs = embed_pair(&(&o1 * &o2), a, b, 3, 2).unwrap();
        let rhs = &embed_pair(&o1, a, b, 3, 2).unwrap() * &embed_pair(&o2, a, b, 3, 2).unwrap();
        prop_assert!((&lhs - &rhs).max_abs() < 1e-12);
    }

    #[test]
    fn t_sum_is_n_times_permutation(n in 1usize..6) {
        let mut s = CMat::zeros(n * n, n * n);
        for a in indices(n) {
            s += &t(n, a).kron(&t(n, neg(a)));
        }
        prop_assert!((&s - &(permutation(n) * C64::new(n as f64, 0.0))).max_abs() < 1e-12);
    }
}
