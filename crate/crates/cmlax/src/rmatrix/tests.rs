use super::*;
use crate::report::Expect;
use crate::tensor::{kappa, neg, swap_conj, t};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn tau() -> C64 {
    c(0.1, 1.05)
}

fn families() -> Vec<RMatrixFamily> {
    vec![
        RMatrixFamily::belavin(2, tau()).unwrap(),
        RMatrixFamily::belavin(3, c(-0.2, 0.9)).unwrap(),
        RMatrixFamily::yang(2),
        RMatrixFamily::yang(3),
        RMatrixFamily::xxz(),
        RMatrixFamily::exchange(2, FunctionFamily::elliptic(tau()).unwrap()),
        RMatrixFamily::exchange(3, FunctionFamily::trigonometric()),
    ]
}

#[test]
fn derivatives_match_finite_differences() {
    let (z, q) = (c(0.31, 0.22), c(0.17, -0.13));
    let h = 1e-5;
    for fam in families() {
        let ev = fam.r_eval(z, q).unwrap();
        let p = fam.r_eval(z, q + h).unwrap();
        let m = fam.r_eval(z, q - h).unwrap();
        let fd = (&p.value - &m.value) * c(0.5 / h, 0.0);
        let fd2 = (&p.d_q - &m.d_q) * c(0.5 / h, 0.0);
        let s = ev.value.max_abs() + ev.d_q.max_abs();
        assert!((&fd - &ev.d_q).max_abs() < 1e-7 * s, "{}", fam.label());
        assert!(
            (&fd2 - &ev.d2_q).max_abs() < 1e-7 * (s + ev.d2_q.max_abs()),
            "{}",
            fam.label()
        );

        let (f0, f0p) = fam.f0_jet(q).unwrap();
        let (f0a, _) = fam.f0_jet(q + h).unwrap();
        let (f0b, _) = fam.f0_jet(q - h).unwrap();
        let fd = (&f0a - &f0b) * c(0.5 / h, 0.0);
        assert!(
            (&fd - &f0p).max_abs() < 1e-6 * (f0.max_abs() + f0p.max_abs()),
            "{}",
            fam.label()
        );
    }
}

#[test]
fn f0_two_routes_agree() {
    for n in [2, 3, 4] {
        let fam = RMatrixFamily::belavin(n, tau()).unwrap();
        for q in [c(0.21, 0.1), c(-0.33, 0.41)] {
            let a = fam.f0(q).unwrap();
            let b = fam.f0_explicit(q).unwrap();
            assert!((&a - &b).max_abs() < 1e-10 * a.max_abs(), "n={n}");
        }
    }
}

#[test]
fn f0_is_derivative_of_classical_r() {
    let fam = RMatrixFamily::belavin(3, tau()).unwrap();
    let (q, h) = (c(0.23, 0.19), 1e-5);
    let fd =
        (&fam.r_classical(q + h).unwrap() - &fam.r_classical(q - h).unwrap()) * c(0.5 / h, 0.0);
    let f0 = fam.f0(q).unwrap();
    assert!((&fd - &f0).max_abs() < 1e-7 * f0.max_abs());
}

#[test]
fn rank_one_reductions() {
    let m = Modulus::new(tau()).unwrap();
    let fam = RMatrixFamily::belavin(1, tau()).unwrap();
    let (z, q) = (c(0.27, 0.31), c(-0.12, 0.2));
    assert!((fam.r_value(z, q).unwrap()[(0, 0)] - m.phi(z, q).unwrap()).norm() < 1e-12);
    assert!((fam.f0(q).unwrap()[(0, 0)] + m.e2(q).unwrap()).norm() < 1e-12);
    let y = RMatrixFamily::yang(1);
    let v = y.r_value(z, q).unwrap()[(0, 0)];
    assert!((v - (1.0 / z + 1.0 / q)).norm() < 1e-13);
}

#[test]
fn classical_m_matches_closed_form() {
    for n in [2, 3] {
        let fam = RMatrixFamily::belavin(n, tau()).unwrap();
        let m = fam.modulus().unwrap().clone();
        let basis = TBasis::new(n);
        let q = c(0.19, 0.23);
        let e1 = m.e1(q).unwrap();
        let mut want = CMat::scalar(n * n, (e1 * e1 - m.wp(q).unwrap()) * 0.5);
        for (k, a) in basis.indices().into_iter().enumerate().skip(1) {
            let e = (c(0.0, 2.0 * PI * a.1 as f64 / n as f64) * q).exp();
            want.axpy(e * m.f(q, omega(n, a, tau())).unwrap(), basis.tt(k));
        }
        let got = fam.m_classical(q).unwrap();
        assert!((&got - &want).max_abs() < 1e-6 * want.max_abs(), "n={n}");
    }
    let y = RMatrixFamily::yang(2);
    assert!(y.m_classical(c(0.4, 0.1)).unwrap().max_abs() < 1e-6);
}

#[test]
fn classical_limit_of_r() {
    let fam = RMatrixFamily::belavin(2, tau()).unwrap();
    let q = c(0.3, -0.2);
    let eta = 1e-4;
    let r = fam.r_value(c(eta, 0.0), q).unwrap();
    let mut approx = &CMat::scalar(4, c(1.0 / eta, 0.0)) + &fam.r_classical(q).unwrap();
    approx.axpy(c(eta, 0.0), &fam.m_classical(q).unwrap());
    assert!((&r - &approx).max_abs() < 1e-6);
}

#[test]
fn xxz_is_symmetric_under_swap() {
    let fam = RMatrixFamily::xxz();
    let r = fam.r_value(c(0.4, 0.1), c(0.7, -0.2)).unwrap();
    let s = swap_conj(&r, 2);
    assert!((&r - &s).max_abs() < 1e-13);
}

#[test]
fn heisenberg_kappa_sign_convention() {
    let n = 3;
    let (a, b) = ((1, 2), (2, 1));
    let lhs = &t(n, a) * &t(n, b);
    let rhs = &t(n, b) * &t(n, a);
    let k = kappa(n, a, b);
    assert!((&lhs - &(&rhs * (k * k))).max_abs() < 1e-12);
    assert_eq!(neg((1, 2)), (-1, -2));
}

#[test]
fn identity_suites_pass() {
    let fams = families();
    for fam in &fams {
        for rep in [
            check_aybe(fam, 11, 12, 1e-8).unwrap(),
            check_unitarity_skew(fam, 12, 12, 1e-8).unwrap(),
            check_qybe(fam, 13, 12, 1e-8).unwrap(),
        ] {
            for e in &rep.entries {
                assert!(e.pass, "{} {:e}", e.identity, e.max_residual);
            }
        }
    }
}

#[test]
fn pauli_structure_only_at_rank_two() {
    let two = check_pauli_structure(2, tau(), 1, 10, 1e-9).unwrap();
    assert!(two.all_pass(), "{:?}", two.entries);
    let three = check_pauli_structure(3, tau(), 1, 10, 1e-9).unwrap();
    assert!(three
        .entries
        .iter()
        .all(|e| e.expect == Expect::Fail && e.pass));
}

#[test]
fn fourier_and_flatness() {
    for n in [2, 3] {
        let rep = check_fourier(n, tau(), 5, 10, 1e-9).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.entries);
        let rep = check_kzb_flatness(n, tau(), 6, 8, 1e-6).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.entries);
    }
}
