use super::*;
use crate::elliptic::{FunctionFamily, Modulus};
use crate::sampling::Sampler;
use crate::tensor::CMat;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn tau() -> C64 {
    c(0.1, 1.1)
}

fn bel(n: usize) -> RMatrixFamily {
    RMatrixFamily::belavin(n, tau()).unwrap()
}

fn worst(cfg: &ModelConfig, seed: u64, samples: usize) -> f64 {
    check_lax_suite(cfg, seed, samples, 1e-8).unwrap().entries[0].max_residual
}

#[test]
fn a_type_lax_equation() {
    for fam in [bel(2), bel(3), RMatrixFamily::yang(2), RMatrixFamily::xxz()] {
        let cfg = ModelConfig::new(RootSystem::A, 3, fam, c(0.8, 0.3));
        let r = worst(&cfg, 1, 4);
        assert!(r < 1e-9, "{} {r:e}", cfg.label());
    }
}

#[test]
fn root_system_lax_equations() {
    let nu = c(0.7, -0.2);
    let cases = vec![
        ModelConfig::new(RootSystem::D, 2, bel(2), nu),
        ModelConfig::new(RootSystem::D, 3, bel(2), nu),
        ModelConfig::new(RootSystem::B, 2, bel(2), nu),
        ModelConfig::new(RootSystem::B, 2, bel(2), nu)
            .with_couplings(c(0.0, 0.0), -nu * 2f64.sqrt()),
        ModelConfig::new(RootSystem::C, 2, bel(2), nu),
        ModelConfig::new(RootSystem::C, 2, bel(3), nu),
        ModelConfig::new(RootSystem::BC, 2, bel(2), nu),
        ModelConfig::new(RootSystem::BC, 2, bel(2), nu).with_couplings(nu, -nu),
        ModelConfig::new(RootSystem::ScalarDP, 3, bel(1), nu),
        ModelConfig::new(RootSystem::ScalarDP, 2, bel(1), nu)
            .with_couplings(c(1.3, 0.1), c(0.0, 0.0)),
        ModelConfig::new(
            RootSystem::ScalarDP,
            2,
            RMatrixFamily::exchange(1, FunctionFamily::trigonometric()),
            nu,
        ),
    ];
    for cfg in cases {
        let r = worst(&cfg, 2, 3);
        assert!(r < 1e-9, "{} {r:e}", cfg.label());
    }
}

#[test]
fn obstructions_show_up_when_forced() {
    let nu = c(0.7, 0.0);
    let d3 = ModelConfig::new(RootSystem::D, 2, bel(3), nu).forced();
    assert!(!d3.is_admissible());
    let rep = check_lax_suite(&d3, 3, 2, 1e-8).unwrap();
    assert!(rep.entries[0].max_residual > 1e-3 && rep.all_pass());

    let bc = ModelConfig::new(RootSystem::BC, 2, bel(2), nu)
        .with_couplings(nu, nu * 0.7)
        .forced();
    assert!(worst(&bc, 4, 2) > 1e-3);

    let dp = ModelConfig::new(RootSystem::ScalarDP, 2, bel(1), nu)
        .with_couplings(nu, nu * 0.5)
        .forced();
    assert!(worst(&dp, 5, 2) > 1e-3);
}

#[test]
fn inadmissible_configs_are_named() {
    let nu = c(1.0, 0.0);
    let err = ModelConfig::new(RootSystem::D, 2, bel(3), nu)
        .validate()
        .unwrap_err();
    assert!(
        matches!(err, Error::Inadmissible { ref system, .. } if system == "D"),
        "{err}"
    );
    let err = ModelConfig::new(RootSystem::C, 2, bel(2), nu)
        .with_scheme(Scheme::HalfSites)
        .validate()
        .unwrap_err();
    assert!(err.to_string().contains("FullSites"));
    let err = ModelConfig::new(RootSystem::B, 2, bel(2), nu)
        .with_couplings(c(0.0, 0.0), nu)
        .validate()
        .unwrap_err();
    assert!(err.to_string().contains("√2"));
    assert!(ModelConfig::new(RootSystem::ScalarDP, 2, bel(1), nu)
        .with_couplings(nu, c(0.0, 0.0))
        .validate()
        .is_ok());
}

#[test]
fn table_lookups() {
    let b = lookup(RootSystem::B, Scheme::HalfSites).unwrap();
    assert_eq!((b.rank, b.g, b.mu), (Some(2), "±√2ν", "0"));
    let c_ = lookup(RootSystem::C, Scheme::FullSites).unwrap();
    assert_eq!((c_.rank, c_.g, c_.mu), (None, "0", "ν"));
    assert!(lookup(RootSystem::C, Scheme::HalfSites).is_none());
    let a = lookup(RootSystem::A, Scheme::HalfSites).unwrap();
    assert_eq!(a.rank, None);
    assert!(admissibility_text().lines().count() == 7);
}

#[test]
fn rank_one_a_reduces_to_scalar_pair() {
    let m = Modulus::new(tau()).unwrap();
    let nu = c(0.6, 0.0);
    let cfg = ModelConfig::new(RootSystem::A, 3, bel(1), nu);
    let st = PhasePoint::new(
        vec![c(0.1, 0.05), c(0.42, -0.2), c(-0.3, 0.31)],
        vec![c(0.2, 0.0), c(-0.5, 0.1), c(0.3, 0.0)],
    )
    .unwrap();
    let z = c(0.23, 0.17);
    let ev = build_lax(&cfg, &st, z).unwrap();
    let (l, mm) = (ev.l.mat(), ev.m.mat());
    let mut shift = None;
    for i in 0..3 {
        for j in 0..3 {
            let q = st.q[i] - st.q[j];
            if i == j {
                assert!((l[(i, i)] - st.p[i]).norm() < 1e-14);
                // d_i = ν Σ E2(q_ik) up to an i-independent constant
                let d: C64 = (0..3)
                    .filter(|&k| k != i)
                    .map(|k| m.e2(st.q[i] - st.q[k]).unwrap())
                    .sum();
                let s = mm[(i, i)] - nu * d;
                let s0 = *shift.get_or_insert(s);
                assert!((s - s0).norm() < 1e-12);
            } else {
                assert!((l[(i, j)] - nu * m.phi(z, q).unwrap()).norm() < 1e-12);
                assert!((mm[(i, j)] - nu * m.f(z, q).unwrap()).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn scalar_dp_matches_bc_at_rank_one() {
    let nu = c(0.6, 0.1);
    for g in [nu, -nu] {
        let bc = ModelConfig::new(RootSystem::BC, 2, bel(1), nu).with_couplings(nu, g);
        let dp = ModelConfig::new(RootSystem::ScalarDP, 2, bel(1), nu).with_couplings(nu, g);
        let st = PhasePoint::new(
            vec![c(0.13, 0.2), c(-0.31, 0.07)],
            vec![c(0.4, 0.0), c(-0.2, 0.3)],
        )
        .unwrap();
        let z = c(0.2, -0.15);
        let a = build_lax(&bc, &st, z).unwrap();
        let b = build_lax(&dp, &st, z).unwrap();
        assert!((a.l.mat() - b.l.mat()).max_abs() < 1e-13);
        // M agrees up to a multiple of the identity
        let diff = a.m.mat() - b.m.mat();
        let (_, off) = diff.split_identity();
        assert!(off < 1e-11, "{off:e}");
        assert!((hamiltonian(&bc, &st).unwrap() - hamiltonian(&dp, &st).unwrap()).norm() < 1e-12);
    }
}

#[test]
fn d0_subtraction_keeps_the_lax_equation() {
    let nu = c(0.6, 0.0);
    let cfg = ModelConfig::new(RootSystem::ScalarDP, 2, bel(1), nu).with_d0_subtraction();
    assert!(worst(&cfg, 7, 3) < 1e-9);
    let st = PhasePoint::new(
        vec![c(0.13, 0.2), c(-0.31, 0.07)],
        vec![c(0.4, 0.0), c(-0.2, 0.3)],
    )
    .unwrap();
    let m = build_m(&cfg, &st, c(0.2, 0.1)).unwrap();
    assert!(m.mat()[(4, 4)].norm() < 1e-12);
}

#[test]
fn d_blocks_b1_have_zero_diagonal() {
    let cfg = ModelConfig::new(RootSystem::D, 2, bel(2), c(1.0, 0.0));
    let st = PhasePoint::new(
        vec![c(0.13, 0.2), c(-0.31, 0.07)],
        vec![c(0.4, 0.0), c(-0.2, 0.3)],
    )
    .unwrap();
    let l = build_l(&cfg, &st, c(0.2, 0.1)).unwrap();
    for a in 0..2 {
        assert_eq!(l.aux_block(a, a + 2).max_abs(), 0.0);
    }
    assert!(l.aux_block(0, 3).max_abs() > 0.1);
}

#[test]
fn d_diagonal_cancellation_needs_rank_two() {
    let st = PhasePoint::new(
        vec![c(0.13, 0.2), c(-0.31, 0.07)],
        vec![c(0.4, 0.0), c(-0.2, 0.3)],
    )
    .unwrap();
    let z = c(0.2, 0.1);
    for (n, ok) in [(2, true), (3, false)] {
        let cfg = ModelConfig::new(RootSystem::D, 2, bel(n), c(1.0, 0.0)).forced();
        let (d, scale) = lax_defect(&cfg, &st, z).unwrap();
        let block = (0..2)
            .map(|a| d.aux_block(a, a + 2).max_abs())
            .fold(0.0, f64::max)
            / scale;
        assert_eq!(block < 1e-10, ok, "n={n} {block:e}");
    }
}

#[test]
fn block_identity_holds() {
    for fam in [bel(2), bel(3), RMatrixFamily::yang(2), RMatrixFamily::xxz()] {
        let rep = check_block_identity(&fam, 3, 9, 4, 1e-9).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.entries);
    }
}

#[test]
fn two_body_a_equation_of_motion() {
    let m = Modulus::new(tau()).unwrap();
    let nu = c(0.9, 0.0);
    let cfg = ModelConfig::new(RootSystem::A, 2, bel(1), nu);
    let st = PhasePoint::new(vec![c(0.3, 0.1), c(-0.1, 0.0)], vec![c(0.0, 0.0); 2]).unwrap();
    let (_, pd) = eom(&cfg, &st).unwrap();
    let want = nu * nu * m.wp_prime(st.q[0] - st.q[1]).unwrap();
    assert!((pd[0] - want).norm() < 1e-12);
    assert!((pd[0] + pd[1]).norm() < 1e-12);
}

#[test]
fn eom_matches_gradient_of_h() {
    let nu = c(0.6, 0.2);
    let cfg = ModelConfig::new(RootSystem::BC, 2, bel(2), nu);
    let st = PhasePoint::new(
        vec![c(0.13, 0.2), c(-0.31, 0.07)],
        vec![c(0.4, 0.0), c(-0.2, 0.3)],
    )
    .unwrap();
    let (qd, pd) = eom(&cfg, &st).unwrap();
    let h = 1e-5;
    for k in 0..2 {
        let mut a = st.clone();
        let mut b = st.clone();
        a.q[k] += h;
        b.q[k] -= h;
        let fd = (hamiltonian(&cfg, &a).unwrap() - hamiltonian(&cfg, &b).unwrap()) / (2.0 * h);
        assert!((fd + pd[k]).norm() < 1e-6 * fd.norm().max(1.0));
        assert_eq!(qd[k], st.p[k]);
    }
}

#[test]
fn bc_hamiltonian_term_by_term() {
    let m = Modulus::new(tau()).unwrap();
    let (nu, mu, g) = (c(0.6, 0.0), c(0.6, 0.0), c(-0.6, 0.0));
    let cfg = ModelConfig::new(RootSystem::BC, 2, bel(1), nu).with_couplings(mu, g);
    let st = PhasePoint::new(
        vec![c(0.13, 0.2), c(-0.31, 0.07)],
        vec![c(0.4, 0.0), c(-0.2, 0.3)],
    )
    .unwrap();
    let (q, p) = (&st.q, &st.p);
    let wp = |x: C64| m.wp(x).unwrap();
    let want = (p[0] * p[0] + p[1] * p[1]) * 0.5
        - nu * nu * (wp(q[0] - q[1]) + wp(q[0] + q[1]))
        - mu * mu * 0.5 * (wp(2.0 * q[0]) + wp(2.0 * q[1]))
        - g * g * (wp(q[0]) + wp(q[1]));
    assert!((hamiltonian(&cfg, &st).unwrap() - want).norm() < 1e-12);
    assert!(describe_hamiltonian(&cfg).unwrap().contains("wp(2q_a)"));
}

#[test]
fn reflection_symmetric_state_gives_antisymmetric_force() {
    let cfg = ModelConfig::new(RootSystem::A, 2, bel(2), c(0.5, 0.0));
    let st = PhasePoint::new(vec![c(0.21, 0.0), c(-0.21, 0.0)], vec![c(0.0, 0.0); 2]).unwrap();
    let (_, pd) = eom(&cfg, &st).unwrap();
    assert!((pd[0] + pd[1]).norm() < 1e-12);
}

#[test]
fn collisions_are_rejected() {
    let cfg = ModelConfig::new(RootSystem::C, 2, bel(2), c(0.5, 0.0));
    let st = PhasePoint::new(vec![c(0.2, 0.0), c(0.2, 0.0)], vec![c(0.0, 0.0); 2]).unwrap();
    assert!(matches!(
        build_l(&cfg, &st, c(0.1, 0.1)),
        Err(Error::PoleProximity { .. })
    ));
    let st = PhasePoint::new(vec![c(0.5, 0.0), c(0.2, 0.0)], vec![c(0.0, 0.0); 2]).unwrap();
    assert!(matches!(
        hamiltonian(&cfg, &st),
        Err(Error::PoleProximity { .. })
    ));
}

#[test]
fn a_offdiagonal_m_swap_symmetry() {
    // without 𝓕⁰, M_12 = ν F_12(q) and M_21 = ν F_21(-q) = ν P F_12(-q) P
    let fam = bel(2);
    let cfg = ModelConfig::new(RootSystem::A, 2, fam.clone(), c(1.0, 0.0));
    let st = PhasePoint::new(vec![c(0.2, 0.1), c(-0.1, 0.2)], vec![c(0.0, 0.0); 2]).unwrap();
    let z = c(0.13, 0.11);
    let m = build_m(&cfg, &st, z).unwrap();
    let x = st.q[0] - st.q[1];
    let f12 = crate::tensor::swap_conj(&fam.r_eval(z, -x).unwrap().d_q, 2);
    let want: CMat = crate::tensor::embed_pair(&f12, 1, 0, 2, 2).unwrap();
    assert!((&m.aux_block(1, 0) - &want).max_abs() < 1e-12);
}

#[test]
fn random_states_are_reproducible() {
    let cfg = ModelConfig::new(RootSystem::A, 3, bel(2), c(1.0, 0.0));
    let a = random_state(&cfg, &mut Sampler::new(3));
    let b = random_state(&cfg, &mut Sampler::new(3));
    assert_eq!(a, b);
}

#[test]
fn rank_one_reduction_suite() {
    let rep = check_rank_one_reduction(3, tau(), c(0.6, 0.2), 4, 10, 1e-12).unwrap();
    assert!(rep.all_pass(), "{}", rep.to_json());
}
