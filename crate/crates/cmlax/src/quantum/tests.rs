use super::*;
use crate::laxpairs::hamiltonian;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn tau() -> C64 {
    c(0.0, 1.0)
}

fn q2() -> Vec<C64> {
    vec![c(0.13, 0.21), c(-0.27, 0.05)]
}

fn q3() -> Vec<C64> {
    vec![c(0.13, 0.21), c(-0.27, 0.05), c(0.41, -0.17)]
}

fn cfg(root: RootSystem, particles: usize) -> ModelConfig {
    ModelConfig::new(
        root,
        particles,
        RMatrixFamily::belavin(2, tau()).unwrap(),
        c(0.7, 0.2),
    )
}

#[test]
fn derivative_commutator_base_case() {
    // [∂, f(q)] = f'(q) with f = q³ at q = 0.4
    let x = c(0.4, 0.0);
    let mut d = DiffOp::new(1, 1);
    d.add_term(vec![1], CoeffField::constant(CMat::identity(1)))
        .unwrap();
    let mut f = DiffOp::new(1, 1);
    f.add_term(
        vec![0],
        CoeffField::with_hessian(
            CMat::scalar(1, x.powi(3)),
            vec![CMat::scalar(1, 3.0 * x * x)],
            vec![vec![CMat::scalar(1, 6.0 * x)]],
        ),
    )
    .unwrap();
    let r = d.commutator(&f).unwrap();
    assert!((r.coeff(&[0]).unwrap()[(0, 0)] - 3.0 * x * x).norm() < 1e-15);
    assert!(r.coeff(&[1]).is_none_or(|m| m.max_abs() < 1e-15));
}

#[test]
fn laplacian_commutator_textbook() {
    // [½∂², f] = ½f'' + f'∂
    let x = c(0.4, 0.1);
    let mut h = DiffOp::new(1, 1);
    h.add_term(vec![2], CoeffField::constant(CMat::scalar(1, c(0.5, 0.0))))
        .unwrap();
    let mut f = DiffOp::new(1, 1);
    f.add_term(
        vec![0],
        CoeffField::with_hessian(
            CMat::scalar(1, x.exp()),
            vec![CMat::scalar(1, x.exp())],
            vec![vec![CMat::scalar(1, x.exp())]],
        ),
    )
    .unwrap();
    let r = h.commutator(&f).unwrap();
    assert!((r.coeff(&[0]).unwrap()[(0, 0)] - 0.5 * x.exp()).norm() < 1e-14);
    assert!((r.coeff(&[1]).unwrap()[(0, 0)] - x.exp()).norm() < 1e-14);
    assert!(r.coeff(&[2]).is_none_or(|m| m.max_abs() < 1e-15));
}

#[test]
fn missing_derivative_is_reported() {
    let mut h = DiffOp::new(1, 1);
    h.add_term(vec![2], CoeffField::constant(CMat::identity(1)))
        .unwrap();
    let mut f = DiffOp::new(1, 1);
    f.add_term(
        vec![0],
        CoeffField::with_gradient(CMat::identity(1), vec![CMat::identity(1)]),
    )
    .unwrap();
    assert!(matches!(h.compose(&f), Err(Error::MissingDerivative(2))));
}

#[test]
fn composition_is_associative_on_constants() {
    let mut a = DiffOp::new(2, 2);
    let m = CMat::from_fn(2, 2, |i, j| c(i as f64 + 1.0, j as f64));
    a.add_term(vec![1, 0], CoeffField::constant(m.clone()))
        .unwrap();
    a.add_term(vec![0, 0], CoeffField::constant(m.transpose()))
        .unwrap();
    let ab = a.compose(&a).unwrap().compose(&a);
    assert!(matches!(ab, Err(Error::MissingDerivative(_))) || ab.is_ok());
    let sq = a.compose(&a).unwrap();
    assert!((sq.coeff(&[2, 0]).unwrap() - &(&m * &m)).max_abs() < 1e-14);
}

#[test]
fn quantum_lax_holds_for_a_and_d() {
    let cases = [
        (cfg(RootSystem::A, 2), q2()),
        (cfg(RootSystem::A, 3), q3()),
        (cfg(RootSystem::D, 2), q2()),
        (cfg(RootSystem::D, 3), q3()),
    ];
    for (cfg, q) in cases {
        for hbar in [0.1, 1.0, 2.0] {
            for place in [F0Placement::InM, F0Placement::InH] {
                let r = quantum_lax_residual(&cfg, &q, c(0.31, 0.17), c(hbar, 0.0), place).unwrap();
                assert!(
                    r.max() < 1e-9,
                    "{} hbar={hbar} {place:?}: {:?}",
                    cfg.label(),
                    r
                );
            }
        }
    }
}

#[test]
fn quantum_lax_order_zero_fails_for_c_and_bc() {
    for root in [RootSystem::C, RootSystem::BC] {
        let cfg = cfg(root, 2);
        let r = quantum_lax_residual(&cfg, &q2(), c(0.31, 0.17), c(1.0, 0.0), F0Placement::InM)
            .unwrap();
        assert!(r.order0() > 1e-3, "{root}: {r:?}");
        assert!(r.order1() < 1e-9, "{root}: {r:?}");
        assert!(r.higher() < 1e-12, "{root}: {r:?}");
    }
}

#[test]
fn quantum_lax_other_families() {
    for fam in [
        RMatrixFamily::yang(2),
        RMatrixFamily::xxz(),
        RMatrixFamily::belavin(3, c(0.3, 0.9)).unwrap(),
    ] {
        let cfg = ModelConfig::new(RootSystem::A, 2, fam, c(0.9, 0.0));
        let r = quantum_lax_residual(&cfg, &q2(), c(0.31, 0.17), c(0.5, 0.0), F0Placement::InM)
            .unwrap();
        assert!(r.max() < 1e-9, "{}: {r:?}", cfg.label());
    }
}

#[test]
fn residual_is_z_independent_in_size() {
    let cfg = cfg(RootSystem::D, 2);
    for z in [c(0.1, 0.3), c(-0.4, 0.2), c(0.33, -0.41)] {
        let r = quantum_lax_residual(&cfg, &q2(), z, c(1.0, 0.0), F0Placement::InM).unwrap();
        assert!(r.max() < 1e-9);
    }
}

#[test]
fn pd_commutation() {
    for root in [RootSystem::A, RootSystem::D, RootSystem::B] {
        assert!(
            check_pd_commutation(&cfg(root, 2), &q2()).unwrap() < 1e-12,
            "{root}"
        );
    }
    for root in [RootSystem::C, RootSystem::BC] {
        assert!(
            check_pd_commutation(&cfg(root, 2), &q2()).unwrap() > 1e-3,
            "{root}"
        );
    }
}

#[test]
fn sum_to_zero_rational_trig_not_elliptic() {
    let st = PhasePoint::new(q3(), vec![c(0.3, 0.0), c(-0.2, 0.1), c(0.5, 0.0)]).unwrap();
    let z = c(0.31, 0.17);
    let one = c(1.0, 0.0);
    let fams = [
        (RMatrixFamily::yang(1), true),
        (RMatrixFamily::exchange(1, FunctionFamily::rational()), true),
        (
            RMatrixFamily::exchange(1, FunctionFamily::trigonometric()),
            true,
        ),
        (RMatrixFamily::belavin(1, tau()).unwrap(), false),
    ];
    for (fam, zero) in fams {
        let cfg = ModelConfig::new(RootSystem::A, 3, fam, one);
        let r = check_sum_to_zero(&cfg, &st, z).unwrap();
        if zero {
            assert!(r < 1e-12, "{}: {r}", cfg.label());
        } else {
            assert!(r > 1e-3, "{}: {r}", cfg.label());
        }
    }
}

#[test]
fn scalar_f0_constant_is_half_the_printed_one() {
    let cfg = ModelConfig::new(
        RootSystem::A,
        3,
        RMatrixFamily::belavin(1, tau()).unwrap(),
        c(1.0, 0.0),
    );
    let (printed, needed) = scalar_f0_constant(&cfg, &q3()).unwrap();
    assert!(needed.norm() < 1e-10, "{needed}");
    assert!(printed.norm() > 1e-3);
}

#[test]
fn coupling_shift_at_rank_one() {
    // V + ħν𝓕⁰ = -ν(ν+ħ)Σ℘ + const
    let tau = c(0.2, 1.1);
    let nu = c(0.7, 0.0);
    let hbar = c(0.4, 0.0);
    let cfg = ModelConfig::new(
        RootSystem::A,
        3,
        RMatrixFamily::belavin(1, tau).unwrap(),
        nu,
    );
    let m = cfg.family.modulus().unwrap().clone();
    let h = quantum_hamiltonian(&cfg, &q3(), hbar, F0Placement::InH).unwrap();
    let v = h.coeff(&[0, 0, 0]).unwrap()[(0, 0)];
    let q = q3();
    let mut wp = c(0.0, 0.0);
    for i in 0..3 {
        for j in 0..i {
            wp += m.wp(q[i] - q[j]).unwrap();
        }
    }
    let expect = -nu * (nu + hbar) * wp + hbar * nu * m.c_theta() * 3.0;
    assert!((v - expect).norm() < 1e-10, "{v} vs {expect}");
}

#[test]
fn hamiltonian_at_zero_hbar_is_the_potential() {
    let cfg = cfg(RootSystem::A, 2);
    let h = quantum_hamiltonian(&cfg, &q2(), c(0.0, 0.0), F0Placement::InH).unwrap();
    let st = PhasePoint::new(q2(), vec![c(0.0, 0.0); 2]).unwrap();
    let v = hamiltonian(&cfg, &st).unwrap();
    let coeff = h.coeff(&[0, 0]).unwrap();
    assert!((coeff - &CMat::scalar(coeff.rows(), v)).max_abs() < 1e-12);
}

#[test]
fn xxz_f0_is_minus_printed() {
    let cfg = ModelConfig::new(RootSystem::A, 3, RMatrixFamily::xxz(), c(1.0, 0.0));
    let q = vec![c(0.4, 0.1), c(1.1, -0.2), c(-0.5, 0.3)];
    let f0 = f0_operator(&cfg, &q).unwrap();
    let printed = xxz_f0_printed(&q).unwrap();
    assert!((&f0 + &printed).max_abs() < 1e-12 * printed.max_abs());
}

#[test]
fn spin_exchange_pair_matches_general_construction() {
    for fam in [
        FunctionFamily::elliptic(tau()).unwrap(),
        FunctionFamily::trigonometric(),
    ] {
        let rep = check_spin_exchange_suite(2, 3, &fam, 5, 4, 1e-12).unwrap();
        assert!(rep.all_pass(), "{:#?}", rep);
    }
}

#[test]
fn spin_exchange_rank_one_is_krichever() {
    let fam = FunctionFamily::elliptic(tau()).unwrap();
    let st = PhasePoint::new(q2(), vec![c(0.3, 0.0), c(-0.1, 0.2)]).unwrap();
    let z = c(0.3, 0.2);
    let nu = c(0.8, 0.0);
    let (l, _) = spin_permutation_lax(1, nu, &fam, &st, z).unwrap();
    let x = st.q[0] - st.q[1];
    assert!((l.mat()[(0, 1)] - nu * fam.phi(z, x).unwrap()).norm() < 1e-14);
    assert!((l.mat()[(1, 0)] - nu * fam.phi(z, -x).unwrap()).norm() < 1e-14);
}

#[test]
fn spin_exchange_quantum_lax() {
    let cfg = ModelConfig::new(
        RootSystem::A,
        3,
        RMatrixFamily::exchange(2, FunctionFamily::elliptic(tau()).unwrap()),
        c(0.6, 0.1),
    );
    let r = quantum_lax_residual(&cfg, &q3(), c(0.2, 0.3), c(1.3, 0.0), F0Placement::InH).unwrap();
    assert!(r.max() < 1e-9, "{r:?}");
}

#[test]
fn suites_report_expectations() {
    let rep = check_quantum_lax(&cfg(RootSystem::C, 2), c(1.0, 0.0), 3, 2, 1e-8).unwrap();
    assert!(rep.all_pass(), "{:#?}", rep);
    let rep = check_pd_suite(&cfg(RootSystem::D, 2), 3, 3, 1e-9).unwrap();
    assert!(rep.all_pass());
    let rep = check_sum_to_zero_suite(&RMatrixFamily::belavin(1, tau()).unwrap(), 3, 3, 3, 1e-12)
        .unwrap();
    assert!(rep.all_pass());
    let rep = check_xxz_f0_suite(2, 3, 3, 1e-12).unwrap();
    assert!(rep.all_pass());
}

/// Order-zero ħ² defect predicted for an entry c E_ij ⊗ R(v·q) whose rows
/// carry momentum vectors P_ii, P_jj: ½(|P_jj|² - |P_ii|²) c E_ij ⊗ F'.
fn momentum_norm_defect(cfg: &ModelConfig, q: &[C64], z: C64, hbar: C64) -> CMat {
    let st = PhasePoint::new(q.to_vec(), vec![c(0.0, 0.0); q.len()]).unwrap();
    let b = blocks(cfg, &st, z).unwrap();
    let norm2 = |row: usize| {
        let mut v = vec![0.0; cfg.particles];
        for m in b.s.momenta.iter().filter(|m| m.row == row) {
            v[m.particle] += m.sign;
        }
        v.iter().map(|x| x * x).sum::<f64>()
    };
    let mut o = b.op(cfg);
    for (k, e) in b.s.entries.iter().enumerate() {
        let w = 0.5 * (norm2(e.col) - norm2(e.row));
        if w != 0.0 {
            o.add_aux_block(e.row, e.col, e.coef * w * hbar * hbar, &b.f2[k]);
        }
    }
    o.into_mat()
}

#[test]
fn b_order_zero_defect_is_the_momentum_free_row() {
    let cfg = cfg(RootSystem::B, 2);
    let z = c(0.31, 0.17);
    for hbar in [0.1, 1.0, 2.0] {
        let h = c(hbar, 0.0);
        let (lhs, rhs) = quantum_lax_sides(&cfg, &q2(), z, h, F0Placement::InM).unwrap();
        let diff = lhs.sub(&rhs).unwrap();
        let d0 = diff.coeff(&[0, 0]).unwrap();
        let predicted = momentum_norm_defect(&cfg, &q2(), z, h);
        assert!(predicted.max_abs() > 1e-3);
        assert!(
            (d0 - &predicted).max_abs() < 1e-9 * lhs.max_abs(),
            "hbar={hbar}"
        );
        let r = quantum_lax_residual(&cfg, &q2(), z, h, F0Placement::InM).unwrap();
        assert!(r.order1() < 1e-12 && r.higher() < 1e-12);
    }
}
