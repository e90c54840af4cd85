use super::eval::{build_lax, describe_hamiltonian, lax_residual};
use super::{ModelConfig, PhasePoint, RootSystem};
use crate::elliptic::Modulus;
use crate::error::Result;
use crate::report::{Expect, IdentityEntry, IdentityReport, FAIL_THRESHOLD};
use crate::rmatrix::RMatrixFamily;
use crate::sampling::{sweep, Sampler};
use crate::tensor::{embed_pair, CMat};
use crate::C64;

/// Positions drawn from the family's sample region, momenta from the unit box.
pub fn random_state(cfg: &ModelConfig, s: &mut Sampler) -> PhasePoint {
    let q = (0..cfg.particles)
        .map(|_| cfg.family.sample_point(s))
        .collect();
    let p = s.complex_vec(cfg.particles, 1.0, 1.0);
    PhasePoint { q, p }
}

/// Lax equation at random (state, z). Admissible configs are expected to
/// pass, forced inadmissible ones to fail.
pub fn check_lax_suite(
    cfg: &ModelConfig,
    seed: u64,
    samples: usize,
    tol: f64,
) -> Result<IdentityReport> {
    cfg.validate()?;
    let label = cfg.label();
    let sw = sweep(
        seed,
        &format!("lax/{label}"),
        samples,
        1,
        |s: &mut Sampler| {
            let st = random_state(cfg, s);
            let z = cfg.family.sample_point(s);
            Ok(vec![lax_residual(cfg, &st, z)?])
        },
    )?;
    let (expect, t) = if cfg.is_admissible() {
        (Expect::Pass, tol)
    } else {
        (Expect::Fail, FAIL_THRESHOLD)
    };
    let mut rep = IdentityReport::new("lax")
        .env("hamiltonian", describe_hamiltonian(cfg)?)
        .env(
            "couplings",
            format!("nu={} mu={} g={}", cfg.nu, cfg.mu, cfg.g),
        );
    let tag = match cfg.root_system {
        super::RootSystem::A => "(1.6)-(1.9)",
        super::RootSystem::C => "(2.4)-(2.7)",
        super::RootSystem::BC => "(2.8)-(2.14)",
        super::RootSystem::D => "(2.38)-(2.41)",
        super::RootSystem::B => "(2.46)-(2.50)",
        super::RootSystem::ScalarDP => "(2.1)-(2.3)",
    };
    rep.push(
        IdentityEntry::new(
            "lax",
            &format!("Lax equation dL/dt = [L, M] [{label}]"),
            tag,
            sw.max[0],
            sw.samples,
            t,
            expect,
        )
        .with_resampled(sw.resampled),
    );
    Ok(rep)
}

fn get(m: &[Vec<Option<CMat>>], a: usize, b: usize) -> &CMat {
    m[a][b].as_ref().expect("off-diagonal")
}

/// The block identity cancelling the off-diagonal part of the A-type Lax
/// equation, on `particles` sites, for every pair (a, c).
pub fn check_block_identity(
    fam: &RMatrixFamily,
    particles: usize,
    seed: u64,
    samples: usize,
    tol: f64,
) -> Result<IdentityReport> {
    let n = fam.n();
    let r = particles;
    let label = fam.label();
    let sw = sweep(
        seed,
        &format!("block/{label}/{r}"),
        samples,
        1,
        |s: &mut Sampler| {
            let z = fam.sample_point(s);
            let q: Vec<C64> = (0..r).map(|_| fam.sample_point(s)).collect();
            let emb = |m: CMat, a: usize, b: usize| embed_pair(&m, a, b, r, n);
            let mut rr = vec![vec![None; r]; r];
            let mut ff = vec![vec![None; r]; r];
            let mut f0 = vec![vec![None; r]; r];
            for a in 0..r {
                for b in 0..r {
                    if a == b {
                        continue;
                    }
                    let ev = fam.r_eval(z, q[a] - q[b])?;
                    rr[a][b] = Some(emb(ev.value, a, b)?);
                    ff[a][b] = Some(emb(ev.d_q, a, b)?);
                    f0[a][b] = Some(emb(fam.f0(q[a] - q[b])?, a, b)?);
                }
            }
            let dim = n.pow(r as u32);
            let mut big = CMat::zeros(dim, dim);
            for a in 0..r {
                for b in a + 1..r {
                    big += get(&f0, a, b);
                }
            }
            let mut worst = 0.0f64;
            for a in 0..r {
                for c in 0..r {
                    if a == c {
                        continue;
                    }
                    let rac = get(&rr, a, c);
                    let mut terms = vec![rac * &big, &big * rac];
                    let mut lhs = &terms[0] - &terms[1];
                    for b in 0..r {
                        if b == a || b == c {
                            continue;
                        }
                        let x = get(&rr, a, b) * get(&ff, b, c);
                        let y = get(&ff, a, b) * get(&rr, b, c);
                        lhs += &(&x - &y);
                        terms.push(x);
                        terms.push(y);
                    }
                    let mut rhs = CMat::zeros(dim, dim);
                    for b in 0..r {
                        if b != c {
                            let x = rac * get(&f0, b, c);
                            rhs += &x;
                            terms.push(x);
                        }
                        if b != a {
                            let x = get(&f0, a, b) * rac;
                            rhs -= &x;
                            terms.push(x);
                        }
                    }
                    let refs: Vec<&CMat> = terms.iter().collect();
                    worst = worst.max(crate::rmatrix::rel_mat(&(&lhs - &rhs), &refs));
                }
            }
            Ok(vec![worst])
        },
    )?;
    let mut rep = IdentityReport::new("lax");
    rep.push(
        IdentityEntry::new(
            "lax",
            &format!("block identity for the off-diagonal cancellation [{label} sites={r}]"),
            "(1.16)",
            sw.max[0],
            sw.samples,
            tol,
            Expect::Pass,
        )
        .with_resampled(sw.resampled),
    );
    Ok(rep)
}

/// At Ñ = 1 the A-type pair is the scalar Krichever pair: L_ij = ν φ(z, q_ij),
/// M_ij = ν f(z, q_ij), M_ii = ν Σ_k E2(q_ik) up to an i-independent shift.
/// Residual is the largest entrywise difference over max(1, |entry|).
pub fn check_rank_one_reduction(
    particles: usize,
    tau: C64,
    nu: C64,
    seed: u64,
    samples: usize,
    tol: f64,
) -> Result<IdentityReport> {
    let m = Modulus::new(tau)?;
    let cfg = ModelConfig::new(
        RootSystem::A,
        particles,
        RMatrixFamily::belavin(1, tau)?,
        nu,
    );
    let label = cfg.label();
    let sw = sweep(
        seed,
        &format!("rank-one/{label}"),
        samples,
        1,
        |s: &mut Sampler| {
            let st = random_state(&cfg, s);
            let z = cfg.family.sample_point(s);
            let ev = build_lax(&cfg, &st, z)?;
            let (l, mm) = (ev.l.mat(), ev.m.mat());
            let d = |a: C64, b: C64| (a - b).norm() / b.norm().max(1.0);
            let mut worst = 0.0f64;
            let mut shift = None;
            for i in 0..particles {
                for j in 0..particles {
                    let x = st.q[i] - st.q[j];
                    if i == j {
                        worst = worst.max(d(l[(i, i)], st.p[i]));
                        let mut e = C64::new(0.0, 0.0);
                        for k in (0..particles).filter(|&k| k != i) {
                            e += m.e2(st.q[i] - st.q[k])?;
                        }
                        let sh = mm[(i, i)] - nu * e;
                        worst = worst.max(d(sh, *shift.get_or_insert(sh)));
                    } else {
                        worst = worst.max(d(l[(i, j)], nu * m.phi(z, x)?));
                        worst = worst.max(d(mm[(i, j)], nu * m.f(z, x)?));
                    }
                }
            }
            Ok(vec![worst])
        },
    )?;
    let mut rep = IdentityReport::new("lax");
    rep.push(
        IdentityEntry::new(
            "lax",
            &format!("rank-one A pair equals the scalar Krichever pair [{label}]"),
            "(1.4)-(1.5)",
            sw.max[0],
            sw.samples,
            tol,
            Expect::Pass,
        )
        .with_resampled(sw.resampled),
    );
    Ok(rep)
}
