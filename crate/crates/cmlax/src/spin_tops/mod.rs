//! Classical spin Calogero-Moser model on the rank-one orbit S = ξ η^T,
//! interacting elliptic tops, and the fundamental-representation
//! quantization of the tops Hamiltonian.

mod tops;

pub use tops::{
    check_fourier_reduction, check_proposition2, classical_f0, fourier_lhs, t_components,
    tops_hamiltonian, tops_hamiltonian_components, tops_lax, tops_trace_square_coefficients,
    Proposition2, QuantizationMap, TopsState,
};

use crate::elliptic::{FunctionFamily, Modulus};
use crate::error::{Error, Result};
use crate::report::{relative, Expect, IdentityEntry, IdentityReport};
use crate::sampling::{sweep, Sampler};
use crate::tensor::CMat;
use crate::C64;

/// Tolerance of the S_ii = const constraint.
pub const CONSTRAINT_TOL: f64 = 1e-12;

/// Particles plus canonical spin pairs: S_ij = Σ_a ξ_i^a η_j^a, {ξ_i^a, η_j^b} = δ_ij δ_ab.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinState {
    pub q: Vec<C64>,
    pub p: Vec<C64>,
    pub xi: Vec<Vec<C64>>,
    pub eta: Vec<Vec<C64>>,
}

fn check_shapes(q: &[C64], p: &[C64], xi: &[Vec<C64>], eta: &[Vec<C64>]) -> Result<usize> {
    let n = q.len();
    if p.len() != n || xi.len() != n || eta.len() != n || n == 0 {
        return Err(Error::ShapeMismatch(
            "q, p, ξ and η need one row per particle".into(),
        ));
    }
    let nt = xi[0].len();
    if nt == 0 || xi.iter().chain(eta).any(|r| r.len() != nt) {
        return Err(Error::ShapeMismatch(
            "ξ and η rows must share one spin dimension".into(),
        ));
    }
    Ok(nt)
}

pub(crate) fn diagonal_constraint(s: &CMat) -> Result<()> {
    let n = s.rows();
    let scale = (0..n).map(|i| s[(i, i)].norm()).fold(1.0, f64::max);
    for i in 1..n {
        let d = (s[(i, i)] - s[(0, 0)]).norm();
        if d > CONSTRAINT_TOL * scale {
            return Err(Error::Constraint(format!(
                "S_{i}{i} - S_00 = {d:.3e}; the diagonal of S must be constant"
            )));
        }
    }
    Ok(())
}

impl SpinState {
    pub fn new(q: Vec<C64>, p: Vec<C64>, xi: Vec<Vec<C64>>, eta: Vec<Vec<C64>>) -> Result<Self> {
        check_shapes(&q, &p, &xi, &eta)?;
        let st = SpinState { q, p, xi, eta };
        diagonal_constraint(&st.s())?;
        Ok(st)
    }

    /// Rescales each η_i so that S_ii = c.
    pub fn constrained(
        q: Vec<C64>,
        p: Vec<C64>,
        xi: Vec<Vec<C64>>,
        mut eta: Vec<Vec<C64>>,
        c: C64,
    ) -> Result<Self> {
        check_shapes(&q, &p, &xi, &eta)?;
        for (x, e) in xi.iter().zip(eta.iter_mut()) {
            let sii: C64 = x.iter().zip(e.iter()).map(|(a, b)| a * b).sum();
            if sii.norm() < 1e-8 {
                return Err(Error::Constraint(
                    "ξ_i · η_i vanishes; cannot rescale".into(),
                ));
            }
            for v in e.iter_mut() {
                *v *= c / sii;
            }
        }
        SpinState::new(q, p, xi, eta)
    }

    /// Random constrained state with positions from `sample`.
    pub fn random(
        n: usize,
        n_tilde: usize,
        c: C64,
        s: &mut Sampler,
        mut sample: impl FnMut(&mut Sampler) -> C64,
    ) -> Result<Self> {
        let q = (0..n).map(|_| sample(s)).collect();
        let p = s.complex_vec(n, 1.0, 1.0);
        let xi = (0..n).map(|_| s.complex_vec(n_tilde, 1.0, 1.0)).collect();
        let eta = (0..n).map(|_| s.complex_vec(n_tilde, 1.0, 1.0)).collect();
        SpinState::constrained(q, p, xi, eta, c)
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn n_tilde(&self) -> usize {
        self.xi[0].len()
    }

    pub fn s(&self) -> CMat {
        let n = self.len();
        CMat::from_fn(n, n, |i, j| {
            self.xi[i]
                .iter()
                .zip(&self.eta[j])
                .map(|(a, b)| a * b)
                .sum()
        })
    }
}

/// Time derivatives of every coordinate of a [`SpinState`].
#[derive(Clone, Debug, PartialEq)]
pub struct SpinFlow {
    pub q: Vec<C64>,
    pub p: Vec<C64>,
    pub xi: Vec<Vec<C64>>,
    pub eta: Vec<Vec<C64>>,
}

/// H = ½Σp² - Σ_{i>j} S_ij S_ji E2(q_ij).
pub fn spin_cm_hamiltonian(st: &SpinState, fam: &FunctionFamily) -> Result<C64> {
    let s = st.s();
    let mut h: C64 = st.p.iter().map(|p| p * p * 0.5).sum();
    for i in 0..st.len() {
        for j in 0..i {
            h -= s[(i, j)] * s[(j, i)] * fam.e2(st.q[i] - st.q[j])?;
        }
    }
    Ok(h)
}

/// ḟ = {H, f} for the canonical brackets.
pub fn spin_cm_flow(st: &SpinState, fam: &FunctionFamily) -> Result<SpinFlow> {
    let n = st.len();
    let nt = st.n_tilde();
    let s = st.s();
    let zero = C64::new(0.0, 0.0);
    let mut w = CMat::zeros(n, n);
    let mut pdot = vec![zero; n];
    for k in 0..n {
        for j in 0..n {
            if j != k {
                let x = st.q[k] - st.q[j];
                w[(k, j)] = fam.e2(x)?;
                pdot[k] += s[(k, j)] * s[(j, k)] * fam.wp_prime(x)?;
            }
        }
    }
    let mut xi = vec![vec![zero; nt]; n];
    let mut eta = vec![vec![zero; nt]; n];
    for k in 0..n {
        for i in 0..n {
            if i == k {
                continue;
            }
            for a in 0..nt {
                xi[k][a] += w[(k, i)] * s[(k, i)] * st.xi[i][a];
                eta[k][a] -= w[(k, i)] * s[(i, k)] * st.eta[i][a];
            }
        }
    }
    Ok(SpinFlow {
        q: st.p.clone(),
        p: pdot,
        xi,
        eta,
    })
}

/// L_ij = δ_ij(p_i + S_ii E1(z)) + (1-δ_ij) S_ij φ(z, q_ij), M_ij = (1-δ_ij) S_ij f(z, q_ij).
pub fn spin_cm_lax(st: &SpinState, z: C64, fam: &FunctionFamily) -> Result<(CMat, CMat)> {
    diagonal_constraint(&st.s())?;
    let n = st.len();
    let s = st.s();
    let e1 = fam.e1(z)?;
    let mut l = CMat::zeros(n, n);
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        l[(i, i)] = st.p[i] + s[(i, i)] * e1;
        for j in 0..n {
            if i != j {
                let x = st.q[i] - st.q[j];
                l[(i, j)] = s[(i, j)] * fam.phi(z, x)?;
                m[(i, j)] = s[(i, j)] * fam.f(z, x)?;
            }
        }
    }
    Ok((l, m))
}

/// max |L̇ - [L, M]| along the flow, relative to the largest term.
pub fn spin_cm_residual(st: &SpinState, z: C64, fam: &FunctionFamily) -> Result<f64> {
    let (l, m) = spin_cm_lax(st, z, fam)?;
    let fl = spin_cm_flow(st, fam)?;
    let n = st.len();
    let sdot = CMat::from_fn(n, n, |i, j| {
        (0..st.n_tilde())
            .map(|a| fl.xi[i][a] * st.eta[j][a] + st.xi[i][a] * fl.eta[j][a])
            .sum()
    });
    let s = st.s();
    let e1 = fam.e1(z)?;
    let mut ldot = CMat::zeros(n, n);
    for i in 0..n {
        ldot[(i, i)] = fl.p[i] + sdot[(i, i)] * e1;
        for j in 0..n {
            if i != j {
                let x = st.q[i] - st.q[j];
                ldot[(i, j)] =
                    sdot[(i, j)] * fam.phi(z, x)? + s[(i, j)] * fam.f(z, x)? * (fl.q[i] - fl.q[j]);
            }
        }
    }
    let lm = &l * &m;
    let ml = &m * &l;
    let scale = ldot.max_abs().max(lm.max_abs()).max(ml.max_abs());
    Ok(crate::report::relative(
        (&ldot - &(&lm - &ml)).max_abs(),
        scale,
    ))
}

/// {S_ij, S_kl} from the canonical brackets of ξ and η.
pub fn spin_bracket(st: &SpinState, (i, j): (usize, usize), (k, l): (usize, usize)) -> C64 {
    let mut out = C64::new(0.0, 0.0);
    for m in 0..st.len() {
        for a in 0..st.n_tilde() {
            // ∂S_ij/∂ξ_m^a = δ_im η_j^a, ∂S_ij/∂η_m^a = δ_jm ξ_i^a
            let dxi = |r: usize, c: usize| {
                if r == m {
                    st.eta[c][a]
                } else {
                    C64::new(0.0, 0.0)
                }
            };
            let deta = |r: usize, c: usize| {
                if c == m {
                    st.xi[r][a]
                } else {
                    C64::new(0.0, 0.0)
                }
            };
            out += dxi(i, j) * deta(k, l) - deta(i, j) * dxi(k, l);
        }
    }
    out
}

/// Spin Calogero-Moser Lax equation and the interacting-tops identities at
/// seeded random states; Proposition 2 on five position sets.
#[allow(clippy::too_many_arguments)]
pub fn check_tops_suite(
    particles: usize,
    n_tilde: usize,
    tau: C64,
    nu: C64,
    hbar: C64,
    seed: u64,
    samples: usize,
    tol: f64,
) -> Result<IdentityReport> {
    let m = Modulus::new(tau)?;
    let fam = FunctionFamily::elliptic(tau)?;
    let label = format!("N={particles} Ntilde={n_tilde} tau={tau}");
    let zs = [
        C64::new(0.21, 0.13),
        C64::new(-0.17, 0.31),
        C64::new(0.33, -0.08),
        C64::new(0.05, 0.27),
    ];
    let sw = sweep(
        seed,
        &format!("tops/{label}"),
        samples,
        3,
        |s: &mut Sampler| {
            let c = s.complex(1.0, 1.0);
            let st = SpinState::random(particles, n_tilde, c, s, |s| s.cell_point(tau))?;
            let z = s.cell_point(tau);
            let lax = spin_cm_residual(&st, z, &fam)?;
            let tops = TopsState::from(st);
            let h = tops_hamiltonian(&tops, &m)?;
            let hc = tops_hamiltonian_components(&tops, &m)?;
            let k = tops_trace_square_coefficients(&tops, &m, zs)?;
            let want = h * (2.0 * n_tilde as f64);
            Ok(vec![
                lax,
                relative((h - hc).norm(), h.norm().max(hc.norm())),
                relative((k[0] - want).norm(), want.norm().max(k[0].norm())),
            ])
        },
    )?;
    let mut rep = IdentityReport::new("tops");
    let rows = [
        (
            "spin Calogero-Moser Lax equation on the rank-one orbit",
            "(4.3)-(4.9)",
        ),
        (
            "tops Hamiltonian: trace form equals component form",
            "(4.17), (4.22)",
        ),
        (
            "constant term of tr L^2(z) is 2 Ntilde H_tops",
            "(4.15)-(4.17)",
        ),
    ];
    for ((name, tag), r) in rows.iter().zip(&sw.max) {
        rep.push(
            IdentityEntry::new(
                "tops",
                &format!("{name} [{label}]"),
                tag,
                *r,
                sw.samples,
                tol,
                Expect::Pass,
            )
            .with_resampled(sw.resampled),
        );
    }
    rep.extend(check_fourier_reduction(
        particles, n_tilde, &m, seed, samples, tol,
    )?);
    rep.extend(tops::proposition2_report(
        particles, n_tilde, nu, hbar, &m, seed, 5, tol,
    )?);
    Ok(rep)
}
