use super::SpinState;
use crate::elliptic::Modulus;
use crate::error::{Error, Result};
use crate::laxpairs::{hamiltonian, ModelConfig, PhasePoint, RootSystem};
use crate::quantum::f0_operator;
use crate::report::{relative, Expect, IdentityEntry, IdentityReport};
use crate::rmatrix::RMatrixFamily;
use crate::sampling::{sweep, Sampler};
use crate::tensor::{
    dtau_omega, embed_pair, embed_single, indices, kappa, neg, omega, t, CMat, Index2,
};
use crate::C64;
use nalgebra::{Matrix4, Vector4};
use std::f64::consts::PI;

/// Interacting tops on the minimal orbit: 𝒮^{ij}_{ab} = ξ_i^a η_j^b.
#[derive(Clone, Debug, PartialEq)]
pub struct TopsState {
    pub q: Vec<C64>,
    pub p: Vec<C64>,
    pub xi: Vec<Vec<C64>>,
    pub eta: Vec<Vec<C64>>,
}

impl TopsState {
    /// Requires B^i_0 = tr(B^i)/Ñ equal for all i.
    pub fn new(q: Vec<C64>, p: Vec<C64>, xi: Vec<Vec<C64>>, eta: Vec<Vec<C64>>) -> Result<Self> {
        let sp = SpinState::new(q, p, xi, eta)?;
        Ok(TopsState::from(sp))
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

    /// 𝒮^{ij} = ξ_i η_j^T.
    pub fn block(&self, i: usize, j: usize) -> CMat {
        let nt = self.n_tilde();
        CMat::from_fn(nt, nt, |a, b| self.xi[i][a] * self.eta[j][b])
    }

    /// B^i = 𝒮^{ii}.
    pub fn b(&self, i: usize) -> CMat {
        self.block(i, i)
    }

    pub fn bs(&self) -> Vec<CMat> {
        (0..self.len()).map(|i| self.b(i)).collect()
    }
}

impl From<SpinState> for TopsState {
    fn from(s: SpinState) -> Self {
        TopsState {
            q: s.q,
            p: s.p,
            xi: s.xi,
            eta: s.eta,
        }
    }
}

/// Component of m along T_γ: tr(m T_{-γ}) / Ñ.
fn comp(m: &CMat, g: Index2) -> C64 {
    let n = m.rows();
    (m * &t(n, neg(g))).trace() / n as f64
}

/// All T-basis components of m, over the representatives {0..Ñ-1}².
pub fn t_components(m: &CMat) -> Vec<(Index2, C64)> {
    indices(m.rows())
        .into_iter()
        .map(|g| (g, comp(m, g)))
        .collect()
}

/// φ_γ(x, w) = exp(2πi γ₂ x / Ñ) φ(x, w).
fn phi_g(m: &Modulus, n: usize, g: Index2, x: C64, w: C64) -> Result<C64> {
    Ok((C64::new(0.0, 2.0 * PI * g.1 as f64 / n as f64) * x).exp() * m.phi(x, w)?)
}

fn single_top(m: &Modulus, b: &CMat) -> Result<C64> {
    let n = b.rows();
    let mut out = C64::new(0.0, 0.0);
    for g in indices(n).into_iter().skip(1) {
        out -= 0.5 * comp(b, g) * comp(b, neg(g)) * m.e2(omega(n, g, m.tau()))?;
    }
    Ok(out)
}

/// H^tops in the trace form: ½Σp² - ½ΣΣ_{α≠0} B^i_α B^i_{-α} E2(ω_α)
/// - ½Σ_{i≠j}Σ_α tr(B^i T_α B^j T_{-α}) / Ñ² E2(ω_α - q_ij/Ñ).
pub fn tops_hamiltonian(st: &TopsState, m: &Modulus) -> Result<C64> {
    let n = st.n_tilde();
    let bs = st.bs();
    let mut h: C64 = st.p.iter().map(|p| p * p * 0.5).sum();
    for b in &bs {
        h += single_top(m, b)?;
    }
    let ts: Vec<(CMat, CMat, C64)> = indices(n)
        .into_iter()
        .map(|a| (t(n, a), t(n, neg(a)), omega(n, a, m.tau())))
        .collect();
    for i in 0..st.len() {
        for j in 0..st.len() {
            if i == j {
                continue;
            }
            let x = (st.q[i] - st.q[j]) / n as f64;
            for (ta, tm, w) in &ts {
                let tr = (&(&(&bs[i] * ta) * &bs[j]) * tm).trace();
                h -= 0.5 * tr / (n * n) as f64 * m.e2(w - x)?;
            }
        }
    }
    Ok(h)
}

/// H^tops from the components 𝒮^{ij}_α 𝒮^{ji}_{-α} of all N² blocks.
pub fn tops_hamiltonian_components(st: &TopsState, m: &Modulus) -> Result<C64> {
    let n = st.n_tilde();
    let mut h: C64 = st.p.iter().map(|p| p * p * 0.5).sum();
    for i in 0..st.len() {
        let b = st.block(i, i);
        for g in indices(n).into_iter().skip(1) {
            h -= 0.5 * comp(&b, g) * comp(&b, neg(g)) * m.e2(omega(n, g, m.tau()))?;
        }
        for j in 0..st.len() {
            if i == j {
                continue;
            }
            let (sij, sji) = (st.block(i, j), st.block(j, i));
            let x = (st.q[i] - st.q[j]) / n as f64;
            for g in indices(n) {
                h -= 0.5 * comp(&sij, g) * comp(&sji, neg(g)) * m.e2(omega(n, g, m.tau()) - x)?;
            }
        }
    }
    Ok(h)
}

/// The Mat_{NÑ} Lax matrix with blocks
/// L^ii = p_i + 𝒮^ii_0 E1(z) + Σ_{α≠0} 𝒮^ii_α T_α φ_α(z, ω_α),
/// L^ij = Σ_α 𝒮^ij_α T_α φ_α(z, ω_α - q_ij/Ñ).
pub fn tops_lax(st: &TopsState, z: C64, m: &Modulus) -> Result<CMat> {
    let n = st.n_tilde();
    let nn = st.len();
    let mut l = CMat::zeros(nn * n, nn * n);
    for i in 0..nn {
        for j in 0..nn {
            let s = st.block(i, j);
            let mut blk = CMat::zeros(n, n);
            for g in indices(n) {
                let w = omega(n, g, m.tau());
                let f = if i == j {
                    if g == (0, 0) {
                        m.e1(z)?
                    } else {
                        phi_g(m, n, g, z, w)?
                    }
                } else {
                    phi_g(m, n, g, z, w - (st.q[i] - st.q[j]) / n as f64)?
                };
                blk.axpy(comp(&s, g) * f, &t(n, g));
            }
            if i == j {
                blk += &CMat::scalar(n, st.p[i]);
            }
            l.add_block(i * n, j * n, C64::new(1.0, 0.0), &blk);
        }
    }
    Ok(l)
}

/// Coefficients (c0, c1, c2, c3) of tr L²(z) = c0 + c1 E1(z) + c2 E1(z)² + c3 E2(z),
/// solved from four z-points. c0 = 2Ñ H^tops.
pub fn tops_trace_square_coefficients(
    st: &TopsState,
    m: &Modulus,
    zs: [C64; 4],
) -> Result<[C64; 4]> {
    let mut a = Matrix4::<C64>::zeros();
    let mut y = Vector4::<C64>::zeros();
    for (k, &z) in zs.iter().enumerate() {
        let l = tops_lax(st, z, m)?;
        let e1 = m.e1(z)?;
        a[(k, 0)] = C64::new(1.0, 0.0);
        a[(k, 1)] = e1;
        a[(k, 2)] = e1 * e1;
        a[(k, 3)] = m.e2(z)?;
        y[k] = (&l * &l).trace();
    }
    let x = a
        .lu()
        .solve(&y)
        .ok_or_else(|| Error::Precision("singular z-point system for tr L^2".into()))?;
    Ok([x[0], x[1], x[2], x[3]])
}

/// 𝓕⁰_class = ½Σ_{i≠j}(-E2(q_ij) B^i_0 B^j_0
///   + Σ_{γ≠0} φ_γ(q_ij, ω_γ)(E1(q_ij + ω_γ) - E1(q_ij) + 2πi ∂_τ ω_γ) B^i_γ B^j_{-γ}).
pub fn classical_f0(q: &[C64], b: &[CMat], m: &Modulus) -> Result<C64> {
    let n = b[0].rows();
    let mut out = C64::new(0.0, 0.0);
    for i in 0..q.len() {
        for j in 0..q.len() {
            if i == j {
                continue;
            }
            let x = q[i] - q[j];
            out -= 0.5 * m.e2(x)? * comp(&b[i], (0, 0)) * comp(&b[j], (0, 0));
            for g in indices(n).into_iter().skip(1) {
                let w = omega(n, g, m.tau());
                let k = m.e1(x + w)? - m.e1(x)? + C64::new(0.0, 2.0 * PI * dtau_omega(n, g));
                out += 0.5 * phi_g(m, n, g, x, w)? * k * comp(&b[i], g) * comp(&b[j], neg(g));
            }
        }
    }
    Ok(out)
}

/// ½Σ_{i≠j}Σ_α tr(B^i T_α B^j T_{-α}) E2(ω_α - q_ij/Ñ).
pub fn fourier_lhs(q: &[C64], b: &[CMat], m: &Modulus) -> Result<C64> {
    let n = b[0].rows();
    let mut out = C64::new(0.0, 0.0);
    for i in 0..q.len() {
        for j in 0..q.len() {
            if i == j {
                continue;
            }
            let x = (q[i] - q[j]) / n as f64;
            for a in indices(n) {
                let tr = (&(&(&b[i] * &t(n, a)) * &b[j]) * &t(n, neg(a))).trace();
                out += 0.5 * tr * m.e2(omega(n, a, m.tau()) - x)?;
            }
        }
    }
    Ok(out)
}

/// The same sum after expanding in components: ½ Ñ Σ_{i≠j}Σ_{α,μ} κ²_{α,μ} B^i_{-μ} B^j_μ E2(ω_α - q_ij/Ñ).
fn fourier_components(q: &[C64], b: &[CMat], m: &Modulus) -> Result<C64> {
    let n = b[0].rows();
    let mut out = C64::new(0.0, 0.0);
    for i in 0..q.len() {
        for j in 0..q.len() {
            if i == j {
                continue;
            }
            let x = (q[i] - q[j]) / n as f64;
            for a in indices(n) {
                let e = m.e2(omega(n, a, m.tau()) - x)?;
                for mu in indices(n) {
                    let k = kappa(n, a, mu);
                    out += 0.5 * n as f64 * k * k * comp(&b[i], neg(mu)) * comp(&b[j], mu) * e;
                }
            }
        }
    }
    Ok(out)
}

fn random_b(n: usize, s: &mut Sampler) -> CMat {
    CMat::from_fn(n, n, |_, _| s.complex(1.0, 1.0))
}

/// Both steps of the Fourier reduction of the tops interaction at random
/// positions and random (full rank) B^i.
pub fn check_fourier_reduction(
    particles: usize,
    n_tilde: usize,
    m: &Modulus,
    seed: u64,
    samples: usize,
    tol: f64,
) -> Result<IdentityReport> {
    let label = format!("N={particles} Ntilde={n_tilde} tau={}", m.tau());
    let sw = sweep(
        seed,
        &format!("fourier/{label}"),
        samples,
        2,
        |s: &mut Sampler| {
            let q: Vec<C64> = (0..particles).map(|_| s.cell_point(m.tau())).collect();
            let b: Vec<CMat> = (0..particles).map(|_| random_b(n_tilde, s)).collect();
            let lhs = fourier_lhs(&q, &b, m)?;
            let mid = fourier_components(&q, &b, m)?;
            let rhs = -(n_tilde.pow(3) as f64) * classical_f0(&q, &b, m)?;
            Ok(vec![
                relative((lhs - mid).norm(), lhs.norm().max(mid.norm())),
                relative((lhs - rhs).norm(), lhs.norm().max(rhs.norm())),
            ])
        },
    )?;
    let mut rep = IdentityReport::new("tops");
    rep.push(
        IdentityEntry::new(
            "tops",
            &format!("tr(B T_a B T_-a) expanded with kappa^2 [{label}]"),
            "(4.23)",
            sw.max[0],
            sw.samples,
            tol,
            Expect::Pass,
        )
        .with_resampled(sw.resampled),
    );
    rep.push(
        IdentityEntry::new(
            "tops",
            &format!("Fourier reduction of the tops interaction to -Ntilde^3 F0_class [{label}]"),
            "(4.24)",
            sw.max[1],
            sw.samples,
            tol,
            Expect::Pass,
        )
        .with_resampled(sw.resampled),
    );
    Ok(rep)
}

/// B^i_{ab} ↦ s E^{(i)}_{ba} + b δ_ab on Mat_Ñ^{⊗N}, with s² = Ñħν and
/// Ñb² + 2bs = Ñ²ν² so that the scalar sector reproduces the Calogero
/// coupling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantizationMap {
    pub s: C64,
    pub b: C64,
}

impl QuantizationMap {
    pub fn new(n_tilde: usize, nu: C64, hbar: C64) -> Self {
        let nt = n_tilde as f64;
        let s = (hbar * nu * nt).sqrt();
        let b = ((nu * nu * nt * nt + hbar * nu) / nt).sqrt() - s / nt;
        QuantizationMap { s, b }
    }

    /// Ñb² + 2bs - Ñ²ν² and s² - Ñħν, both zero for the fitted map.
    pub fn defects(&self, n_tilde: usize, nu: C64, hbar: C64) -> (C64, C64) {
        let nt = n_tilde as f64;
        (
            self.b * self.b * nt + 2.0 * self.b * self.s - nu * nu * nt * nt,
            self.s * self.s - hbar * nu * nt,
        )
    }

    fn entry(&self, n: usize, a: usize, b: usize) -> CMat {
        let mut e = CMat::zeros(n, n);
        e[(b, a)] = self.s;
        if a == b {
            e += &CMat::scalar(n, self.b);
        }
        e
    }
}

/// Potential part of the quantized tops Hamiltonian on Mat_Ñ^{⊗N}.
pub fn tops_operator(
    q: &[C64],
    n_tilde: usize,
    map: &QuantizationMap,
    m: &Modulus,
) -> Result<CMat> {
    let n = n_tilde;
    let nn = q.len();
    let dim = n.pow(nn as u32);
    let mut out = CMat::zeros(dim, dim);
    let sn = map.s / n as f64;
    for i in 0..nn {
        for g in indices(n).into_iter().skip(1) {
            let prod = &t(n, neg(g)) * &t(n, g);
            out.axpy(
                -0.5 * sn * sn * m.e2(omega(n, g, m.tau()))?,
                &embed_single(&prod, i, nn, n)?,
            );
        }
    }
    let mut pairs = Vec::new();
    for a in indices(n) {
        let (ta, tm) = (t(n, a), t(n, neg(a)));
        let mut x = CMat::zeros(n * n, n * n);
        for i1 in 0..n {
            for i2 in 0..n {
                for i3 in 0..n {
                    for i4 in 0..n {
                        let c = ta[(i2, i3)] * tm[(i4, i1)];
                        if c.norm() == 0.0 {
                            continue;
                        }
                        x.axpy(c, &map.entry(n, i1, i2).kron(&map.entry(n, i3, i4)));
                    }
                }
            }
        }
        pairs.push((omega(n, a, m.tau()), x));
    }
    for i in 0..nn {
        for j in 0..nn {
            if i == j {
                continue;
            }
            let shift = (q[i] - q[j]) / n as f64;
            let mut xij = CMat::zeros(n * n, n * n);
            for (w, x) in &pairs {
                xij.axpy(m.e2(w - shift)?, x);
            }
            out.axpy(
                C64::new(-0.5 / (n * n) as f64, 0.0),
                &embed_pair(&xij, i, j, nn, n)?,
            );
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Proposition2 {
    pub map: QuantizationMap,
    /// Largest off-identity entry of Ĥ^tops - Ĥ^CM - ħν𝓕⁰ over all position sets.
    pub off_identity: f64,
    /// The identity coefficient at each position set.
    pub consts: Vec<C64>,
    pub const_spread: f64,
}

/// Ĥ^tops - Ĥ^CM - ħν𝓕⁰ at each position set; kinetic terms cancel identically.
pub fn check_proposition2(
    n_tilde: usize,
    positions: &[Vec<C64>],
    nu: C64,
    hbar: C64,
    m: &Modulus,
) -> Result<Proposition2> {
    let nn = positions.first().map(|q| q.len()).unwrap_or(0);
    if nn < 2 || positions.iter().any(|q| q.len() != nn) {
        return Err(Error::ShapeMismatch(
            "need position sets of one common length ≥ 2".into(),
        ));
    }
    let map = QuantizationMap::new(n_tilde, nu, hbar);
    let cfg = ModelConfig::new(
        RootSystem::A,
        nn,
        RMatrixFamily::belavin(n_tilde, m.tau())?,
        nu,
    );
    let mut off = 0.0f64;
    let mut consts = Vec::with_capacity(positions.len());
    for q in positions {
        let tops = tops_operator(q, n_tilde, &map, m)?;
        let v = hamiltonian(
            &cfg,
            &PhasePoint::new(q.clone(), vec![C64::new(0.0, 0.0); nn])?,
        )?;
        let qm: Vec<C64> = q.iter().map(|x| -x).collect();
        let f0 = f0_operator(&cfg, &qm)?;
        let mut diff = &tops - &CMat::scalar(tops.rows(), v);
        diff.axpy(-hbar * nu, &f0);
        let (c, rest) = diff.split_identity();
        off = off.max(rest);
        consts.push(c);
    }
    let const_spread = consts
        .iter()
        .map(|c| (c - consts[0]).norm())
        .fold(0.0, f64::max);
    Ok(Proposition2 {
        map,
        off_identity: off,
        consts,
        const_spread,
    })
}

/// Proposition 2 as report entries, over `sets` random position sets.
pub(crate) fn proposition2_report(
    particles: usize,
    n_tilde: usize,
    nu: C64,
    hbar: C64,
    m: &Modulus,
    seed: u64,
    sets: usize,
    tol: f64,
) -> Result<IdentityReport> {
    let fam = RMatrixFamily::belavin(n_tilde, m.tau())?;
    let mut positions = Vec::with_capacity(sets);
    let mut k = 0u64;
    while positions.len() < sets {
        let mut s = Sampler::split(seed, &format!("prop2/{particles}/{n_tilde}"), k);
        k += 1;
        let q: Vec<C64> = (0..particles).map(|_| fam.sample_point(&mut s)).collect();
        let clear = (0..particles).all(|i| (0..i).all(|j| fam.pole_distance(q[i] - q[j]) > 1e-2));
        if clear {
            positions.push(q);
        }
    }
    let r = check_proposition2(n_tilde, &positions, nu, hbar, m)?;
    let label = format!("N={particles} Ntilde={n_tilde} nu={nu} hbar={hbar}");
    let mut rep = IdentityReport::new("tops")
        .env(
            &format!("prop2 const [{label}]"),
            format!("{:.12e}", r.consts[0]),
        )
        .env(
            &format!("prop2 couplings [{label}]"),
            format!(
                "s={:.12e} b={:.12e} (s^2 = Ntilde hbar nu, Ntilde b^2 + 2 b s = Ntilde^2 nu^2)",
                r.map.s, r.map.b
            ),
        );
    rep.push(IdentityEntry::new(
        "tops",
        &format!("H_tops - H_CM - hbar nu F0 is proportional to the identity [{label}]"),
        "(1.25), Proposition 2",
        r.off_identity,
        sets,
        tol,
        Expect::Pass,
    ));
    rep.push(IdentityEntry::new(
        "tops",
        &format!("Proposition 2 constant is independent of positions [{label}]"),
        "(1.25), Proposition 2",
        relative(r.const_spread, r.consts[0].norm().max(1.0)),
        sets,
        tol,
        Expect::Pass,
    ));
    Ok(rep)
}
