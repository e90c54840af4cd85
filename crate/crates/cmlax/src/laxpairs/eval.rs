use super::structure::{dot, structure, DiagTerm, LaxStructure};
use super::{ModelConfig, PhasePoint, STATE_GUARD};
use crate::error::{Error, Result};
use crate::rmatrix::RMatrixFamily;
use crate::tensor::{embed_pair, CMat, SiteOperator};
use crate::C64;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct LaxPairEval {
    pub l: SiteOperator,
    pub m: SiteOperator,
    pub aux_dim: usize,
    pub num_sites: usize,
}

fn check_state(cfg: &ModelConfig, s: &LaxStructure, st: &PhasePoint) -> Result<()> {
    if st.len() != cfg.particles {
        return Err(Error::ShapeMismatch(format!(
            "state has {} particles, config {}",
            st.len(),
            cfg.particles
        )));
    }
    let args = s
        .entries
        .iter()
        .map(|e| &e.arg)
        .chain(s.potential.iter().map(|t| &t.arg));
    for arg in args {
        let x = dot(arg, &st.q);
        let d = cfg.family.pole_distance(x);
        if d < STATE_GUARD {
            return Err(Error::PoleProximity {
                context: "phase point",
                arg: format!("{x}"),
                distance: d,
                guard: STATE_GUARD,
            });
        }
    }
    Ok(())
}

pub(crate) struct Blocks {
    pub s: LaxStructure,
    /// Per entry: embedded R, F and F'.
    pub r: Vec<CMat>,
    pub f: Vec<CMat>,
    pub f2: Vec<CMat>,
    pub dim: usize,
}

pub(crate) fn embed(
    fam: &RMatrixFamily,
    m: &CMat,
    sites: (usize, usize),
    r: usize,
) -> Result<CMat> {
    embed_pair(m, sites.0, sites.1, r, fam.n())
}

pub(crate) fn diag_value(
    cfg: &ModelConfig,
    s: &LaxStructure,
    t: &DiagTerm,
    q: &[C64],
) -> Result<CMat> {
    let dim = cfg.rank().pow(s.sites as u32);
    match t {
        DiagTerm::F0 { coef, sites, arg } => {
            let m = cfg.family.f0(dot(arg, q))?;
            Ok(embed(&cfg.family, &m, *sites, s.sites)? * *coef)
        }
        DiagTerm::Wp { coef, arg } => Ok(CMat::scalar(dim, coef * cfg.family.wp(dot(arg, q))?)),
    }
}

/// ∂/∂q_k of a diagonal term, k = 0..particles.
pub(crate) fn diag_gradient(
    cfg: &ModelConfig,
    s: &LaxStructure,
    t: &DiagTerm,
    q: &[C64],
) -> Result<Vec<CMat>> {
    let dim = cfg.rank().pow(s.sites as u32);
    let (arg, d) = match t {
        DiagTerm::F0 { coef, sites, arg } => {
            let m = cfg.family.f0_prime(dot(arg, q))?;
            (arg, embed(&cfg.family, &m, *sites, s.sites)? * *coef)
        }
        DiagTerm::Wp { coef, arg } => (
            arg,
            CMat::scalar(dim, coef * cfg.family.wp_prime(dot(arg, q))?),
        ),
    };
    Ok(arg.iter().map(|&k| &d * C64::new(k as f64, 0.0)).collect())
}

pub(crate) fn blocks(cfg: &ModelConfig, st: &PhasePoint, z: C64) -> Result<Blocks> {
    let s = structure(cfg)?;
    check_state(cfg, &s, st)?;
    let dim = cfg.rank().pow(s.sites as u32);
    let mut r = Vec::with_capacity(s.entries.len());
    let mut f = Vec::with_capacity(s.entries.len());
    let mut f2 = Vec::with_capacity(s.entries.len());
    for e in &s.entries {
        let ev = cfg.family.r_eval(z, dot(&e.arg, &st.q))?;
        r.push(embed(&cfg.family, &ev.value, e.sites, s.sites)?);
        f.push(embed(&cfg.family, &ev.d_q, e.sites, s.sites)?);
        f2.push(embed(&cfg.family, &ev.d2_q, e.sites, s.sites)?);
    }
    Ok(Blocks { s, r, f, f2, dim })
}

impl Blocks {
    pub fn op(&self, cfg: &ModelConfig) -> SiteOperator {
        SiteOperator::zeros(self.s.aux, cfg.rank(), self.s.sites)
    }

    pub fn l(&self, cfg: &ModelConfig, st: &PhasePoint) -> SiteOperator {
        let mut l = self.op(cfg);
        for (e, r) in self.s.entries.iter().zip(&self.r) {
            l.add_aux_block(e.row, e.col, e.coef, r);
        }
        let one = CMat::identity(self.dim);
        for m in &self.s.momenta {
            l.add_aux_block(m.row, m.row, st.p[m.particle] * m.sign, &one);
        }
        l
    }

    /// 𝓕⁰ as a quantum-space operator.
    pub fn f0_total(&self, cfg: &ModelConfig, q: &[C64]) -> Result<CMat> {
        let mut out = CMat::zeros(self.dim, self.dim);
        for t in &self.s.f0 {
            out += &diag_value(cfg, &self.s, t, q)?;
        }
        Ok(out)
    }

    pub fn d_blocks(&self, cfg: &ModelConfig, q: &[C64]) -> Result<Vec<CMat>> {
        self.s
            .d
            .iter()
            .map(|terms| {
                let mut out = CMat::zeros(self.dim, self.dim);
                for t in terms {
                    out += &diag_value(cfg, &self.s, t, q)?;
                }
                Ok(out)
            })
            .collect()
    }

    /// M with or without the ν𝓕⁰ term on the diagonal.
    pub fn m(&self, cfg: &ModelConfig, q: &[C64], with_f0: bool) -> Result<SiteOperator> {
        let mut m = self.op(cfg);
        for (e, f) in self.s.entries.iter().zip(&self.f) {
            m.add_aux_block(e.row, e.col, e.coef, f);
        }
        let f0 = if with_f0 {
            Some(self.f0_total(cfg, q)? * self.s.nu)
        } else {
            None
        };
        for (i, d) in self.d_blocks(cfg, q)?.iter().enumerate() {
            m.add_aux_block(i, i, C64::new(1.0, 0.0), d);
            if let Some(f0) = &f0 {
                m.add_aux_block(i, i, C64::new(1.0, 0.0), f0);
            }
        }
        Ok(m)
    }
}

pub fn build_lax(cfg: &ModelConfig, st: &PhasePoint, z: C64) -> Result<LaxPairEval> {
    let b = blocks(cfg, st, z)?;
    Ok(LaxPairEval {
        l: b.l(cfg, st),
        m: b.m(cfg, &st.q, true)?,
        aux_dim: b.s.aux,
        num_sites: b.s.sites,
    })
}

pub fn build_l(cfg: &ModelConfig, st: &PhasePoint, z: C64) -> Result<SiteOperator> {
    Ok(blocks(cfg, st, z)?.l(cfg, st))
}

pub fn build_m(cfg: &ModelConfig, st: &PhasePoint, z: C64) -> Result<SiteOperator> {
    blocks(cfg, st, z)?.m(cfg, &st.q, true)
}

/// H = ½ Σ p² + Σ c ℘(v·q).
pub fn hamiltonian(cfg: &ModelConfig, st: &PhasePoint) -> Result<C64> {
    let s = structure(cfg)?;
    check_state(cfg, &s, st)?;
    let mut h: C64 = st.p.iter().map(|p| p * p * 0.5).sum();
    for t in &s.potential {
        h += t.coef * cfg.family.wp(dot(&t.arg, &st.q))?;
    }
    Ok(h)
}

/// Hamilton's equations: (q̇, ṗ).
pub fn eom(cfg: &ModelConfig, st: &PhasePoint) -> Result<(Vec<C64>, Vec<C64>)> {
    let s = structure(cfg)?;
    check_state(cfg, &s, st)?;
    let mut pdot = vec![C64::new(0.0, 0.0); st.len()];
    for t in &s.potential {
        let w = t.coef * cfg.family.wp_prime(dot(&t.arg, &st.q))?;
        for (pd, &k) in pdot.iter_mut().zip(&t.arg) {
            *pd -= w * k as f64;
        }
    }
    Ok((st.p.clone(), pdot))
}

/// Human-readable form of the Hamiltonian actually used.
pub fn describe_hamiltonian(cfg: &ModelConfig) -> Result<String> {
    let s = structure(cfg)?;
    let mut groups: BTreeMap<&str, C64> = BTreeMap::new();
    for t in &s.potential {
        groups.entry(t.kind).or_insert(t.coef);
    }
    let mut out = String::from("1/2 sum p_a^2");
    for (kind, c) in groups {
        let sum = if kind == "wp(q_a-q_b)" || kind == "wp(q_a+q_b)" {
            "sum_{a<b}"
        } else {
            "sum_a"
        };
        out += &format!(" + ({:.6}{:+.6}i) {sum} {kind}", c.re, c.im);
    }
    Ok(out)
}

/// L̇ - [L, M] with L̇ from the chain rule along Hamilton's flow, and the
/// scale max(|L̇|, |LM|, |ML|).
pub fn lax_defect(cfg: &ModelConfig, st: &PhasePoint, z: C64) -> Result<(SiteOperator, f64)> {
    let b = blocks(cfg, st, z)?;
    let (qdot, pdot) = eom(cfg, st)?;
    let l = b.l(cfg, st);
    let m = b.m(cfg, &st.q, true)?;
    let mut ldot = b.op(cfg);
    for (e, f) in b.s.entries.iter().zip(&b.f) {
        ldot.add_aux_block(e.row, e.col, e.coef * dot(&e.arg, &qdot), f);
    }
    let one = CMat::identity(b.dim);
    for mo in &b.s.momenta {
        ldot.add_aux_block(mo.row, mo.row, pdot[mo.particle] * mo.sign, &one);
    }
    let lm = l.mul(&m)?;
    let ml = m.mul(&l)?;
    let scale = ldot.max_abs().max(lm.max_abs()).max(ml.max_abs());
    let defect = ldot.sub(&lm.sub(&ml)?)?;
    Ok((defect, scale))
}

/// max |L̇ - [L, M]| relative to the largest term.
pub fn lax_residual(cfg: &ModelConfig, st: &PhasePoint, z: C64) -> Result<f64> {
    let (d, scale) = lax_defect(cfg, st, z)?;
    Ok(crate::report::relative(d.max_abs(), scale))
}
