//! Named verification suites over the library's identity checks.

use crate::elliptic::{check_fay_suite, FunctionFamily};
use crate::error::{Error, Result};
use crate::laxpairs::{
    check_block_identity, check_lax_suite, check_rank_one_reduction, ModelConfig, RootSystem,
};
use crate::quantum::{
    check_pd_suite, check_quantum_lax, check_scalar_f0_suite, check_spin_exchange_suite,
    check_sum_to_zero_suite, check_xxz_f0_suite,
};
use crate::report::{Expect, IdentityReport, FAIL_THRESHOLD};
use crate::rmatrix::{
    check_aybe, check_fourier, check_kzb_flatness, check_pauli_structure, check_qybe,
    check_unitarity_skew, RMatrixFamily,
};
use crate::spin_tops::check_tops_suite;
use crate::C64;
use std::fmt;

/// The m-part of the KZB check is extracted from an η-expansion.
const KZB_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Elliptic,
    RMatrix,
    Lax,
    Quantum,
    Tops,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "elliptic" => Ok(Suite::Elliptic),
            "rmatrix" => Ok(Suite::RMatrix),
            "lax" => Ok(Suite::Lax),
            "quantum" => Ok(Suite::Quantum),
            "tops" => Ok(Suite::Tops),
            "all" => Ok(Suite::All),
            _ => Err(Error::InvalidConfig(format!("unknown suite '{s}'"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Elliptic => "elliptic",
            Suite::RMatrix => "rmatrix",
            Suite::Lax => "lax",
            Suite::Quantum => "quantum",
            Suite::Tops => "tops",
            Suite::All => "all",
        })
    }
}

/// Parameters shared by all suites. Unset model fields select the default
/// battery of configurations.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOptions {
    pub tau: C64,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub n_tilde: Option<usize>,
    pub system: Option<RootSystem>,
    pub particles: Option<usize>,
    pub nu: C64,
    pub mu: Option<C64>,
    pub g: Option<C64>,
    pub hbar: C64,
    /// Overrides the expectation of every entry.
    pub expect: Option<Expect>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            tau: C64::new(0.0, 1.0),
            seed: 0,
            samples: 50,
            tol: 1e-9,
            n_tilde: None,
            system: None,
            particles: None,
            nu: C64::new(0.7, 0.0),
            mu: None,
            g: None,
            hbar: C64::new(1.0, 0.0),
            expect: None,
        }
    }
}

impl SuiteOptions {
    /// The single model config described by the flags, forced when the
    /// couplings or rank are outside the admissibility table.
    pub fn model(&self, root: RootSystem) -> Result<ModelConfig> {
        let n = self.particles.unwrap_or(2);
        let rank = match root {
            RootSystem::ScalarDP => self.n_tilde.unwrap_or(1),
            _ => self.n_tilde.unwrap_or(2),
        };
        let fam = RMatrixFamily::belavin(rank, self.tau)?;
        let mut cfg = ModelConfig::new(root, n, fam, self.nu);
        if self.mu.is_some() || self.g.is_some() {
            let (mu, g) = (self.mu.unwrap_or(cfg.mu), self.g.unwrap_or(cfg.g));
            cfg = cfg.with_couplings(mu, g);
        }
        if !cfg.is_admissible() {
            cfg = cfg.forced();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn ranks(&self, default: &[usize]) -> Vec<usize> {
        self.n_tilde.map_or_else(|| default.to_vec(), |n| vec![n])
    }
}

/// Resets every entry to `expect`; an expected failure must exceed
/// [`FAIL_THRESHOLD`].
pub fn override_expect(rep: &mut IdentityReport, expect: Expect, tol: f64) {
    for e in &mut rep.entries {
        e.expect = expect;
        e.tol = match expect {
            Expect::Pass => tol,
            Expect::Fail => FAIL_THRESHOLD,
        };
        e.pass = match expect {
            Expect::Pass => e.max_residual < e.tol,
            Expect::Fail => e.max_residual > e.tol,
        };
    }
}

fn env(rep: IdentityReport, o: &SuiteOptions, suite: Suite) -> IdentityReport {
    rep.env("suite", suite)
        .env("seed", o.seed)
        .env("tau", o.tau)
        .env("samples", o.samples)
        .env("tol", format!("{:e}", o.tol))
        .env(
            "ntilde",
            o.n_tilde.map_or("default".to_string(), |n| n.to_string()),
        )
}

pub fn elliptic_suite(o: &SuiteOptions) -> Result<IdentityReport> {
    let mut rep = IdentityReport::new("elliptic");
    for fam in [
        FunctionFamily::rational(),
        FunctionFamily::trigonometric(),
        FunctionFamily::elliptic(o.tau)?,
    ] {
        rep.extend(check_fay_suite(&fam, o.seed, o.samples, o.tol)?);
    }
    Ok(rep)
}

pub fn rmatrix_suite(o: &SuiteOptions) -> Result<IdentityReport> {
    let mut rep = IdentityReport::new("rmatrix");
    let mut fams = Vec::new();
    for n in o.ranks(&[2, 3]) {
        fams.push(RMatrixFamily::belavin(n, o.tau)?);
    }
    for n in o.ranks(&[1, 2, 3]) {
        fams.push(RMatrixFamily::yang(n));
    }
    if o.n_tilde.is_none_or(|n| n == 2) {
        fams.push(RMatrixFamily::xxz());
    }
    for fam in &fams {
        rep.extend(check_aybe(fam, o.seed, o.samples, o.tol)?);
        rep.extend(check_unitarity_skew(fam, o.seed, o.samples, o.tol)?);
        rep.extend(check_qybe(fam, o.seed, o.samples, o.tol)?);
    }
    for n in o.ranks(&[2, 3]) {
        if n < 2 {
            continue;
        }
        rep.extend(check_fourier(n, o.tau, o.seed, o.samples, o.tol)?);
        rep.extend(check_pauli_structure(n, o.tau, o.seed, o.samples, o.tol)?);
        rep.extend(check_kzb_flatness(
            n,
            o.tau,
            o.seed,
            o.samples,
            o.tol.max(KZB_TOL),
        )?);
    }
    Ok(rep)
}

/// Admissible configurations and the three sharp negative controls.
fn lax_battery(o: &SuiteOptions) -> Result<Vec<ModelConfig>> {
    let bel = |n: usize| RMatrixFamily::belavin(n, o.tau);
    let nu = o.nu;
    let sq2 = nu * 2f64.sqrt();
    let mut out = Vec::new();
    for n in [2, 3] {
        for rank in o.ranks(&[1, 2, 3]) {
            out.push(ModelConfig::new(RootSystem::A, n, bel(rank)?, nu));
        }
    }
    out.push(ModelConfig::new(RootSystem::C, 2, bel(2)?, nu));
    for g in [nu, -nu] {
        out.push(ModelConfig::new(RootSystem::BC, 2, bel(2)?, nu).with_couplings(nu, g));
    }
    for n in [2, 3] {
        out.push(ModelConfig::new(RootSystem::D, n, bel(2)?, nu));
    }
    for g in [sq2, -sq2] {
        out.push(
            ModelConfig::new(RootSystem::B, 2, bel(2)?, nu).with_couplings(C64::new(0.0, 0.0), g),
        );
    }
    out.push(ModelConfig::new(RootSystem::ScalarDP, 2, bel(1)?, nu));
    out.push(ModelConfig::new(RootSystem::D, 2, bel(3)?, nu).forced());
    out.push(
        ModelConfig::new(RootSystem::BC, 2, bel(2)?, nu)
            .with_couplings(nu, nu * 0.7)
            .forced(),
    );
    out.push(
        ModelConfig::new(RootSystem::ScalarDP, 2, bel(1)?, nu)
            .with_couplings(nu, nu * 0.5)
            .forced(),
    );
    Ok(out)
}

pub fn lax_suite(o: &SuiteOptions) -> Result<IdentityReport> {
    let mut rep = IdentityReport::new("lax");
    if let Some(root) = o.system {
        rep.extend(check_lax_suite(&o.model(root)?, o.seed, o.samples, o.tol)?);
        return Ok(rep);
    }
    for cfg in lax_battery(o)? {
        rep.extend(check_lax_suite(&cfg, o.seed, o.samples, o.tol)?);
    }
    rep.extend(check_rank_one_reduction(
        3,
        o.tau,
        o.nu,
        o.seed,
        o.samples,
        o.tol.max(1e-12),
    )?);
    for n in o.ranks(&[2, 3]) {
        rep.extend(check_block_identity(
            &RMatrixFamily::belavin(n, o.tau)?,
            3,
            o.seed,
            o.samples,
            o.tol,
        )?);
    }
    Ok(rep)
}

/// One quantum configuration: the coefficient-wise Lax check and [P, D + F0].
pub fn quantum_check(cfg: &ModelConfig, o: &SuiteOptions, hbars: &[C64]) -> Result<IdentityReport> {
    let mut rep = IdentityReport::new("quantum");
    for &h in hbars {
        rep.extend(check_quantum_lax(cfg, h, o.seed, o.samples, o.tol)?);
    }
    rep.extend(check_pd_suite(cfg, o.seed, o.samples, o.tol)?);
    Ok(rep)
}

pub fn quantum_suite(o: &SuiteOptions) -> Result<IdentityReport> {
    let hbars = [C64::new(0.1, 0.0), C64::new(1.0, 0.0), C64::new(2.0, 0.0)];
    let mut rep = IdentityReport::new("quantum");
    if let Some(root) = o.system {
        rep.extend(quantum_check(&o.model(root)?, o, &[o.hbar])?);
        return Ok(rep);
    }
    let bel2 = RMatrixFamily::belavin(2, o.tau)?;
    let mut cfgs = Vec::new();
    for n in [2, 3] {
        cfgs.push(ModelConfig::new(RootSystem::A, n, bel2.clone(), o.nu));
        cfgs.push(ModelConfig::new(RootSystem::D, n, bel2.clone(), o.nu));
    }
    cfgs.push(ModelConfig::new(RootSystem::B, 2, bel2.clone(), o.nu));
    cfgs.push(ModelConfig::new(RootSystem::C, 2, bel2.clone(), o.nu));
    cfgs.push(ModelConfig::new(RootSystem::BC, 2, bel2, o.nu));
    for cfg in &cfgs {
        rep.extend(quantum_check(cfg, o, &hbars)?);
    }
    for fam in [
        RMatrixFamily::yang(1),
        RMatrixFamily::exchange(1, FunctionFamily::rational()),
        RMatrixFamily::exchange(1, FunctionFamily::trigonometric()),
        RMatrixFamily::belavin(1, o.tau)?,
    ] {
        rep.extend(check_sum_to_zero_suite(
            &fam,
            3,
            o.seed,
            o.samples,
            o.tol.max(1e-12),
        )?);
    }
    rep.extend(check_scalar_f0_suite(o.tau, 3, o.seed, o.samples, o.tol)?);
    rep.extend(check_xxz_f0_suite(3, o.seed, o.samples, o.tol)?);
    for fam in [FunctionFamily::rational(), FunctionFamily::elliptic(o.tau)?] {
        rep.extend(check_spin_exchange_suite(
            2, 3, &fam, o.seed, o.samples, o.tol,
        )?);
    }
    Ok(rep)
}

pub fn tops_suite(o: &SuiteOptions) -> Result<IdentityReport> {
    let mut rep = IdentityReport::new("tops");
    let sizes: Vec<usize> = o.particles.map_or_else(|| vec![2, 3], |n| vec![n]);
    for nt in o.ranks(&[2]) {
        for &n in &sizes {
            rep.extend(check_tops_suite(
                n, nt, o.tau, o.nu, o.hbar, o.seed, o.samples, o.tol,
            )?);
        }
    }
    Ok(rep)
}

/// Runs `suite` and returns the sorted report.
pub fn run_suite(suite: Suite, o: &SuiteOptions) -> Result<IdentityReport> {
    let mut rep = match suite {
        Suite::Elliptic => elliptic_suite(o)?,
        Suite::RMatrix => rmatrix_suite(o)?,
        Suite::Lax => lax_suite(o)?,
        Suite::Quantum => quantum_suite(o)?,
        Suite::Tops => tops_suite(o)?,
        Suite::All => {
            let mut rep = IdentityReport::new("all");
            for s in [
                Suite::Elliptic,
                Suite::RMatrix,
                Suite::Lax,
                Suite::Quantum,
                Suite::Tops,
            ] {
                rep.extend(run_suite(s, o)?);
            }
            rep
        }
    };
    rep.suite = suite.to_string();
    if let Some(e) = o.expect {
        override_expect(&mut rep, e, o.tol);
    }
    Ok(env(rep, o, suite).sorted())
}
