//! R-matrix valued Lax pairs of Calogero-Moser type for the root systems
//! A, B, C, D, BC and the scalar (2N+1)×(2N+1) pair for BC_N.
//!
//! Every pair is described by a [`LaxStructure`]: a list of off-diagonal
//! entries c E_ij ⊗ R^z_ab(v·q), the momentum pattern on the diagonal, the
//! diagonal terms of M and the potential. Evaluation, Hamiltonians and the
//! Lax residual are generic over that description.

mod checks;
pub(crate) mod eval;
pub(crate) mod structure;
#[cfg(test)]
mod tests;

pub use checks::{check_block_identity, check_lax_suite, check_rank_one_reduction, random_state};
pub use eval::{
    build_l, build_lax, build_m, describe_hamiltonian, eom, hamiltonian, lax_defect, lax_residual,
    LaxPairEval,
};
pub use structure::{structure, DiagTerm, LaxEntry, LaxStructure, Momentum, PotentialTerm};

use crate::error::{Error, Result};
use crate::rmatrix::RMatrixFamily;
use crate::C64;
use serde::Serialize;
use std::fmt;

/// States closer than this to a pole of any argument are rejected.
pub const STATE_GUARD: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RootSystem {
    A,
    B,
    C,
    D,
    BC,
    ScalarDP,
}

impl RootSystem {
    pub const ALL: [RootSystem; 6] = [
        RootSystem::A,
        RootSystem::B,
        RootSystem::C,
        RootSystem::D,
        RootSystem::BC,
        RootSystem::ScalarDP,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(RootSystem::A),
            "b" => Ok(RootSystem::B),
            "c" => Ok(RootSystem::C),
            "d" => Ok(RootSystem::D),
            "bc" => Ok(RootSystem::BC),
            "scalardp" | "dp" => Ok(RootSystem::ScalarDP),
            _ => Err(Error::InvalidConfig(format!("unknown root system '{s}'"))),
        }
    }
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RootSystem::A => "A",
            RootSystem::B => "B",
            RootSystem::C => "C",
            RootSystem::D => "D",
            RootSystem::BC => "BC",
            RootSystem::ScalarDP => "ScalarDP",
        };
        f.write_str(s)
    }
}

/// How particles are assigned to quantum spaces: FullSites gives q_a and
/// -q_a separate spaces (a and a+N), HalfSites one space per particle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Scheme {
    FullSites,
    HalfSites,
}

impl Scheme {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "full" | "fullsites" => Ok(Scheme::FullSites),
            "half" | "halfsites" => Ok(Scheme::HalfSites),
            _ => Err(Error::InvalidConfig(format!("unknown site scheme '{s}'"))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::FullSites => "FullSites",
            Scheme::HalfSites => "HalfSites",
        })
    }
}

/// Allowed R-matrix ranks and coupling constraints for one root system.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Admissibility {
    pub root_system: RootSystem,
    pub scheme: Option<Scheme>,
    /// None: any rank.
    pub rank: Option<usize>,
    pub sites: &'static str,
    pub mu: &'static str,
    pub g: &'static str,
}

pub fn admissibility_table() -> Vec<Admissibility> {
    use RootSystem::*;
    let row = |root_system, scheme, rank, sites, mu, g| Admissibility {
        root_system,
        scheme,
        rank,
        sites,
        mu,
        g,
    };
    vec![
        row(A, None, None, "N", "-", "-"),
        row(B, Some(Scheme::HalfSites), Some(2), "N+1", "0", "±√2ν"),
        row(C, Some(Scheme::FullSites), None, "2N", "ν", "0"),
        row(D, Some(Scheme::HalfSites), Some(2), "N", "0", "0"),
        row(BC, Some(Scheme::FullSites), None, "2N+1", "ν", "±ν"),
        row(ScalarDP, None, Some(1), "-", "any", "g(g²-2ν²+νμ)=0"),
    ]
}

pub fn lookup(root: RootSystem, scheme: Scheme) -> Option<Admissibility> {
    admissibility_table()
        .into_iter()
        .find(|r| r.root_system == root && r.scheme.is_none_or(|s| s == scheme))
}

/// Plain-text rendering of the admissibility table.
pub fn admissibility_text() -> String {
    let mut out = format!(
        "{:<9} {:<10} {:<6} {:<6} {:<6} {}\n",
        "system", "scheme", "rank", "sites", "mu", "g"
    );
    for r in admissibility_table() {
        out += &format!(
            "{:<9} {:<10} {:<6} {:<6} {:<6} {}\n",
            r.root_system.to_string(),
            r.scheme.map_or("any".to_string(), |s| s.to_string()),
            r.rank.map_or("any".to_string(), |n| n.to_string()),
            r.sites,
            r.mu,
            r.g
        );
    }
    out
}

#[derive(Clone, Debug)]
pub struct ModelConfig {
    pub root_system: RootSystem,
    pub particles: usize,
    pub scheme: Scheme,
    pub nu: C64,
    pub mu: C64,
    pub g: C64,
    pub family: RMatrixFamily,
    /// Build even if the couplings or rank violate the admissibility table.
    pub force: bool,
    /// Subtract d₀ · 1 from M.
    pub subtract_d0: bool,
}

fn close(a: C64, b: C64) -> bool {
    (a - b).norm() <= 1e-10 * a.norm().max(b.norm()).max(1.0)
}

impl ModelConfig {
    /// A config with the admissible default couplings for `root`
    /// (g taken with the + sign).
    pub fn new(root: RootSystem, particles: usize, family: RMatrixFamily, nu: C64) -> Self {
        let zero = C64::new(0.0, 0.0);
        let (scheme, mu, g) = match root {
            RootSystem::A => (Scheme::FullSites, zero, zero),
            RootSystem::B => (Scheme::HalfSites, zero, nu * 2f64.sqrt()),
            RootSystem::C => (Scheme::FullSites, nu, zero),
            RootSystem::D => (Scheme::HalfSites, zero, zero),
            RootSystem::BC | RootSystem::ScalarDP => (Scheme::FullSites, nu, nu),
        };
        ModelConfig {
            root_system: root,
            particles,
            scheme,
            nu,
            mu,
            g,
            family,
            force: false,
            subtract_d0: false,
        }
    }

    pub fn with_couplings(mut self, mu: C64, g: C64) -> Self {
        self.mu = mu;
        self.g = g;
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn forced(mut self) -> Self {
        self.force = true;
        self
    }

    pub fn with_d0_subtraction(mut self) -> Self {
        self.subtract_d0 = true;
        self
    }

    pub fn rank(&self) -> usize {
        self.family.n()
    }

    pub fn aux_dim(&self) -> usize {
        let n = self.particles;
        match self.root_system {
            RootSystem::A => n,
            RootSystem::C | RootSystem::D => 2 * n,
            RootSystem::B | RootSystem::BC | RootSystem::ScalarDP => 2 * n + 1,
        }
    }

    pub fn num_sites(&self) -> usize {
        let n = self.particles;
        match self.root_system {
            RootSystem::A | RootSystem::D => n,
            RootSystem::B => n + 1,
            RootSystem::C => 2 * n,
            RootSystem::BC | RootSystem::ScalarDP => 2 * n + 1,
        }
    }

    pub fn label(&self) -> String {
        format!(
            "{} N={} {} {}",
            self.root_system,
            self.particles,
            self.scheme,
            self.family.label()
        )
    }

    /// True when the config satisfies the admissibility table.
    pub fn is_admissible(&self) -> bool {
        self.coupling_violation().is_none()
    }

    fn inadmissible(&self, reason: impl Into<String>) -> Error {
        Error::Inadmissible {
            system: self.root_system.to_string(),
            reason: reason.into(),
        }
    }

    fn coupling_violation(&self) -> Option<String> {
        let (nu, mu, g) = (self.nu, self.mu, self.g);
        let zero = C64::new(0.0, 0.0);
        let rank = self.rank();
        match self.root_system {
            RootSystem::A => None,
            RootSystem::D => {
                if rank != 2 {
                    Some(format!("rank {rank}, requires 2"))
                } else if !close(g, zero) {
                    Some("g must be 0".into())
                } else {
                    None
                }
            }
            RootSystem::B => {
                let s = nu * 2f64.sqrt();
                if rank != 2 {
                    Some(format!("rank {rank}, requires 2"))
                } else if !(close(g, s) || close(g, -s)) {
                    Some("g must be ±√2ν".into())
                } else {
                    None
                }
            }
            RootSystem::C => {
                if !close(g, zero) {
                    Some("g must be 0".into())
                } else if !close(mu, nu) {
                    Some("μ must equal ν".into())
                } else {
                    None
                }
            }
            RootSystem::BC => {
                if !close(mu, nu) {
                    Some("μ must equal ν".into())
                } else if !(close(g, nu) || close(g, -nu)) {
                    Some("g must be ±ν".into())
                } else {
                    None
                }
            }
            RootSystem::ScalarDP => {
                let c = g * (g * g - nu * nu * 2.0 + nu * mu);
                if c.norm() > 1e-10 * nu.norm().powi(3).max(1.0) {
                    Some("g(g²-2ν²+νμ) must vanish".into())
                } else {
                    None
                }
            }
        }
    }

    /// Checks the structural requirements (always) and the coupling and rank
    /// constraints (unless forced).
    pub fn validate(&self) -> Result<()> {
        if self.particles == 0 {
            return Err(Error::InvalidConfig(
                "at least one particle is required".into(),
            ));
        }
        if self.root_system == RootSystem::A && self.particles < 2 {
            return Err(Error::InvalidConfig(
                "the A system needs at least two particles".into(),
            ));
        }
        if self.nu.norm() == 0.0 {
            return Err(Error::InvalidConfig("ν must be nonzero".into()));
        }
        match (self.root_system, self.scheme) {
            (RootSystem::B | RootSystem::D, Scheme::FullSites) => {
                return Err(self.inadmissible("HalfSites only"));
            }
            (RootSystem::C | RootSystem::BC, Scheme::HalfSites) => {
                return Err(self.inadmissible("FullSites only"));
            }
            _ => {}
        }
        if matches!(self.root_system, RootSystem::B | RootSystem::D)
            && !close(self.mu, C64::new(0.0, 0.0))
        {
            return Err(self.inadmissible("μ must be 0: half sites carry no q_a+q_a entries"));
        }
        if self.root_system == RootSystem::ScalarDP && self.rank() != 1 {
            return Err(self.inadmissible(format!("rank {}, requires 1", self.rank())));
        }
        if self.force {
            return Ok(());
        }
        match self.coupling_violation() {
            Some(r) => Err(self.inadmissible(r)),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhasePoint {
    pub q: Vec<C64>,
    pub p: Vec<C64>,
}

impl PhasePoint {
    pub fn new(q: Vec<C64>, p: Vec<C64>) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} positions, {} momenta",
                q.len(),
                p.len()
            )));
        }
        Ok(PhasePoint { q, p })
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }
}
