use super::{ModelConfig, RootSystem};
use crate::error::Result;
use crate::C64;

/// coef · E_{row,col} ⊗ R^z_{sites}(arg · q) in L, with F in place of R in M.
#[derive(Clone, Debug, PartialEq)]
pub struct LaxEntry {
    pub row: usize,
    pub col: usize,
    pub coef: C64,
    pub sites: (usize, usize),
    pub arg: Vec<i32>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DiagTerm {
    /// coef · F⁰_{sites}(arg · q)
    F0 {
        coef: C64,
        sites: (usize, usize),
        arg: Vec<i32>,
    },
    /// coef · ℘(arg · q) · 1
    Wp { coef: C64, arg: Vec<i32> },
}

/// sign · p_particle on the diagonal block `row` of L.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Momentum {
    pub row: usize,
    pub particle: usize,
    pub sign: f64,
}

/// coef · ℘(arg · q) in the Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialTerm {
    pub coef: C64,
    pub arg: Vec<i32>,
    pub kind: &'static str,
}

/// Everything needed to evaluate a Lax pair: M_ii = Σ d[i] + ν Σ f0.
#[derive(Clone, Debug)]
pub struct LaxStructure {
    pub aux: usize,
    pub sites: usize,
    pub particles: usize,
    pub nu: C64,
    pub entries: Vec<LaxEntry>,
    pub momenta: Vec<Momentum>,
    pub d: Vec<Vec<DiagTerm>>,
    pub f0: Vec<DiagTerm>,
    pub potential: Vec<PotentialTerm>,
}

pub(crate) fn dot(arg: &[i32], q: &[C64]) -> C64 {
    arg.iter().zip(q).map(|(&k, x)| x * k as f64).sum()
}

fn unit(n: usize, a: usize, k: i32) -> Vec<i32> {
    let mut v = vec![0; n];
    v[a] = k;
    v
}

fn combo(n: usize, a: usize, ka: i32, b: usize, kb: i32) -> Vec<i32> {
    let mut v = vec![0; n];
    v[a] += ka;
    v[b] += kb;
    v
}

/// Diagonal terms built from the entries: D_i = -Σ_j (c_ij c_ji / ν) F⁰_ij,
/// 𝓕⁰ = ½ Σ (c_ij c_ji / ν²) F⁰_ij.
fn reduction_diagonal(s: &mut LaxStructure) {
    let nu = s.nu;
    let coef = |i: usize, j: usize| {
        s.entries
            .iter()
            .find(|e| e.row == i && e.col == j)
            .map(|e| e.coef)
            .unwrap_or_default()
    };
    let mut d = vec![Vec::new(); s.aux];
    let mut f0 = Vec::new();
    for e in &s.entries {
        let w = e.coef * coef(e.col, e.row) / nu;
        if w.norm() == 0.0 {
            continue;
        }
        d[e.row].push(DiagTerm::F0 {
            coef: -w,
            sites: e.sites,
            arg: e.arg.clone(),
        });
        f0.push(DiagTerm::F0 {
            coef: w / nu * 0.5,
            sites: e.sites,
            arg: e.arg.clone(),
        });
    }
    s.d = d;
    s.f0 = f0;
}

fn full_sites(cfg: &ModelConfig, extra: bool) -> LaxStructure {
    let n = cfg.particles;
    let k = 2 * n + usize::from(extra);
    // signed particle content of each aux index
    let u = |i: usize| -> Vec<i32> {
        if i < n {
            unit(n, i, 1)
        } else if i < 2 * n {
            unit(n, i - n, -1)
        } else {
            vec![0; n]
        }
    };
    let mut entries = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let coef = if i == 2 * n || j == 2 * n {
                cfg.g
            } else if (i < n && j == i + n) || (i >= n && j + n == i) {
                cfg.mu
            } else {
                cfg.nu
            };
            let arg: Vec<i32> = u(i).iter().zip(u(j)).map(|(a, b)| a - b).collect();
            entries.push(LaxEntry {
                row: i,
                col: j,
                coef,
                sites: (i, j),
                arg,
            });
        }
    }
    let mut s = LaxStructure {
        aux: k,
        sites: k,
        particles: n,
        nu: cfg.nu,
        entries,
        momenta: signed_momenta(n),
        d: Vec::new(),
        f0: Vec::new(),
        potential: Vec::new(),
    };
    reduction_diagonal(&mut s);
    s
}

fn signed_momenta(n: usize) -> Vec<Momentum> {
    (0..n)
        .flat_map(|a| {
            [
                Momentum {
                    row: a,
                    particle: a,
                    sign: 1.0,
                },
                Momentum {
                    row: a + n,
                    particle: a,
                    sign: -1.0,
                },
            ]
        })
        .collect()
}

fn type_a(cfg: &ModelConfig) -> LaxStructure {
    let n = cfg.particles;
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                entries.push(LaxEntry {
                    row: i,
                    col: j,
                    coef: cfg.nu,
                    sites: (i, j),
                    arg: combo(n, i, 1, j, -1),
                });
            }
        }
    }
    let mut s = LaxStructure {
        aux: n,
        sites: n,
        particles: n,
        nu: cfg.nu,
        entries,
        momenta: (0..n)
            .map(|a| Momentum {
                row: a,
                particle: a,
                sign: 1.0,
            })
            .collect(),
        d: Vec::new(),
        f0: Vec::new(),
        potential: Vec::new(),
    };
    reduction_diagonal(&mut s);
    s
}

/// D (and B with the extra site N) on half sites, with the diagonal as printed.
fn half_sites(cfg: &ModelConfig, extra: bool) -> LaxStructure {
    let n = cfg.particles;
    let nu = cfg.nu;
    let k = 2 * n + usize::from(extra);
    let mut entries = Vec::new();
    let mut push = |row, col, coef, sites, arg| {
        entries.push(LaxEntry {
            row,
            col,
            coef,
            sites,
            arg,
        });
    };
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            push(a, b, nu, (a, b), combo(n, a, 1, b, -1));
            push(a + n, b + n, nu, (a, b), combo(n, a, -1, b, 1));
            push(a, b + n, nu, (a, b), combo(n, a, 1, b, 1));
            push(a + n, b, nu, (a, b), combo(n, a, -1, b, -1));
        }
    }
    if extra {
        for a in 0..n {
            push(a, 2 * n, cfg.g, (a, n), unit(n, a, 1));
            push(a + n, 2 * n, cfg.g, (a, n), unit(n, a, -1));
            push(2 * n, a + n, cfg.g, (n, a), unit(n, a, 1));
            push(2 * n, a, cfg.g, (n, a), unit(n, a, -1));
        }
    }
    let f0 = |coef: C64, sites, arg| DiagTerm::F0 { coef, sites, arg };
    let mut da = vec![Vec::new(); n];
    let mut big = Vec::new();
    for a in 0..n {
        for c in 0..n {
            if c == a {
                continue;
            }
            da[a].push(f0(-nu, (a, c), combo(n, a, 1, c, -1)));
            da[a].push(f0(-nu, (a, c), combo(n, a, 1, c, 1)));
            big.push(f0(C64::new(0.5, 0.0), (a, c), combo(n, a, 1, c, -1)));
            big.push(f0(C64::new(0.5, 0.0), (a, c), combo(n, a, 1, c, 1)));
        }
        if extra {
            da[a].push(f0(-nu * 2.0, (a, n), unit(n, a, 1)));
            big.push(f0(C64::new(2.0, 0.0), (a, n), unit(n, a, 1)));
        }
    }
    let mut d = da.clone();
    d.extend(da);
    if extra {
        d.push(
            (0..n)
                .map(|c| f0(-nu * 2.0, (c, n), unit(n, c, 1)))
                .collect(),
        );
    }
    LaxStructure {
        aux: k,
        sites: n + usize::from(extra),
        particles: n,
        nu,
        entries,
        momenta: signed_momenta(n),
        d,
        f0: big,
        potential: Vec::new(),
    }
}

/// Scalar (2N+1)×(2N+1) pair with ℘-valued diagonal.
fn scalar_dp(cfg: &ModelConfig) -> LaxStructure {
    let n = cfg.particles;
    let (nu, mu, g) = (cfg.nu, cfg.mu, cfg.g);
    let mut s = full_sites(cfg, true);
    let wp = |coef: C64, arg| DiagTerm::Wp { coef, arg };
    let mut d = vec![Vec::new(); s.aux];
    for a in 0..n {
        let mut t = vec![wp(g * g / nu, unit(n, a, 1)), wp(mu, unit(n, a, 2))];
        for b in 0..n {
            if b != a {
                t.push(wp(nu, combo(n, a, 1, b, -1)));
                t.push(wp(nu, combo(n, a, 1, b, 1)));
            }
        }
        d[a] = t.clone();
        d[a + n] = t;
    }
    d[2 * n] = (0..n).map(|c| wp(nu * 2.0, unit(n, c, 1))).collect();
    s.d = d;
    s.f0 = Vec::new();
    s
}

fn potential(cfg: &ModelConfig) -> Vec<PotentialTerm> {
    let n = cfg.particles;
    let s = cfg.family.potential_scale();
    let (nu2, mu2, g2) = (cfg.nu * cfg.nu * s, cfg.mu * cfg.mu * s, cfg.g * cfg.g * s);
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            out.push(PotentialTerm {
                coef: -nu2,
                arg: combo(n, a, 1, b, -1),
                kind: "wp(q_a-q_b)",
            });
            if cfg.root_system != RootSystem::A {
                out.push(PotentialTerm {
                    coef: -nu2,
                    arg: combo(n, a, 1, b, 1),
                    kind: "wp(q_a+q_b)",
                });
            }
        }
    }
    if cfg.root_system != RootSystem::A {
        for a in 0..n {
            if mu2.norm() != 0.0 {
                out.push(PotentialTerm {
                    coef: -mu2 * 0.5,
                    arg: unit(n, a, 2),
                    kind: "wp(2q_a)",
                });
            }
            if g2.norm() != 0.0 {
                out.push(PotentialTerm {
                    coef: -g2,
                    arg: unit(n, a, 1),
                    kind: "wp(q_a)",
                });
            }
        }
    }
    out
}

/// The block description of the Lax pair for `cfg` (validated first).
pub fn structure(cfg: &ModelConfig) -> Result<LaxStructure> {
    cfg.validate()?;
    let mut s = match cfg.root_system {
        RootSystem::A => type_a(cfg),
        RootSystem::C => full_sites(cfg, false),
        RootSystem::BC => full_sites(cfg, true),
        RootSystem::D => half_sites(cfg, false),
        RootSystem::B => half_sites(cfg, true),
        RootSystem::ScalarDP => scalar_dp(cfg),
    };
    if cfg.subtract_d0 {
        let n = cfg.particles;
        for d in s.d.iter_mut() {
            for c in 0..n {
                d.push(DiagTerm::Wp {
                    coef: -cfg.nu * 2.0,
                    arg: unit(n, c, 1),
                });
            }
        }
    }
    s.potential = potential(cfg);
    Ok(s)
}
