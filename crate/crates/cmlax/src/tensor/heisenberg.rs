//! Finite Heisenberg group basis T_a = exp(pi i a1 a2 / n) Q^a1 Λ^a2 of Mat_n.

use super::CMat;
use crate::C64;
use std::f64::consts::PI;

pub type Index2 = (i64, i64);

/// T-basis of Mat_n with precomputed T_a ⊗ T_{-a}.
#[derive(Clone, Debug)]
pub struct TBasis {
    n: usize,
    tt: Vec<CMat>,
}

impl TBasis {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let tt = indices(n)
            .into_iter()
            .map(|a| t(n, a).kron(&t(n, neg(a))))
            .collect();
        TBasis { n, tt }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> Vec<Index2> {
        indices(self.n)
    }

    pub fn t(&self, a: Index2) -> CMat {
        t(self.n, a)
    }

    /// T_a ⊗ T_{-a} for a = indices()[k].
    pub fn tt(&self, k: usize) -> &CMat {
        &self.tt[k]
    }
}

/// Representatives a in {0..n-1}^2, ordered with a = (0,0) first.
pub fn indices(n: usize) -> Vec<Index2> {
    let n = n as i64;
    (0..n)
        .flat_map(|a1| (0..n).map(move |a2| (a1, a2)))
        .collect()
}

pub fn neg(a: Index2) -> Index2 {
    (-a.0, -a.1)
}

/// T_a for any integer pair (negative powers through Q^-1 and Λ^-1).
pub fn t(n: usize, a: Index2) -> CMat {
    let nn = n as i64;
    let pref = C64::new(0.0, PI * (a.0 * a.1) as f64 / n as f64).exp();
    let mut m = CMat::zeros(n, n);
    for k in 0..nn {
        // (Q^a1 Λ^a2)_{k, k+a2} = w^{k a1}
        let col = (k + a.1).rem_euclid(nn) as usize;
        let phase = C64::new(0.0, 2.0 * PI * ((k * a.0).rem_euclid(nn)) as f64 / n as f64).exp();
        m[(k as usize, col)] = pref * phase;
    }
    m
}

/// κ_{a,b} = exp(pi i (b1 a2 - b2 a1) / n), with T_a T_b = κ_{a,b} T_{a+b}.
pub fn kappa(n: usize, a: Index2, b: Index2) -> C64 {
    C64::new(0.0, PI * (b.0 * a.1 - b.1 * a.0) as f64 / n as f64).exp()
}

/// ω_a = (a1 + a2 τ) / n
pub fn omega(n: usize, a: Index2, tau: C64) -> C64 {
    (tau * a.1 as f64 + a.0 as f64) / n as f64
}

/// ∂_τ ω_a = a2 / n
pub fn dtau_omega(n: usize, a: Index2) -> f64 {
    a.1 as f64 / n as f64
}

/// Permutation from the standard basis: Σ E_ij ⊗ E_ji.
pub fn permutation(n: usize) -> CMat {
    super::swap(n)
}

/// Permutation from the T-basis: (1/n) Σ_a T_a ⊗ T_{-a}.
pub fn permutation_via_t(n: usize) -> CMat {
    let mut p = CMat::zeros(n * n, n * n);
    for a in indices(n) {
        p.axpy(C64::new(1.0 / n as f64, 0.0), &t(n, a).kron(&t(n, neg(a))));
    }
    p
}
