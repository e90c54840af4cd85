//! Quantum R-matrices R^z(q), their q-derivatives and classical limits.
//!
//! Convention used throughout the Lax constructions: the spectral parameter
//! z sits in the superscript slot and the dynamical difference q in the
//! exponential and first Kronecker slot,
//! R^z(q) = Σ_a T_a ⊗ T_{-a} exp(2πi a2 q / n) φ(q, ω_a + z).

mod identities;
pub(crate) use identities::rel_mat;

pub use identities::{
    check_aybe, check_fourier, check_kzb_flatness, check_pauli_structure, check_qybe,
    check_unitarity_skew,
};

use crate::elliptic::{FunctionFamily, Modulus, DEFAULT_POLE_GUARD};
use crate::error::{Error, Result};
use crate::sampling::Sampler;
use crate::tensor::{dtau_omega, omega, permutation, CMat, TBasis};
use crate::C64;
use std::f64::consts::PI;

/// R^z(q) together with F = ∂_q R and F' = ∂_q² R.
#[derive(Clone, Debug)]
pub struct REval {
    pub value: CMat,
    pub d_q: CMat,
    pub d2_q: CMat,
}

#[derive(Clone, Debug)]
pub enum RMatrixFamily {
    /// Baxter-Belavin elliptic R-matrix of rank n.
    Belavin { basis: TBasis, modulus: Modulus },
    /// 1/z + n P / q.
    Yang { n: usize },
    /// Trigonometric XXZ R-matrix on C^2 ⊗ C^2.
    Xxz { pole_guard: f64 },
    /// φ(z, q) P: the permutation-operator kernel of the spin Lax pair.
    Exchange { n: usize, family: FunctionFamily },
}

fn pauli() -> [CMat; 4] {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::i();
    let s = [
        [[l, o], [o, l]],
        [[o, l], [l, o]],
        [[o, -i], [i, o]],
        [[l, o], [o, -l]],
    ];
    s.map(|m| CMat::from_fn(2, 2, |a, b| m[a][b]))
}

/// σ_k ⊗ σ_k, k = 0..3.
pub fn pauli_squares() -> [CMat; 4] {
    pauli().map(|s| s.kron(&s))
}

impl RMatrixFamily {
    pub fn belavin(n: usize, tau: C64) -> Result<Self> {
        Ok(RMatrixFamily::Belavin {
            basis: TBasis::new(n),
            modulus: Modulus::new(tau)?,
        })
    }

    pub fn yang(n: usize) -> Self {
        RMatrixFamily::Yang { n }
    }

    pub fn xxz() -> Self {
        RMatrixFamily::Xxz {
            pole_guard: DEFAULT_POLE_GUARD,
        }
    }

    pub fn exchange(n: usize, family: FunctionFamily) -> Self {
        RMatrixFamily::Exchange { n, family }
    }

    pub fn n(&self) -> usize {
        match self {
            RMatrixFamily::Belavin { basis, .. } => basis.n(),
            RMatrixFamily::Yang { n } | RMatrixFamily::Exchange { n, .. } => *n,
            RMatrixFamily::Xxz { .. } => 2,
        }
    }

    pub fn label(&self) -> String {
        match self {
            RMatrixFamily::Belavin { modulus, .. } => {
                format!("belavin n={} tau={}", self.n(), modulus.tau())
            }
            RMatrixFamily::Yang { n } => format!("yang n={n}"),
            RMatrixFamily::Xxz { .. } => "xxz".to_string(),
            RMatrixFamily::Exchange { n, family } => format!("exchange n={n} {}", family.name()),
        }
    }

    pub fn modulus(&self) -> Option<&Modulus> {
        match self {
            RMatrixFamily::Belavin { modulus, .. } => Some(modulus),
            RMatrixFamily::Exchange { family, .. } => family.modulus(),
            _ => None,
        }
    }

    /// A random point suited to the family's period structure.
    pub fn sample_point(&self, s: &mut Sampler) -> C64 {
        match self {
            RMatrixFamily::Belavin { modulus, .. } => s.cell_point(modulus.tau()),
            RMatrixFamily::Exchange {
                family: FunctionFamily::Elliptic(m),
                ..
            } => s.cell_point(m.tau()),
            RMatrixFamily::Xxz { .. } => s.complex(1.4, 0.6),
            _ => s.complex(1.0, 1.0),
        }
    }

    /// Distance from q to the nearest pole of R^z(q) in q.
    pub fn pole_distance(&self, q: C64) -> f64 {
        match self {
            RMatrixFamily::Belavin { modulus, .. } => modulus.lattice_distance(q),
            RMatrixFamily::Yang { .. } => q.norm(),
            RMatrixFamily::Xxz { .. } => (q - PI * (q.re / PI).round()).norm(),
            RMatrixFamily::Exchange { family, .. } => family.pole_distance(q),
        }
    }

    fn xxz_guard(pole_guard: f64, context: &'static str, x: C64) -> Result<()> {
        let d = (x - PI * (x.re / PI).round()).norm();
        if d < pole_guard {
            return Err(Error::PoleProximity {
                context,
                arg: format!("{x}"),
                distance: d,
                guard: pole_guard,
            });
        }
        Ok(())
    }

    pub fn r_eval(&self, z: C64, q: C64) -> Result<REval> {
        let n = self.n();
        let dim = n * n;
        match self {
            RMatrixFamily::Belavin { basis, modulus } => {
                let mut out = REval {
                    value: CMat::zeros(dim, dim),
                    d_q: CMat::zeros(dim, dim),
                    d2_q: CMat::zeros(dim, dim),
                };
                for (k, a) in basis.indices().into_iter().enumerate() {
                    let kk = C64::new(0.0, 2.0 * PI * a.1 as f64 / n as f64);
                    let e = (kk * q).exp();
                    let w = omega(n, a, modulus.tau()) + z;
                    let [phi, f, fp] = modulus.kronecker_jet(w, q)?;
                    let tt = basis.tt(k);
                    out.value.axpy(e * phi, tt);
                    out.d_q.axpy(e * (kk * phi + f), tt);
                    out.d2_q.axpy(e * (kk * kk * phi + 2.0 * kk * f + fp), tt);
                }
                Ok(out)
            }
            RMatrixFamily::Yang { n } => {
                let fam = FunctionFamily::rational();
                let z_inv = fam.e1(z)?;
                let q_inv = fam.e1(q)?;
                let p = permutation(*n) * C64::new(*n as f64, 0.0);
                let mut value = CMat::scalar(dim, z_inv);
                value.axpy(q_inv, &p);
                Ok(REval {
                    value,
                    d_q: &p * (-q_inv * q_inv),
                    d2_q: &p * (2.0 * q_inv * q_inv * q_inv),
                })
            }
            RMatrixFamily::Xxz { pole_guard } => {
                Self::xxz_guard(*pole_guard, "xxz", z)?;
                Self::xxz_guard(*pole_guard, "xxz", q)?;
                let cot = |x: C64| x.cos() / x.sin();
                let (sz, sq, cq) = (z.sin(), q.sin(), q.cos());
                let c0 = cot(z) + cot(q) + 1.0 / sz;
                let c3 = cot(z) + cot(q) - 1.0 / sz;
                let c1 = 1.0 / sq;
                let value = [c0, c1, c1, c3];
                let d0 = -1.0 / (sq * sq);
                let d1 = -cq / (sq * sq);
                let dd0 = 2.0 * cq / (sq * sq * sq);
                let dd1 = (1.0 + cq * cq) / (sq * sq * sq);
                let s = pauli_squares();
                let comb = |c: [C64; 4]| {
                    let mut m = CMat::zeros(4, 4);
                    for (ck, sk) in c.iter().zip(&s) {
                        m.axpy(*ck, sk);
                    }
                    m
                };
                Ok(REval {
                    value: comb(value),
                    d_q: comb([d0, d1, d1, d0]),
                    d2_q: comb([dd0, dd1, dd1, dd0]),
                })
            }
            RMatrixFamily::Exchange { n, family } => {
                let [phi, f, fp] = family.kronecker_jet(z, q)?;
                let p = permutation(*n);
                Ok(REval {
                    value: &p * phi,
                    d_q: &p * f,
                    d2_q: &p * fp,
                })
            }
        }
    }

    pub fn r_value(&self, z: C64, q: C64) -> Result<CMat> {
        Ok(self.r_eval(z, q)?.value)
    }

    /// F⁰(q) = ∂_q r(q), the derivative of the classical r-matrix.
    pub fn f0(&self, q: C64) -> Result<CMat> {
        Ok(self.f0_jet(q)?.0)
    }

    /// ∂_q F⁰(q).
    pub fn f0_prime(&self, q: C64) -> Result<CMat> {
        Ok(self.f0_jet(q)?.1)
    }

    pub fn f0_jet(&self, q: C64) -> Result<(CMat, CMat)> {
        let n = self.n();
        let dim = n * n;
        match self {
            RMatrixFamily::Belavin { basis, modulus } => {
                let mut f0 = CMat::zeros(dim, dim);
                let mut f0p = CMat::zeros(dim, dim);
                for (k, a) in basis.indices().into_iter().enumerate() {
                    let tt = basis.tt(k);
                    if k == 0 {
                        f0.axpy(-modulus.e2(q)?, tt);
                        f0p.axpy(-modulus.wp_prime(q)?, tt);
                        continue;
                    }
                    let kk = C64::new(0.0, 2.0 * PI * a.1 as f64 / n as f64);
                    let e = (kk * q).exp();
                    let [phi, f, fp] = modulus.kronecker_jet(omega(n, a, modulus.tau()), q)?;
                    f0.axpy(e * (kk * phi + f), tt);
                    f0p.axpy(e * (kk * kk * phi + 2.0 * kk * f + fp), tt);
                }
                Ok((f0, f0p))
            }
            RMatrixFamily::Yang { .. } | RMatrixFamily::Xxz { .. } => {
                // the z-dependence of these R-matrices is q-independent
                let ev = self.r_eval(C64::new(0.3, 0.2), q)?;
                Ok((ev.d_q, ev.d2_q))
            }
            RMatrixFamily::Exchange { n, family } => {
                let p = permutation(*n);
                Ok((&p * (-family.e2(q)?), &p * (-family.wp_prime(q)?)))
            }
        }
    }

    /// F⁰ from the explicit form with E1 shifts and ∂_τ ω:
    /// -E2(q) 1 + Σ_{γ≠0} φ_γ(q, ω_γ)(E1(q+ω_γ) - E1(q) + 2πi ∂_τ ω_γ) T_γ ⊗ T_{-γ}.
    pub fn f0_explicit(&self, q: C64) -> Result<CMat> {
        match self {
            RMatrixFamily::Belavin { basis, modulus } => {
                let n = basis.n();
                let mut out = CMat::scalar(n * n, -modulus.e2(q)?);
                let e1q = modulus.e1(q)?;
                for (k, g) in basis.indices().into_iter().enumerate().skip(1) {
                    let w = omega(n, g, modulus.tau());
                    let phase = C64::new(0.0, 2.0 * PI * g.1 as f64 * 1.0 / n as f64) * q;
                    let phi = phase.exp() * modulus.phi(q, w)?;
                    let shift =
                        modulus.e1(q + w)? - e1q + C64::new(0.0, 2.0 * PI * dtau_omega(n, g));
                    out.axpy(phi * shift, basis.tt(k));
                }
                Ok(out)
            }
            _ => self.f0(q),
        }
    }

    /// Classical r-matrix: R^η(q) = 1/η + r(q) + η m(q) + O(η²).
    pub fn r_classical(&self, q: C64) -> Result<CMat> {
        match self {
            RMatrixFamily::Belavin { basis, modulus } => {
                let n = basis.n();
                let mut out = CMat::scalar(n * n, modulus.e1(q)?);
                for (k, a) in basis.indices().into_iter().enumerate().skip(1) {
                    let e = (C64::new(0.0, 2.0 * PI * a.1 as f64 / n as f64) * q).exp();
                    out.axpy(e * modulus.phi(q, omega(n, a, modulus.tau()))?, basis.tt(k));
                }
                Ok(out)
            }
            RMatrixFamily::Yang { n } => Ok(permutation(*n) * (C64::new(*n as f64, 0.0) / q)),
            _ => Err(Error::InvalidConfig(format!(
                "{} has no expansion of the form 1/η + r + η m",
                self.label()
            ))),
        }
    }

    /// m(q) from the η-expansion: symmetric differences remove the even
    /// orders, then Richardson extrapolation in η². Estimates from
    /// (η, η/2) and (η/2, η/4) must agree to 1e-6.
    pub fn m_classical(&self, q: C64) -> Result<CMat> {
        if !matches!(
            self,
            RMatrixFamily::Belavin { .. } | RMatrixFamily::Yang { .. }
        ) {
            return Err(Error::InvalidConfig(format!(
                "{} has no classical m",
                self.label()
            )));
        }
        let dim = self.n() * self.n();
        let est = |eta: f64| -> Result<CMat> {
            let e = C64::new(eta, 0.0);
            let plus = self.r_value(e, q)?;
            let minus = self.r_value(-e, q)?;
            let mut odd = (&plus - &minus) * C64::new(0.5, 0.0);
            odd -= &CMat::scalar(dim, C64::new(1.0 / eta, 0.0));
            Ok(odd * C64::new(1.0 / eta, 0.0))
        };
        let (m1, m2, m3) = (est(1e-3)?, est(5e-4)?, est(2.5e-4)?);
        let third = C64::new(1.0 / 3.0, 0.0);
        let r1 = (&(&m2 * C64::new(4.0, 0.0)) - &m1) * third;
        let r2 = (&(&m3 * C64::new(4.0, 0.0)) - &m2) * third;
        let spread = (&r1 - &r2).max_abs();
        if spread > 1e-6 * r2.max_abs().max(1.0) {
            return Err(Error::Precision(format!(
                "m extraction not converged: estimates differ by {spread:.3e}"
            )));
        }
        Ok(r2)
    }

    /// Factor s with R_12(q) R_21(-q) = s (wp(s-slot) - wp(q)) and
    /// R F_21 - F R_21 = s wp'(q) for the family's wp.
    pub fn potential_scale(&self) -> f64 {
        match self {
            RMatrixFamily::Belavin { .. } | RMatrixFamily::Yang { .. } => {
                (self.n() * self.n()) as f64
            }
            RMatrixFamily::Xxz { .. } => 4.0,
            RMatrixFamily::Exchange { .. } => 1.0,
        }
    }

    /// The wp-like function entering unitarity: elliptic wp, 1/q², 1/sin² q
    /// or the exchange kernel's own family.
    pub fn wp(&self, q: C64) -> Result<C64> {
        match self {
            RMatrixFamily::Belavin { modulus, .. } => modulus.wp(q),
            RMatrixFamily::Yang { .. } => FunctionFamily::rational().wp(q),
            RMatrixFamily::Xxz { pole_guard } => {
                Self::xxz_guard(*pole_guard, "xxz wp", q)?;
                Ok(1.0 / q.sin().powi(2))
            }
            RMatrixFamily::Exchange { family, .. } => family.wp(q),
        }
    }

    pub fn wp_prime(&self, q: C64) -> Result<C64> {
        match self {
            RMatrixFamily::Belavin { modulus, .. } => modulus.wp_prime(q),
            RMatrixFamily::Yang { .. } => FunctionFamily::rational().wp_prime(q),
            RMatrixFamily::Xxz { pole_guard } => {
                Self::xxz_guard(*pole_guard, "xxz wp'", q)?;
                Ok(-2.0 * q.cos() / q.sin().powi(3))
            }
            RMatrixFamily::Exchange { family, .. } => family.wp_prime(q),
        }
    }

    /// Scalar c(z, q) with R^z_12(q) R^z_21(-q) = c · 1.
    pub fn unitarity_scalar(&self, z: C64, q: C64) -> Result<C64> {
        let n = self.n() as f64;
        match self {
            RMatrixFamily::Belavin { .. } | RMatrixFamily::Yang { .. } => {
                Ok(n * n * (self.wp(z * n)? - self.wp(q)?))
            }
            RMatrixFamily::Xxz { .. } => Ok(4.0 * (self.wp(z)? - self.wp(q)?)),
            RMatrixFamily::Exchange { .. } => Ok(self.wp(z)? - self.wp(q)?),
        }
    }
}

#[cfg(test)]
mod tests;
