//! Theta, Eisenstein and Weierstrass functions, the Kronecker function and
//! its rational/trigonometric degenerations.

mod fay;
mod theta;

pub use fay::check_fay_suite;

use crate::error::{Error, Result};
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const TAU_MIN: f64 = 0.05;
pub const DEFAULT_POLE_GUARD: f64 = 1e-6;

fn pole_err(context: &'static str, z: C64, distance: f64, guard: f64) -> Error {
    Error::PoleProximity {
        context,
        arg: format!("{z}"),
        distance,
        guard,
    }
}

/// Elliptic modulus with cached theta constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Modulus {
    tau: C64,
    pole_guard: f64,
    theta_prime0: C64,
    c_theta: C64,
}

/// Reduced argument data: z = z0 + m + n tau.
#[derive(Clone, Copy, Debug)]
struct Reduced {
    z0: C64,
    m: i64,
    n: i64,
}

impl Modulus {
    pub fn new(tau: C64) -> Result<Self> {
        Self::with_pole_guard(tau, DEFAULT_POLE_GUARD)
    }

    pub fn with_pole_guard(tau: C64, pole_guard: f64) -> Result<Self> {
        if !(tau.im > TAU_MIN) || !tau.re.is_finite() {
            return Err(Error::Precision(format!(
                "Im tau = {} is below tau_min = {TAU_MIN}",
                tau.im
            )));
        }
        let jet = theta::theta_jet(C64::new(0.0, 0.0), tau)?;
        Ok(Modulus {
            tau,
            pole_guard,
            theta_prime0: jet[1],
            c_theta: jet[3] / (3.0 * jet[1]),
        })
    }

    pub fn tau(&self) -> C64 {
        self.tau
    }

    pub fn pole_guard(&self) -> f64 {
        self.pole_guard
    }

    /// theta'(0)
    pub fn theta_prime0(&self) -> C64 {
        self.theta_prime0
    }

    /// theta'''(0) / (3 theta'(0)), the constant with wp = E2 + c_theta.
    pub fn c_theta(&self) -> C64 {
        self.c_theta
    }

    fn reduce(&self, z: C64) -> Reduced {
        let n = (z.im / self.tau.im).round();
        let z1 = z - self.tau * n;
        let m = z1.re.round();
        Reduced {
            z0: z1 - m,
            m: m as i64,
            n: n as i64,
        }
    }

    /// Distance from z to the lattice Z + tau Z.
    pub fn lattice_distance(&self, z: C64) -> f64 {
        let z0 = self.reduce(z).z0;
        let mut best = f64::INFINITY;
        for n in -1..=1 {
            for m in -1..=1 {
                best = best.min((z0 - self.tau * n as f64 - m as f64).norm());
            }
        }
        best
    }

    fn guard(&self, context: &'static str, z: C64) -> Result<()> {
        let d = self.lattice_distance(z);
        if d < self.pole_guard {
            Err(pole_err(context, z, d, self.pole_guard))
        } else {
            Ok(())
        }
    }

    pub fn theta(&self, z: C64) -> Result<C64> {
        let r = self.reduce(z);
        let th = theta::theta_jet(r.z0, self.tau)?[0];
        let sign = if (r.m + r.n).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        let n = r.n as f64;
        Ok(th * sign * (-C64::i() * PI * (self.tau * n * n + 2.0 * n * r.z0)).exp())
    }

    /// (E1, E2, wp', wp'') at z; all derived from log-derivatives of theta.
    fn log_jet(&self, context: &'static str, z: C64) -> Result<[C64; 4]> {
        self.guard(context, z)?;
        let r = self.reduce(z);
        let th = theta::theta_jet(r.z0, self.tau)?;
        let t1 = th[1] / th[0];
        let t2 = th[2] / th[0];
        let t3 = th[3] / th[0];
        let t4 = th[4] / th[0];
        let l2 = t2 - t1 * t1;
        let l3 = t3 - 3.0 * t1 * t2 + 2.0 * t1 * t1 * t1;
        let l4 = t4 - 4.0 * t1 * t3 - 3.0 * t2 * t2 + 12.0 * t1 * t1 * t2 - 6.0 * t1.powi(4);
        let e1 = t1 - 2.0 * PI * C64::i() * r.n as f64;
        Ok([e1, -l2, -l3, -l4])
    }

    pub fn e1(&self, z: C64) -> Result<C64> {
        Ok(self.log_jet("E1", z)?[0])
    }

    pub fn e2(&self, z: C64) -> Result<C64> {
        Ok(self.log_jet("E2", z)?[1])
    }

    pub fn wp(&self, z: C64) -> Result<C64> {
        Ok(self.log_jet("wp", z)?[1] + self.c_theta)
    }

    pub fn wp_prime(&self, z: C64) -> Result<C64> {
        Ok(self.log_jet("wp'", z)?[2])
    }

    pub fn wp_second(&self, z: C64) -> Result<C64> {
        Ok(self.log_jet("wp''", z)?[3])
    }

    pub fn phi(&self, z: C64, q: C64) -> Result<C64> {
        self.guard("phi", z)?;
        self.guard("phi", q)?;
        Ok(self.theta_prime0 * self.theta(z + q)? / (self.theta(z)? * self.theta(q)?))
    }

    /// Distance of z from the integers, or None when z sits near a lattice
    /// point with nonzero tau-component (where f is genuinely singular).
    fn near_integer(&self, z: C64) -> Option<C64> {
        let r = self.reduce(z);
        (r.n == 0 && r.z0.norm() < self.pole_guard).then_some(r.z0)
    }

    pub fn f(&self, z: C64, q: C64) -> Result<C64> {
        if let Some(h) = self.near_integer(z) {
            // f is regular at z = 0: f = -E2(q) + z (-E1 E2 - wp'/2) + O(z^2)
            let [e1, e2, wpp, _] = self.log_jet("f", q)?;
            return Ok(-e2 + h * (-e1 * e2 - 0.5 * wpp));
        }
        self.guard("f", z + q)?;
        Ok(self.phi(z, q)? * (self.e1(z + q)? - self.e1(q)?))
    }

    /// (phi, f, f') at one point, sharing the theta evaluations.
    pub fn kronecker_jet(&self, z: C64, q: C64) -> Result<[C64; 3]> {
        if self.near_integer(z).is_some() {
            return Ok([self.phi(z, q)?, self.f(z, q)?, self.f_prime(z, q)?]);
        }
        let phi = self.phi(z, q)?;
        let [a1, a2, _, _] = self.log_jet("phi", z + q)?;
        let [b1, b2, _, _] = self.log_jet("phi", q)?;
        let d1 = a1 - b1;
        Ok([phi, phi * d1, phi * (d1 * d1 + b2 - a2)])
    }

    pub fn f_prime(&self, z: C64, q: C64) -> Result<C64> {
        if let Some(h) = self.near_integer(z) {
            let [e1, e2, wpp, wp2] = self.log_jet("f'", q)?;
            // d/dq of the expansion above, with E1' = -E2 and E2' = wp'
            return Ok(-wpp + h * (e2 * e2 - e1 * wpp - 0.5 * wp2));
        }
        let phi = self.phi(z, q)?;
        let [a1, a2, _, _] = self.log_jet("f'", z + q)?;
        let [b1, b2, _, _] = self.log_jet("f'", q)?;
        let d1 = a1 - b1;
        Ok(phi * d1 * d1 + phi * (b2 - a2))
    }
}

/// Rational, trigonometric (hyperbolic) or elliptic kernel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum FunctionFamily {
    Rational { pole_guard: f64 },
    Trigonometric { pole_guard: f64 },
    Elliptic(Modulus),
}

impl FunctionFamily {
    pub fn rational() -> Self {
        FunctionFamily::Rational {
            pole_guard: DEFAULT_POLE_GUARD,
        }
    }

    pub fn trigonometric() -> Self {
        FunctionFamily::Trigonometric {
            pole_guard: DEFAULT_POLE_GUARD,
        }
    }

    pub fn elliptic(tau: C64) -> Result<Self> {
        Ok(FunctionFamily::Elliptic(Modulus::new(tau)?))
    }

    pub fn name(&self) -> &'static str {
        match self {
            FunctionFamily::Rational { .. } => "rational",
            FunctionFamily::Trigonometric { .. } => "trigonometric",
            FunctionFamily::Elliptic(_) => "elliptic",
        }
    }

    pub fn modulus(&self) -> Option<&Modulus> {
        match self {
            FunctionFamily::Elliptic(m) => Some(m),
            _ => None,
        }
    }

    pub fn pole_distance(&self, z: C64) -> f64 {
        match self {
            FunctionFamily::Rational { .. } => z.norm(),
            FunctionFamily::Trigonometric { .. } => {
                (z - C64::new(0.0, PI * (z.im / PI).round())).norm()
            }
            FunctionFamily::Elliptic(m) => m.lattice_distance(z),
        }
    }

    fn guard(&self, context: &'static str, z: C64) -> Result<()> {
        let eps = match self {
            FunctionFamily::Rational { pole_guard }
            | FunctionFamily::Trigonometric { pole_guard } => *pole_guard,
            FunctionFamily::Elliptic(m) => m.pole_guard,
        };
        let d = self.pole_distance(z);
        if d < eps {
            Err(pole_err(context, z, d, eps))
        } else {
            Ok(())
        }
    }

    pub fn phi(&self, z: C64, q: C64) -> Result<C64> {
        match self {
            FunctionFamily::Elliptic(m) => m.phi(z, q),
            _ => {
                self.guard("phi", z)?;
                self.guard("phi", q)?;
                Ok(self.e1_unchecked(z) + self.e1_unchecked(q))
            }
        }
    }

    pub fn f(&self, z: C64, q: C64) -> Result<C64> {
        match self {
            FunctionFamily::Elliptic(m) => m.f(z, q),
            _ => {
                self.guard("f", q)?;
                Ok(-self.e2_unchecked(q))
            }
        }
    }

    pub fn kronecker_jet(&self, z: C64, q: C64) -> Result<[C64; 3]> {
        match self {
            FunctionFamily::Elliptic(m) => m.kronecker_jet(z, q),
            _ => Ok([self.phi(z, q)?, self.f(z, q)?, self.f_prime(z, q)?]),
        }
    }

    pub fn f_prime(&self, z: C64, q: C64) -> Result<C64> {
        match self {
            FunctionFamily::Elliptic(m) => m.f_prime(z, q),
            _ => {
                self.guard("f'", q)?;
                Ok(-self.wp_prime_unchecked(q))
            }
        }
    }

    fn e1_unchecked(&self, z: C64) -> C64 {
        match self {
            FunctionFamily::Rational { .. } => z.inv(),
            _ => z.cosh() / z.sinh(),
        }
    }

    fn e2_unchecked(&self, z: C64) -> C64 {
        match self {
            FunctionFamily::Rational { .. } => (z * z).inv(),
            _ => z.sinh().powi(2).inv(),
        }
    }

    fn wp_prime_unchecked(&self, z: C64) -> C64 {
        match self {
            FunctionFamily::Rational { .. } => -2.0 / (z * z * z),
            _ => -2.0 * z.cosh() / z.sinh().powi(3),
        }
    }

    pub fn e1(&self, z: C64) -> Result<C64> {
        match self {
            FunctionFamily::Elliptic(m) => m.e1(z),
            _ => {
                self.guard("E1", z)?;
                Ok(self.e1_unchecked(z))
            }
        }
    }

    pub fn e2(&self, z: C64) -> Result<C64> {
        match self {
            FunctionFamily::Elliptic(m) => m.e2(z),
            _ => {
                self.guard("E2", z)?;
                Ok(self.e2_unchecked(z))
            }
        }
    }

    /// In the degenerate families wp coincides with E2.
    pub fn wp(&self, z: C64) -> Result<C64> {
        match self {
            FunctionFamily::Elliptic(m) => m.wp(z),
            _ => self.e2(z),
        }
    }

    pub fn wp_prime(&self, z: C64) -> Result<C64> {
        match self {
            FunctionFamily::Elliptic(m) => m.wp_prime(z),
            _ => {
                self.guard("wp'", z)?;
                Ok(self.wp_prime_unchecked(z))
            }
        }
    }
}
