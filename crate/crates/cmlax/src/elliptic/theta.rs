//! Odd theta series and its term-wise derivatives.

use crate::error::{Error, Result};
use crate::C64;
use std::f64::consts::PI;

const REL_CUTOFF: f64 = 1e-18;
const MAX_TERMS: i64 = 4000;

/// Derivatives 0..=4 of the raw series
/// theta(z) = sum_k exp(pi i tau (k+1/2)^2 + 2 pi i (z+1/2)(k+1/2))
/// at an already reduced argument.
pub(crate) fn theta_jet(z: C64, tau: C64) -> Result<[C64; 5]> {
    let i = C64::i();
    let mut out = [C64::new(0.0, 0.0); 5];
    let mut largest = 0.0f64;
    let add = |k: i64, out: &mut [C64; 5]| -> f64 {
        let a = k as f64 + 0.5;
        let e = (i * PI * tau * a * a + 2.0 * PI * i * (z + 0.5) * a).exp();
        let w = 2.0 * PI * a;
        let mut fac = C64::new(1.0, 0.0);
        for slot in out.iter_mut() {
            *slot += e * fac;
            fac *= i * w;
        }
        e.norm() * (1.0 + w.abs()).powi(4)
    };
    for dir in [1i64, -1] {
        let mut k = if dir == 1 { 0 } else { -1 };
        let mut steps = 0;
        loop {
            let mag = add(k, &mut out);
            largest = largest.max(mag);
            // terms only decay once past the Gaussian peak, which sits in k in [-1, 0]
            if steps > 1 && mag < REL_CUTOFF * largest {
                break;
            }
            k += dir;
            steps += 1;
            if steps > MAX_TERMS {
                return Err(Error::Precision(format!(
                    "theta series did not converge at z={z}, tau={tau}"
                )));
            }
        }
    }
    Ok(out)
}
