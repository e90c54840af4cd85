use super::FunctionFamily;
use crate::error::Result;
use crate::report::{relative, Expect, IdentityEntry, IdentityReport};
use crate::sampling::{sweep, Sampler};
use crate::C64;

fn point(fam: &FunctionFamily, s: &mut Sampler) -> C64 {
    match fam {
        FunctionFamily::Elliptic(m) => s.cell_point(m.tau()),
        _ => s.complex(1.0, 1.0),
    }
}

fn rel(lhs: C64, rhs: C64, terms: &[C64]) -> f64 {
    let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    relative((lhs - rhs).norm(), scale)
}

/// One sample of every Fay-type identity; returns residuals in the order of
/// `IDENTITIES`.
fn fay_sample(fam: &FunctionFamily, s: &mut Sampler) -> Result<Vec<f64>> {
    let (z, w, q, u) = (point(fam, s), point(fam, s), point(fam, s), point(fam, s));
    let mut out = Vec::with_capacity(IDENTITIES.len());

    let lhs = fam.phi(z, q)? * fam.phi(w, u)?;
    let t1 = fam.phi(z - w, q)? * fam.phi(w, q + u)?;
    let t2 = fam.phi(w - z, u)? * fam.phi(z, q + u)?;
    out.push(rel(lhs, t1 + t2, &[lhs, t1, t2]));

    let lhs = fam.phi(z, q)? * fam.phi(z, -q)?;
    let (wz, wq) = (fam.wp(z)?, fam.wp(q)?);
    let (ez, eq) = (fam.e2(z)?, fam.e2(q)?);
    out.push(rel(lhs, wz - wq, &[lhs, wz, wq]).max(rel(lhs, ez - eq, &[lhs, ez, eq])));

    let (x, y) = (q, u);
    let a = fam.phi(z, x)? * fam.f(z, y)?;
    let b = fam.phi(z, y)? * fam.f(z, x)?;
    let r = fam.phi(z, x + y)? * (fam.wp(x)? - fam.wp(y)?);
    out.push(rel(a - b, r, &[a, b, r]));

    let lhs = fam.phi(z, q)? * fam.phi(w, q)?;
    let p = fam.phi(z + w, q)?;
    let (e1z, e1w, e1q, e1s) = (fam.e1(z)?, fam.e1(w)?, fam.e1(q)?, fam.e1(z + w + q)?);
    let first = p * (e1z + e1w + e1q - e1s);
    let f = fam.f(z + w, q)?;
    let second = p * (e1z + e1w) - f;
    let scale = [lhs, p * e1z, p * e1w, p * e1q, p * e1s, f];
    out.push(rel(lhs, first, &scale).max(rel(lhs, second, &scale)));

    let h = 1e-5;
    let lhs = fam.phi(C64::new(h, 0.0), q)?;
    let e1 = fam.e1(q)?;
    let lin = 0.5 * h * (e1 * e1 - fam.wp(q)?);
    let rhs = 1.0 / h + e1 + lin;
    out.push(rel(lhs, rhs, &[lhs, e1, lin]));

    // f(0,q) as a limit of the generic formula: symmetric average, Richardson in h^2
    let avg = |h: f64| -> Result<C64> {
        Ok(0.5 * (fam.f(C64::new(h, 0.0), q)? + fam.f(C64::new(-h, 0.0), q)?))
    };
    let (g1, g2, g3) = (avg(2e-3)?, avg(1e-3)?, avg(5e-4)?);
    let (r1, r2) = ((4.0 * g2 - g1) / 3.0, (4.0 * g3 - g2) / 3.0);
    let limit = (16.0 * r2 - r1) / 15.0;
    let e2 = fam.e2(q)?;
    out.push(rel(limit, -e2, &[limit, e2]));
    Ok(out)
}

const IDENTITIES: [(&str, &str); 6] = [
    ("fay trisecant", "(A.14)"),
    ("phi(z,q)phi(z,-q) = wp(z)-wp(q)", "(A.15)"),
    ("phi f - phi f = phi (wp(x)-wp(y))", "(A.16)"),
    ("phi(z,q)phi(w,q) product formula", "(A.17)"),
    ("expansion near z=0", "(A.11)-(A.12)"),
    ("f(0,q) = -E2(q)", "(A.13)"),
];

/// Fay identity and its degenerations at `samples` seeded points.
pub fn check_fay_suite(
    fam: &FunctionFamily,
    seed: u64,
    samples: usize,
    tol: f64,
) -> Result<IdentityReport> {
    let label = match fam {
        FunctionFamily::Elliptic(m) => format!("elliptic tau={}", m.tau()),
        other => other.name().to_string(),
    };
    let stream = format!("fay/{label}");
    let res = sweep(seed, &stream, samples, IDENTITIES.len(), |s| {
        fay_sample(fam, s)
    })?;
    let mut rep = IdentityReport::new("elliptic");
    for ((name, tag), max) in IDENTITIES.iter().zip(res.max) {
        rep.push(
            IdentityEntry::new(
                "elliptic",
                &format!("{name} [{label}]"),
                tag,
                max,
                res.samples,
                tol,
                Expect::Pass,
            )
            .with_resampled(res.resampled),
        );
    }
    Ok(rep)
}
