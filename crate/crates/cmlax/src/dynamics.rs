//! Fixed-step RK4 integration of Hamilton's equations and monitoring of
//! H, tr L^k(z) and the spectrum of L(z) along the flow.

use crate::error::{Error, Result};
use crate::laxpairs::{build_l, eom, hamiltonian, ModelConfig, PhasePoint};
use crate::tensor::CMat;
use crate::C64;
use nalgebra::{DMatrix, Schur};
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Clone, Debug)]
pub struct IntegrateOptions {
    pub t_end: f64,
    pub dt: f64,
    pub z_probe: Vec<C64>,
    /// Record conserved quantities every this many steps (and at the end).
    pub record_every: usize,
    /// Bound on the step-doubling local error estimate, relative to max(1, |y|).
    pub local_error_bound: f64,
    /// How often a rejected step may be split in half.
    pub max_halvings: u32,
    pub spectra: bool,
}

impl IntegrateOptions {
    pub fn new(t_end: f64, dt: f64, z_probe: Vec<C64>) -> Self {
        IntegrateOptions {
            t_end,
            dt,
            z_probe,
            record_every: 10,
            local_error_bound: 1e-8,
            max_halvings: 12,
            spectra: true,
        }
    }
}

/// Conserved quantities at one recorded time.
#[derive(Clone, Debug, Serialize)]
pub struct Sample {
    pub t: f64,
    pub state: PhasePoint,
    pub h: C64,
    /// tr L^k(z_j) for k = 1..4, one row per probe.
    pub traces: Vec<[C64; 4]>,
    /// Eigenvalues of L(z_j), one list per probe.
    pub spectra: Vec<Vec<C64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub dt: f64,
    pub z_probe: Vec<C64>,
    pub samples: Vec<Sample>,
    /// Steps that had to be split to meet the local error bound.
    pub split_steps: usize,
}

fn pack(st: &PhasePoint) -> Vec<C64> {
    st.q.iter().chain(&st.p).copied().collect()
}

fn unpack(y: &[C64]) -> PhasePoint {
    let n = y.len() / 2;
    PhasePoint {
        q: y[..n].to_vec(),
        p: y[n..].to_vec(),
    }
}

fn rhs(cfg: &ModelConfig, y: &[C64], t: f64) -> Result<Vec<C64>> {
    match eom(cfg, &unpack(y)) {
        Ok((qd, pd)) => Ok(qd.into_iter().chain(pd).collect()),
        Err(Error::PoleProximity { arg, distance, .. }) => Err(Error::Integration(format!(
            "pole approach at t={t:.6}: argument {arg} at distance {distance:.3e}"
        ))),
        Err(e) => Err(e),
    }
}

fn axpy(y: &[C64], h: f64, k: &[C64]) -> Vec<C64> {
    y.iter().zip(k).map(|(a, b)| a + b * h).collect()
}

/// One classic RK4 step.
pub fn rk4_step(cfg: &ModelConfig, y: &[C64], t: f64, h: f64) -> Result<Vec<C64>> {
    let k1 = rhs(cfg, y, t)?;
    let k2 = rhs(cfg, &axpy(y, h / 2.0, &k1), t + h / 2.0)?;
    let k3 = rhs(cfg, &axpy(y, h / 2.0, &k2), t + h / 2.0)?;
    let k4 = rhs(cfg, &axpy(y, h, &k3), t + h)?;
    Ok((0..y.len())
        .map(|i| y[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0))
        .collect())
}

fn norm(y: &[C64]) -> f64 {
    y.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// A step of size h, split in halves while the step-doubling estimate
/// exceeds the bound.
fn controlled_step(
    cfg: &ModelConfig,
    opts: &IntegrateOptions,
    y: &[C64],
    t: f64,
    h: f64,
    depth: u32,
    splits: &mut usize,
) -> Result<Vec<C64>> {
    let full = rk4_step(cfg, y, t, h)?;
    let mid = rk4_step(cfg, y, t, h / 2.0)?;
    let half = rk4_step(cfg, &mid, t + h / 2.0, h / 2.0)?;
    let diff: Vec<C64> = full.iter().zip(&half).map(|(a, b)| a - b).collect();
    let err = norm(&diff) / 15.0 / norm(y).max(1.0);
    if err <= opts.local_error_bound {
        return Ok(full);
    }
    if depth >= opts.max_halvings {
        return Err(Error::Integration(format!(
            "step size underflow at t={t:.6}: local error {err:.3e} at dt={h:.3e}"
        )));
    }
    *splits += 1;
    let a = controlled_step(cfg, opts, y, t, h / 2.0, depth + 1, splits)?;
    controlled_step(cfg, opts, &a, t + h / 2.0, h / 2.0, depth + 1, splits)
}

/// Eigenvalues of a dense complex matrix (complex Schur form).
pub fn eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    let a = DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice());
    let schur = Schur::try_new(a, 1e-14, 10_000)
        .ok_or_else(|| Error::Precision("Schur iteration did not converge".into()))?;
    let ev = schur
        .eigenvalues()
        .ok_or_else(|| Error::Precision("Schur form is not triangular".into()))?;
    Ok(ev.iter().copied().collect())
}

fn record(cfg: &ModelConfig, st: &PhasePoint, t: f64, opts: &IntegrateOptions) -> Result<Sample> {
    let mut traces = Vec::new();
    let mut spectra = Vec::new();
    for &z in &opts.z_probe {
        let l = build_l(cfg, st, z)?.into_mat();
        let mut pw = l.clone();
        let mut tr = [C64::new(0.0, 0.0); 4];
        for (k, slot) in tr.iter_mut().enumerate() {
            if k > 0 {
                pw = &pw * &l;
            }
            *slot = pw.trace();
        }
        traces.push(tr);
        spectra.push(if opts.spectra {
            eigenvalues(&l)?
        } else {
            Vec::new()
        });
    }
    Ok(Sample {
        t,
        state: st.clone(),
        h: hamiltonian(cfg, st)?,
        traces,
        spectra,
    })
}

pub fn integrate(
    cfg: &ModelConfig,
    state0: &PhasePoint,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    if !(opts.dt > 0.0 && opts.t_end >= 0.0) {
        return Err(Error::InvalidConfig("need dt > 0 and t_end >= 0".into()));
    }
    let steps = (opts.t_end / opts.dt).round() as usize;
    let every = opts.record_every.max(1);
    let mut y = pack(state0);
    let mut samples = vec![record(cfg, state0, 0.0, opts)?];
    let mut splits = 0;
    for i in 0..steps {
        let t = i as f64 * opts.dt;
        y = controlled_step(cfg, opts, &y, t, opts.dt, 0, &mut splits)?;
        if (i + 1) % every == 0 || i + 1 == steps {
            samples.push(record(cfg, &unpack(&y), t + opts.dt, opts)?);
        }
    }
    Ok(Trajectory {
        dt: opts.dt,
        z_probe: opts.z_probe.clone(),
        samples,
        split_steps: splits,
    })
}

/// Greedy minimal-distance pairing: max distance over the pairs.
pub fn matching_distance(a: &[C64], b: &[C64]) -> f64 {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (mut ua, mut ub) = (vec![false; a.len()], vec![false; b.len()]);
    let mut worst = 0.0f64;
    for (d, i, j) in pairs {
        if !ua[i] && !ub[j] {
            ua[i] = true;
            ub[j] = true;
            worst = worst.max(d);
        }
    }
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    worst
}

#[derive(Clone, Debug, Serialize)]
pub struct Drift {
    pub quantity: String,
    pub max_relative_drift: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConservedReport {
    pub drifts: Vec<Drift>,
}

impl ConservedReport {
    pub fn get(&self, quantity: &str) -> Option<f64> {
        self.drifts
            .iter()
            .find(|d| d.quantity == quantity)
            .map(|d| d.max_relative_drift)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn drift(values: impl Iterator<Item = C64> + Clone) -> f64 {
    let first = values.clone().next().unwrap_or_default();
    let scale = values.clone().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    values.map(|v| (v - first).norm()).fold(0.0, f64::max) / scale
}

/// Max relative drift of H, of each tr L^k(z_j) and of each spectrum
/// (matched against the initial one, relative to its largest eigenvalue).
pub fn conserved_report(traj: &Trajectory) -> ConservedReport {
    let s = &traj.samples;
    let mut drifts = vec![Drift {
        quantity: "H".into(),
        max_relative_drift: drift(s.iter().map(|x| x.h)),
    }];
    for j in 0..traj.z_probe.len() {
        for k in 0..4 {
            drifts.push(Drift {
                quantity: format!("tr L^{}(z{j})", k + 1),
                max_relative_drift: drift(s.iter().map(|x| x.traces[j][k])),
            });
        }
        let first = &s[0].spectra[j];
        if first.is_empty() {
            continue;
        }
        let scale = first
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
            .max(1e-300);
        let worst = s
            .iter()
            .map(|x| matching_distance(first, &x.spectra[j]))
            .fold(0.0, f64::max);
        drifts.push(Drift {
            quantity: format!("spectrum L(z{j})"),
            max_relative_drift: worst / scale,
        });
    }
    ConservedReport { drifts }
}

/// CSV with one row per recorded sample; complex values as re, im columns.
pub fn to_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t");
    let n = traj.samples.first().map_or(0, |s| s.state.len());
    for name in ["q", "p"] {
        for i in 0..n {
            let _ = write!(out, ",{name}{i}_re,{name}{i}_im");
        }
    }
    out += ",H_re,H_im";
    for j in 0..traj.z_probe.len() {
        for k in 1..=4 {
            let _ = write!(out, ",trL{k}_z{j}_re,trL{k}_z{j}_im");
        }
    }
    out.push('\n');
    for s in &traj.samples {
        let _ = write!(out, "{:.17e}", s.t);
        for v in s
            .state
            .q
            .iter()
            .chain(&s.state.p)
            .chain(std::iter::once(&s.h))
        {
            let _ = write!(out, ",{:.17e},{:.17e}", v.re, v.im);
        }
        for tr in &s.traces {
            for v in tr {
                let _ = write!(out, ",{:.17e},{:.17e}", v.re, v.im);
            }
        }
        out.push('\n');
    }
    out
}

pub fn to_json(traj: &Trajectory) -> String {
    serde_json::to_string_pretty(traj).expect("trajectory serializes")
}
