use crate::error::{Error, Result};
use crate::tensor::CMat;
use crate::C64;
use std::collections::BTreeMap;

/// Exponents of ∂_{q_0}, ..., ∂_{q_{N-1}}.
pub type MultiIndex = Vec<u8>;

/// Derivatives of a coefficient at the evaluation point.
#[derive(Clone, Debug)]
enum Jet<T> {
    Zero,
    Known(T),
    Missing,
}

/// A matrix-valued function of q given by its value, gradient and Hessian
/// at one point. Derivatives that were not supplied are reported as missing
/// when a composition needs them.
#[derive(Clone, Debug)]
pub struct CoeffField {
    value: CMat,
    d1: Jet<Vec<CMat>>,
    d2: Jet<Vec<Vec<CMat>>>,
}

impl CoeffField {
    /// A q-independent coefficient.
    pub fn constant(value: CMat) -> Self {
        CoeffField {
            value,
            d1: Jet::Zero,
            d2: Jet::Zero,
        }
    }

    /// Value only; any derivative request fails.
    pub fn value_only(value: CMat) -> Self {
        CoeffField {
            value,
            d1: Jet::Missing,
            d2: Jet::Missing,
        }
    }

    pub fn with_gradient(value: CMat, d1: Vec<CMat>) -> Self {
        CoeffField {
            value,
            d1: Jet::Known(d1),
            d2: Jet::Missing,
        }
    }

    pub fn with_hessian(value: CMat, d1: Vec<CMat>, d2: Vec<Vec<CMat>>) -> Self {
        CoeffField {
            value,
            d1: Jet::Known(d1),
            d2: Jet::Known(d2),
        }
    }

    pub fn value(&self) -> &CMat {
        &self.value
    }

    /// ∂^γ of the coefficient for |γ| ≤ 2.
    pub fn derivative(&self, gamma: &[u8]) -> Result<CMat> {
        let order: u32 = gamma.iter().map(|&g| g as u32).sum();
        let nz: Vec<usize> = gamma
            .iter()
            .enumerate()
            .flat_map(|(k, &g)| std::iter::repeat_n(k, g as usize))
            .collect();
        let zero = || CMat::zeros(self.value.rows(), self.value.cols());
        match order {
            0 => Ok(self.value.clone()),
            1 => match &self.d1 {
                Jet::Zero => Ok(zero()),
                Jet::Known(d) => Ok(d[nz[0]].clone()),
                Jet::Missing => Err(Error::MissingDerivative(1)),
            },
            2 => match &self.d2 {
                Jet::Zero => Ok(zero()),
                Jet::Known(d) => Ok(d[nz[0]][nz[1]].clone()),
                Jet::Missing => Err(Error::MissingDerivative(2)),
            },
            k => Err(Error::MissingDerivative(k as usize)),
        }
    }

    fn add(&self, o: &CoeffField) -> CoeffField {
        fn sum<T: Clone>(a: &Jet<T>, b: &Jet<T>, add: impl Fn(&T, &T) -> T) -> Jet<T> {
            match (a, b) {
                (Jet::Zero, x) | (x, Jet::Zero) => x.clone(),
                (Jet::Known(x), Jet::Known(y)) => Jet::Known(add(x, y)),
                _ => Jet::Missing,
            }
        }
        let v =
            |x: &Vec<CMat>, y: &Vec<CMat>| x.iter().zip(y).map(|(a, b)| a + b).collect::<Vec<_>>();
        CoeffField {
            value: &self.value + &o.value,
            d1: sum(&self.d1, &o.d1, v),
            d2: sum(&self.d2, &o.d2, |x, y| {
                x.iter().zip(y).map(|(a, b)| v(a, b)).collect()
            }),
        }
    }

    fn scaled(&self, c: C64) -> CoeffField {
        let s = |m: &CMat| m * c;
        CoeffField {
            value: s(&self.value),
            d1: match &self.d1 {
                Jet::Known(d) => Jet::Known(d.iter().map(s).collect()),
                Jet::Zero => Jet::Zero,
                Jet::Missing => Jet::Missing,
            },
            d2: match &self.d2 {
                Jet::Known(d) => Jet::Known(d.iter().map(|r| r.iter().map(s).collect()).collect()),
                Jet::Zero => Jet::Zero,
                Jet::Missing => Jet::Missing,
            },
        }
    }
}

/// Σ_α A_α(q) ∂^α with matrix coefficients, derivatives acting to the right.
#[derive(Clone, Debug)]
pub struct DiffOp {
    vars: usize,
    dim: usize,
    terms: BTreeMap<MultiIndex, CoeffField>,
}

fn binom(n: u8, k: u8) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// All γ ≤ α componentwise.
fn below(alpha: &[u8]) -> Vec<MultiIndex> {
    let mut out = vec![Vec::new()];
    for &a in alpha {
        out = out
            .into_iter()
            .flat_map(|g| {
                (0..=a).map(move |k| {
                    let mut h = g.clone();
                    h.push(k);
                    h
                })
            })
            .collect();
    }
    out
}

impl DiffOp {
    pub fn new(vars: usize, dim: usize) -> Self {
        DiffOp {
            vars,
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Index of ∂_{q_k}^{times}.
    pub fn index(&self, k: usize, times: u8) -> MultiIndex {
        let mut a = vec![0; self.vars];
        a[k] = times;
        a
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: CoeffField) -> Result<()> {
        if alpha.len() != self.vars || c.value.rows() != self.dim || c.value.cols() != self.dim {
            return Err(Error::ShapeMismatch(format!(
                "term with {} variables and {}x{} coefficient in a DiffOp over {} variables, dim {}",
                alpha.len(),
                c.value.rows(),
                c.value.cols(),
                self.vars,
                self.dim
            )));
        }
        let merged = match self.terms.get(&alpha) {
            Some(old) => old.add(&c),
            None => c,
        };
        self.terms.insert(alpha, merged);
        Ok(())
    }

    pub fn coeff(&self, alpha: &[u8]) -> Option<&CMat> {
        self.terms.get(alpha).map(|c| &c.value)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &CMat)> {
        self.terms.iter().map(|(a, c)| (a, &c.value))
    }

    pub fn order(&self) -> u32 {
        self.terms
            .keys()
            .map(|a| a.iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    /// Largest coefficient entry among terms of the given total order.
    pub fn max_abs_order(&self, order: u32) -> f64 {
        self.terms
            .iter()
            .filter(|(a, _)| a.iter().map(|&x| x as u32).sum::<u32>() == order)
            .map(|(_, c)| c.value.max_abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.value.max_abs())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: C64) -> DiffOp {
        DiffOp {
            vars: self.vars,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(a, t)| (a.clone(), t.scaled(c)))
                .collect(),
        }
    }

    pub fn add(&self, o: &DiffOp) -> Result<DiffOp> {
        let mut out = self.clone();
        for (a, c) in &o.terms {
            out.add_term(a.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, o: &DiffOp) -> Result<DiffOp> {
        self.add(&o.scaled(C64::new(-1.0, 0.0)))
    }

    /// A ∘ B by the Leibniz rule: A_α ∂^α B_β ∂^β = Σ_γ C(α,γ) A_α (∂^γ B_β) ∂^{α-γ+β}.
    /// The result carries coefficient values only.
    pub fn compose(&self, o: &DiffOp) -> Result<DiffOp> {
        if (self.vars, self.dim) != (o.vars, o.dim) {
            return Err(Error::ShapeMismatch(
                "composing DiffOps of different shapes".into(),
            ));
        }
        let mut acc: BTreeMap<MultiIndex, CMat> = BTreeMap::new();
        for (alpha, a) in &self.terms {
            for gamma in below(alpha) {
                let c: f64 = alpha
                    .iter()
                    .zip(&gamma)
                    .map(|(&n, &k)| binom(n, k))
                    .product();
                for (beta, b) in &o.terms {
                    let db = b.derivative(&gamma)?;
                    if db.max_abs() == 0.0 {
                        continue;
                    }
                    let idx: MultiIndex = (0..self.vars)
                        .map(|k| alpha[k] - gamma[k] + beta[k])
                        .collect();
                    let prod = a.value.matmul(&db)? * C64::new(c, 0.0);
                    match acc.get_mut(&idx) {
                        Some(m) => *m += &prod,
                        None => {
                            acc.insert(idx, prod);
                        }
                    }
                }
            }
        }
        Ok(DiffOp {
            vars: self.vars,
            dim: self.dim,
            terms: acc
                .into_iter()
                .map(|(k, v)| (k, CoeffField::value_only(v)))
                .collect(),
        })
    }

    pub fn commutator(&self, o: &DiffOp) -> Result<DiffOp> {
        self.compose(o)?.sub(&o.compose(self)?)
    }
}
