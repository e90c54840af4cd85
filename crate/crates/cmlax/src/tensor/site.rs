use super::CMat;
use crate::error::{Error, Result};
use crate::C64;

fn check_site(site: usize, sites: usize) -> Result<()> {
    if site >= sites {
        Err(Error::SiteOutOfRange { site, sites })
    } else {
        Ok(())
    }
}

/// Weight of the digit for `site` in the mixed-radix index; site 0 is the
/// leftmost Kronecker factor.
fn weight(n: usize, site: usize, sites: usize) -> usize {
    n.pow((sites - 1 - site) as u32)
}

/// Places the two-site operator `o` (acting on C^n ⊗ C^n) at sites (a, b) of
/// `sites` copies of C^n, identity elsewhere.
pub fn embed_pair(o: &CMat, a: usize, b: usize, sites: usize, n: usize) -> Result<CMat> {
    check_site(a, sites)?;
    check_site(b, sites)?;
    if a == b {
        return Err(Error::SiteCollision(a));
    }
    if o.rows() != n * n || o.cols() != n * n {
        return Err(Error::ShapeMismatch(format!(
            "two-site operator must be {0}x{0}, got {1}x{2}",
            n * n,
            o.rows(),
            o.cols()
        )));
    }
    let dim = n.pow(sites as u32);
    let (wa, wb) = (weight(n, a, sites), weight(n, b, sites));
    let mut out = CMat::zeros(dim, dim);
    for col in 0..dim {
        let (da, db) = ((col / wa) % n, (col / wb) % n);
        let base = col - da * wa - db * wb;
        let oc = da * n + db;
        for ka in 0..n {
            for kb in 0..n {
                let v = o[(ka * n + kb, oc)];
                if v != C64::new(0.0, 0.0) {
                    out[(base + ka * wa + kb * wb, col)] += v;
                }
            }
        }
    }
    Ok(out)
}

/// Places a one-site operator at `site`.
pub fn embed_single(o: &CMat, site: usize, sites: usize, n: usize) -> Result<CMat> {
    check_site(site, sites)?;
    if o.rows() != n || o.cols() != n {
        return Err(Error::ShapeMismatch(format!(
            "one-site operator must be {n}x{n}"
        )));
    }
    let dim = n.pow(sites as u32);
    let w = weight(n, site, sites);
    let mut out = CMat::zeros(dim, dim);
    for col in 0..dim {
        let d = (col / w) % n;
        let base = col - d * w;
        for k in 0..n {
            let v = o[(k, d)];
            if v != C64::new(0.0, 0.0) {
                out[(base + k * w, col)] += v;
            }
        }
    }
    Ok(out)
}

/// Two-site flip on C^n ⊗ C^n.
pub fn swap(n: usize) -> CMat {
    let mut p = CMat::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            p[(i * n + j, j * n + i)] = C64::new(1.0, 0.0);
        }
    }
    p
}

/// swap · o · swap: the same operator with its two site factors exchanged.
pub fn swap_conj(o: &CMat, n: usize) -> CMat {
    let p = swap(n);
    &(&p * o) * &p
}

/// Element of Mat_aux ⊗ Mat_n^{⊗ sites}, stored densely with the auxiliary
/// index outermost.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteOperator {
    aux: usize,
    site_dim: usize,
    sites: usize,
    mat: CMat,
}

impl SiteOperator {
    pub fn zeros(aux: usize, site_dim: usize, sites: usize) -> Self {
        let d = aux * site_dim.pow(sites as u32);
        SiteOperator {
            aux,
            site_dim,
            sites,
            mat: CMat::zeros(d, d),
        }
    }

    pub fn identity(aux: usize, site_dim: usize, sites: usize) -> Self {
        let d = aux * site_dim.pow(sites as u32);
        SiteOperator {
            aux,
            site_dim,
            sites,
            mat: CMat::identity(d),
        }
    }

    pub fn from_mat(aux: usize, site_dim: usize, sites: usize, mat: CMat) -> Result<Self> {
        let d = aux * site_dim.pow(sites as u32);
        if mat.rows() != d || mat.cols() != d {
            return Err(Error::ShapeMismatch(format!(
                "expected {d}x{d} for aux {aux}, site dim {site_dim}, {sites} sites"
            )));
        }
        Ok(SiteOperator {
            aux,
            site_dim,
            sites,
            mat,
        })
    }

    pub fn aux(&self) -> usize {
        self.aux
    }

    pub fn site_dim(&self) -> usize {
        self.site_dim
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    /// Dimension of the quantum space Mat_n^{⊗ sites}.
    pub fn space_dim(&self) -> usize {
        self.site_dim.pow(self.sites as u32)
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_mat(self) -> CMat {
        self.mat
    }

    /// Adds c · E_ij ⊗ payload.
    pub fn add_aux_block(&mut self, i: usize, j: usize, c: C64, payload: &CMat) {
        let d = self.space_dim();
        debug_assert!(i < self.aux && j < self.aux && payload.rows() == d);
        self.mat.add_block(i * d, j * d, c, payload);
    }

    pub fn aux_block(&self, i: usize, j: usize) -> CMat {
        let d = self.space_dim();
        self.mat.block(i * d, j * d, d, d)
    }

    fn same_shape(&self, o: &SiteOperator) -> Result<()> {
        if (self.aux, self.site_dim, self.sites) != (o.aux, o.site_dim, o.sites) {
            return Err(Error::ShapeMismatch(format!(
                "(aux {}, n {}, r {}) vs (aux {}, n {}, r {})",
                self.aux, self.site_dim, self.sites, o.aux, o.site_dim, o.sites
            )));
        }
        Ok(())
    }

    pub fn mul(&self, o: &SiteOperator) -> Result<SiteOperator> {
        self.same_shape(o)?;
        Ok(self.with_mat(self.mat.matmul(&o.mat)?))
    }

    pub fn add(&self, o: &SiteOperator) -> Result<SiteOperator> {
        self.same_shape(o)?;
        Ok(self.with_mat(&self.mat + &o.mat))
    }

    pub fn sub(&self, o: &SiteOperator) -> Result<SiteOperator> {
        self.same_shape(o)?;
        Ok(self.with_mat(&self.mat - &o.mat))
    }

    fn with_mat(&self, mat: CMat) -> SiteOperator {
        SiteOperator {
            aux: self.aux,
            site_dim: self.site_dim,
            sites: self.sites,
            mat,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.max_abs()
    }

    /// Contracts the row and column index of one site.
    pub fn partial_site_trace(&self, site: usize) -> Result<SiteOperator> {
        check_site(site, self.sites)?;
        let n = self.site_dim;
        let d = self.space_dim();
        let w = weight(n, site, self.sites);
        let rd = d / n;
        // index with the traced digit removed
        let drop = |x: usize| (x / (w * n)) * w + x % w;
        let mut out = SiteOperator::zeros(self.aux, n, self.sites - 1);
        for ai in 0..self.aux {
            for aj in 0..self.aux {
                for r in 0..d {
                    for c in 0..d {
                        if (r / w) % n != (c / w) % n {
                            continue;
                        }
                        out.mat[(ai * rd + drop(r), aj * rd + drop(c))] +=
                            self.mat[(ai * d + r, aj * d + c)];
                    }
                }
            }
        }
        Ok(out)
    }
}

/// c · E_ij ⊗ payload as a full operator.
pub fn embed_aux(
    aux: usize,
    i: usize,
    j: usize,
    payload: &CMat,
    site_dim: usize,
    sites: usize,
) -> Result<SiteOperator> {
    let mut out = SiteOperator::zeros(aux, site_dim, sites);
    if payload.rows() != out.space_dim() {
        return Err(Error::ShapeMismatch(
            "payload does not match the quantum space".into(),
        ));
    }
    if i >= aux || j >= aux {
        return Err(Error::ShapeMismatch(format!(
            "aux index ({i},{j}) outside {aux}"
        )));
    }
    out.add_aux_block(i, j, C64::new(1.0, 0.0), payload);
    Ok(out)
}

pub fn comm(a: &SiteOperator, b: &SiteOperator) -> Result<SiteOperator> {
    a.mul(b)?.sub(&b.mul(a)?)
}

pub fn max_abs(a: &SiteOperator) -> f64 {
    a.max_abs()
}
