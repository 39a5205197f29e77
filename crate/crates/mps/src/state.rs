//! Matrix product states and the dense <-> MPS conversions.
//!
//! Site tensors are rank three, indexed (left bond, physical, right bond);
//! the boundary bonds have dimension one. The state is never renormalized
//! after a truncation, so the squared norm drifts down by exactly the
//! accumulated discarded weight.

use crate::{MpsError, Result};
use ndarray::{Array1, Array2, Array3};
use ndarray_linalg::SVD;
use num_complex::Complex64 as C64;
use squeezelab_core::linalg::LinalgError;
use squeezelab_core::CMat;

/// Largest dense tensor we are willing to materialize.
const DENSE_LIMIT: usize = 1 << 20;

/// Singular values below this fraction of the largest are treated as zero
/// rank regardless of the truncation threshold.
const RANK_CUT: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct MPSState {
    /// Site tensors (left bond, physical, right bond).
    pub tensors: Vec<Array3<C64>>,
    /// Relative truncation threshold the state was built with.
    pub epsilon: f64,
    /// Accumulated discarded squared singular values.
    pub discarded: f64,
}

/// Truncation decision for a descending singular-value list: the kept rank
/// and the discarded squared weight.
fn truncate_rank(s: &Array1<f64>, d_max: usize, epsilon: f64) -> (usize, f64) {
    let smax = s.iter().cloned().fold(0.0f64, f64::max);
    if smax <= 0.0 {
        return (1, 0.0);
    }
    let total: f64 = s.iter().map(|x| x * x).sum();
    // numerical rank first, then the relative weight budget, then the cap
    let mut r = s.iter().take_while(|&&x| x > RANK_CUT * smax).count().max(1);
    let budget = epsilon * epsilon * total;
    let mut tail: f64 = s.iter().skip(r).map(|x| x * x).sum();
    while r > 1 && tail + s[r - 1] * s[r - 1] <= budget {
        r -= 1;
        tail += s[r] * s[r];
    }
    let r = r.min(d_max).max(1);
    let discarded: f64 = s.iter().skip(r).map(|x| x * x).sum();
    (r, discarded)
}

fn svd_parts(m: &CMat) -> Result<(CMat, Array1<f64>, CMat)> {
    let (u, s, vt) = m.svd(true, true).map_err(LinalgError::from)?;
    let u = u.ok_or_else(|| LinalgError::Backend("svd: U missing".into()))?;
    let vt = vt.ok_or_else(|| LinalgError::Backend("svd: V^H missing".into()))?;
    Ok((u, s, vt))
}

impl MPSState {
    /// Product state from one normalized vector per site; all bonds are one.
    pub fn product(site_vectors: &[Array1<C64>]) -> Result<Self> {
        if site_vectors.is_empty() {
            return Err(MpsError::Invalid("product state needs at least one site".into()));
        }
        let mut tensors = Vec::with_capacity(site_vectors.len());
        for v in site_vectors {
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm <= 0.0 {
                return Err(MpsError::Invalid("site vector has zero norm".into()));
            }
            let mut t = Array3::zeros((1, v.len(), 1));
            for (i, &z) in v.iter().enumerate() {
                t[(0, i, 0)] = z / norm;
            }
            tensors.push(t);
        }
        Ok(Self { tensors, epsilon: 0.0, discarded: 0.0 })
    }

    pub fn sites(&self) -> usize {
        self.tensors.len()
    }

    pub fn phys_dims(&self) -> Vec<usize> {
        self.tensors.iter().map(|t| t.dim().1).collect()
    }

    /// Internal bond dimensions (length sites - 1).
    pub fn bond_dims(&self) -> Vec<usize> {
        self.tensors.iter().skip(1).map(|t| t.dim().0).collect()
    }

    pub fn max_bond(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    /// Transfer-matrix step: push the bra-ket environment through one site,
    /// sandwiching `op` on the physical leg if given.
    fn transfer(&self, env: &CMat, site: usize, op: Option<&CMat>) -> CMat {
        let a = &self.tensors[site];
        let (dl, c, dr) = a.dim();
        // tmp[ap, j, b] = sum_a env[ap, a] a[a, j, b]
        let mut tmp = Array3::zeros((dl, c, dr));
        for ap in 0..dl {
            for j in 0..c {
                for b in 0..dr {
                    let mut acc = C64::new(0.0, 0.0);
                    for al in 0..dl {
                        acc += env[(ap, al)] * a[(al, j, b)];
                    }
                    tmp[(ap, j, b)] = acc;
                }
            }
        }
        let tmp = match op {
            None => tmp,
            Some(o) => {
                let mut t2 = Array3::zeros((dl, c, dr));
                for ap in 0..dl {
                    for i in 0..c {
                        for b in 0..dr {
                            let mut acc = C64::new(0.0, 0.0);
                            for j in 0..c {
                                acc += o[(i, j)] * tmp[(ap, j, b)];
                            }
                            t2[(ap, i, b)] = acc;
                        }
                    }
                }
                t2
            }
        };
        let mut out: CMat = Array2::zeros((dr, dr));
        for bp in 0..dr {
            for b in 0..dr {
                let mut acc = C64::new(0.0, 0.0);
                for ap in 0..dl {
                    for i in 0..c {
                        acc += a[(ap, i, bp)].conj() * tmp[(ap, i, b)];
                    }
                }
                out[(bp, b)] = acc;
            }
        }
        out
    }

    /// Raw contraction <psi| prod O_p |psi> with local operators at the given
    /// (strictly increasing) sites and identity elsewhere. With no operators
    /// this is the squared norm.
    pub fn expectation(&self, ops: &[(usize, &CMat)]) -> Result<C64> {
        for w in ops.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(MpsError::Invalid("operator sites must be strictly increasing".into()));
            }
        }
        let mut next = 0usize;
        let mut env: CMat = Array2::eye(1);
        for site in 0..self.sites() {
            let op = if next < ops.len() && ops[next].0 == site {
                let (_, c, _) = self.tensors[site].dim();
                let o = ops[next].1;
                if o.dim() != (c, c) {
                    return Err(MpsError::Invalid(format!(
                        "operator at site {site} is {:?}, site dimension is {c}",
                        o.dim()
                    )));
                }
                next += 1;
                Some(o)
            } else {
                None
            };
            env = self.transfer(&env, site, op);
        }
        if next < ops.len() {
            return Err(MpsError::Invalid(format!(
                "operator site {} out of range (chain has {} sites)",
                ops[next].0,
                self.sites()
            )));
        }
        Ok(env[(0, 0)])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.expectation(&[]).expect("norm contraction").re
    }

    /// Apply a one-site operator in place (no truncation needed).
    pub fn apply_one_site(&mut self, site: usize, op: &CMat) -> Result<()> {
        if site >= self.sites() {
            return Err(MpsError::Invalid(format!("site {site} out of range")));
        }
        let a = &self.tensors[site];
        let (dl, c, dr) = a.dim();
        if op.dim() != (c, c) {
            return Err(MpsError::Invalid("one-site operator dimension mismatch".into()));
        }
        let mut out = Array3::zeros((dl, c, dr));
        for al in 0..dl {
            for i in 0..c {
                for b in 0..dr {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..c {
                        acc += op[(i, j)] * a[(al, j, b)];
                    }
                    out[(al, i, b)] = acc;
                }
            }
        }
        self.tensors[site] = out;
        Ok(())
    }

    /// Apply a two-site gate at (site, site + 1), split by SVD, truncate to
    /// (d_max, epsilon) and return the discarded squared weight. The left
    /// factor is left-canonical; the singular values stay on the right site.
    pub fn apply_two_site(
        &mut self,
        site: usize,
        gate: &CMat,
        d_max: usize,
        epsilon: f64,
    ) -> Result<f64> {
        if site + 1 >= self.sites() {
            return Err(MpsError::Invalid(format!("two-site gate at {site} out of range")));
        }
        let a = self.tensors[site].clone();
        let bt = self.tensors[site + 1].clone();
        let (dl, c1, dm) = a.dim();
        let (_, c2, dr) = bt.dim();
        if gate.dim() != (c1 * c2, c1 * c2) {
            return Err(MpsError::Invalid("two-site gate dimension mismatch".into()));
        }
        // theta[(j1 c2 + j2), (a dr + b)] = sum_m a[a, j1, m] bt[m, j2, b]
        let mut theta: CMat = Array2::zeros((c1 * c2, dl * dr));
        for al in 0..dl {
            for j1 in 0..c1 {
                for m in 0..dm {
                    let av = a[(al, j1, m)];
                    if av == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for j2 in 0..c2 {
                        for b in 0..dr {
                            theta[(j1 * c2 + j2, al * dr + b)] += av * bt[(m, j2, b)];
                        }
                    }
                }
            }
        }
        let theta = gate.dot(&theta);
        // regroup to (dl c1) x (c2 dr) for the cut between the sites
        let mut mat: CMat = Array2::zeros((dl * c1, c2 * dr));
        for i1 in 0..c1 {
            for i2 in 0..c2 {
                for al in 0..dl {
                    for b in 0..dr {
                        mat[(al * c1 + i1, i2 * dr + b)] = theta[(i1 * c2 + i2, al * dr + b)];
                    }
                }
            }
        }
        let (u, s, vt) = svd_parts(&mat)?;
        let (r, discarded) = truncate_rank(&s, d_max, epsilon);
        let mut left = Array3::zeros((dl, c1, r));
        for al in 0..dl {
            for i1 in 0..c1 {
                for k in 0..r {
                    left[(al, i1, k)] = u[(al * c1 + i1, k)];
                }
            }
        }
        let mut right = Array3::zeros((r, c2, dr));
        for k in 0..r {
            for i2 in 0..c2 {
                for b in 0..dr {
                    right[(k, i2, b)] = vt[(k, i2 * dr + b)] * s[k];
                }
            }
        }
        self.tensors[site] = left;
        self.tensors[site + 1] = right;
        self.discarded += discarded;
        Ok(discarded)
    }

    /// Recontract into a dense state vector (row-major over the physical
    /// indices, leftmost site slowest).
    pub fn contract_dense(&self) -> Result<Vec<C64>> {
        let total: usize = self.phys_dims().iter().product();
        if total > DENSE_LIMIT {
            return Err(MpsError::Invalid(format!(
                "dense contraction of {total} amplitudes exceeds the limit {DENSE_LIMIT}"
            )));
        }
        // acc[(p, b)]: partial contraction of the first sites
        let mut acc: CMat = Array2::eye(1);
        for t in &self.tensors {
            let (dl, c, dr) = t.dim();
            let rows = acc.nrows();
            let mut next: CMat = Array2::zeros((rows * c, dr));
            for p in 0..rows {
                for i in 0..c {
                    for b in 0..dr {
                        let mut z = C64::new(0.0, 0.0);
                        for m in 0..dl {
                            z += acc[(p, m)] * t[(m, i, b)];
                        }
                        next[(p * c + i, b)] = z;
                    }
                }
            }
            acc = next;
        }
        Ok(acc.column(0).to_vec())
    }
}

/// Decompose a dense state vector over the given site dimensions into an MPS
/// by a left-to-right SVD sweep, truncating each cut to (d_max, epsilon).
pub fn tensor_to_mps(data: &[C64], dims: &[usize], d_max: usize, epsilon: f64) -> Result<MPSState> {
    if dims.is_empty() || dims.iter().any(|&d| d == 0) {
        return Err(MpsError::Invalid("site dimensions must be nonempty and positive".into()));
    }
    let total: usize = dims.iter().product();
    if data.len() != total {
        return Err(MpsError::Invalid(format!(
            "tensor has {} amplitudes, dimensions require {total}",
            data.len()
        )));
    }
    if total > DENSE_LIMIT {
        return Err(MpsError::Invalid(format!(
            "dense tensor of {total} amplitudes exceeds the limit {DENSE_LIMIT}"
        )));
    }
    let mut tensors = Vec::with_capacity(dims.len());
    let mut discarded = 0.0;
    // carry: (bond, remaining physical block) matrix
    let mut carry: CMat = Array2::zeros((1, total));
    for (j, &z) in data.iter().enumerate() {
        carry[(0, j)] = z;
    }
    for (k, &d) in dims.iter().enumerate() {
        let (bond, rest) = carry.dim();
        let tail = rest / d;
        if k == dims.len() - 1 {
            let mut t = Array3::zeros((bond, d, 1));
            for m in 0..bond {
                for i in 0..d {
                    t[(m, i, 0)] = carry[(m, i)];
                }
            }
            tensors.push(t);
            break;
        }
        let mut mat: CMat = Array2::zeros((bond * d, tail));
        for m in 0..bond {
            for i in 0..d {
                for j in 0..tail {
                    mat[(m * d + i, j)] = carry[(m, i * tail + j)];
                }
            }
        }
        let (u, s, vt) = svd_parts(&mat)?;
        let (r, dropped) = truncate_rank(&s, d_max, epsilon);
        discarded += dropped;
        let mut t = Array3::zeros((bond, d, r));
        for m in 0..bond {
            for i in 0..d {
                for q in 0..r {
                    t[(m, i, q)] = u[(m * d + i, q)];
                }
            }
        }
        tensors.push(t);
        let mut next: CMat = Array2::zeros((r, tail));
        for q in 0..r {
            for j in 0..tail {
                next[(q, j)] = vt[(q, j)] * s[q];
            }
        }
        carry = next;
    }
    Ok(MPSState { tensors, epsilon, discarded })
}
