//! Dense complex linear algebra primitives: matrix exponential, Takagi-Autonne
//! decomposition, joint Bogoliubov SVD, symplectic validation, unitary logarithm.
//!
//! A Bogoliubov propagator is stored as the pair of blocks (V, W) of
//! ```text
//!     K = [ V   W  ]
//!         [ W*  V* ]
//! ```
//! and is symplectic when
//! ```text
//!     W V^T = V W^T,    V* V^T - W* W^T = 1 .
//! ```

use ndarray::{Array1, Array2, s};
use ndarray_linalg::{Eig, Eigh, Inverse, SVD, UPLO};
use num_complex::Complex64 as C64;
use thiserror::Error;

/// Dense complex matrix, row-major.
pub type CMat = Array2<C64>;
/// Dense complex vector.
pub type CVec = Array1<C64>;

pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Relative clamp threshold for singular values: anything below
/// `SV_CLAMP * s_max` is treated as exactly zero to avoid spurious
/// micro-squeezers downstream.
pub const SV_CLAMP: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("numeric failure: {0} (residual {1:.3e})")]
    Numeric(String, f64),
    #[error("LAPACK backend error: {0}")]
    Backend(String),
}

impl From<ndarray_linalg::error::LinalgError> for LinalgError {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        LinalgError::Backend(e.to_string())
    }
}

/// Conjugate transpose.
pub fn dagger(a: &CMat) -> CMat {
    a.t().mapv(|x| x.conj())
}

/// Elementwise complex conjugate.
pub fn conj(a: &CMat) -> CMat {
    a.mapv(|x| x.conj())
}

/// Frobenius norm.
pub fn fro_norm(a: &CMat) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Maximum absolute column sum (induced 1-norm).
pub fn one_norm(a: &CMat) -> f64 {
    let mut best = 0.0f64;
    for j in 0..a.ncols() {
        let s: f64 = a.column(j).iter().map(|x| x.norm()).sum();
        best = best.max(s);
    }
    best
}

/// Complex identity.
pub fn eye(n: usize) -> CMat {
    Array2::eye(n)
}

/// ‖A A† − 1‖_F, the unitarity residual.
pub fn unitarity_residual(u: &CMat) -> f64 {
    let n = u.nrows();
    fro_norm(&(u.dot(&dagger(u)) - eye(n)))
}

/// Unitary factor of the polar decomposition A = U P (via SVD).
pub fn polar_unitary(a: &CMat) -> Result<CMat, LinalgError> {
    let (u, _s, vt) = a.svd(true, true)?;
    let u = u.ok_or_else(|| LinalgError::Backend("svd: U missing".into()))?;
    let vt = vt.ok_or_else(|| LinalgError::Backend("svd: V^H missing".into()))?;
    Ok(u.dot(&vt))
}

/// Matrix exponential by scaling-and-squaring with a degree-13 Pade core.
pub fn matrix_exp(a: &CMat) -> CMat {
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    // Scaling threshold for the [13/13] approximant.
    const THETA13: f64 = 5.371920351148152;

    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix_exp: square input required");
    let norm = one_norm(a);
    assert!(norm.is_finite(), "matrix_exp: non-finite input");
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scale = C64::new((2f64).powi(-s), 0.0);
    let a1 = a.mapv(|x| x * scale);
    let a2 = a1.dot(&a1);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);
    let id = eye(n);

    let w1 = a6.mapv(|x| x * B[13]) + a4.mapv(|x| x * B[11]) + a2.mapv(|x| x * B[9]);
    let w2 = a6.mapv(|x| x * B[7])
        + a4.mapv(|x| x * B[5])
        + a2.mapv(|x| x * B[3])
        + id.mapv(|x| x * B[1]);
    let u = a1.dot(&(a6.dot(&w1) + w2));

    let z1 = a6.mapv(|x| x * B[12]) + a4.mapv(|x| x * B[10]) + a2.mapv(|x| x * B[8]);
    let v = a6.dot(&z1)
        + a6.mapv(|x| x * B[6])
        + a4.mapv(|x| x * B[4])
        + a2.mapv(|x| x * B[2])
        + id.mapv(|x| x * B[0]);

    let denom = &v - &u;
    let numer = &v + &u;
    let mut r = denom
        .inv()
        .expect("matrix_exp: Pade denominator singular")
        .dot(&numer);
    for _ in 0..s {
        r = r.dot(&r);
    }
    r
}

/// Result of a Takagi-Autonne factorization A = F diag(values) F^T.
#[derive(Debug, Clone)]
pub struct TakagiResult {
    /// Unitary mode matrix.
    pub f: CMat,
    /// Non-negative values, descending.
    pub values: Vec<f64>,
}

/// Group sorted-descending values into clusters of nearly equal entries.
fn cluster_descending(s: &[f64], gap: f64) -> Vec<(usize, usize)> {
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..s.len() {
        if s[i - 1] - s[i] > gap {
            clusters.push((start, i));
            start = i;
        }
    }
    if !s.is_empty() {
        clusters.push((start, s.len()));
    }
    clusters
}

/// Takagi factorization of a symmetric *unitary* Q: returns unitary W with
/// Q = W W^T. Uses the splitting Q = X + iY with X, Y real symmetric and
/// commuting; a common real orthogonal eigenbasis diagonalizes Q.
fn takagi_symmetric_unitary(q: &CMat) -> Result<CMat, LinalgError> {
    let n = q.nrows();
    // eigenvalues of Q are phases e^{i phi}; split along a generic direction
    // theta so that the first pass sees cos(phi - theta) and the second pass
    // sin(phi - theta). Distinct phases can only collide in one of the two,
    // so the pair of passes always separates them. Splitting along the plain
    // real/imaginary axes instead breaks down for phases near +/- pairs.
    let (sin_t, cos_t) = 0.6154797086703874f64.sin_cos();
    let x: Array2<f64> = q.mapv(|v| cos_t * v.re + sin_t * v.im);
    let (xe, xv) = x.eigh(UPLO::Lower)?;
    // eigh returns ascending; clustering below only needs grouping, not order
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| xe[j].partial_cmp(&xe[i]).unwrap());
    let xe_sorted: Vec<f64> = order.iter().map(|&i| xe[i]).collect();
    let mut o = Array2::<f64>::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        o.column_mut(col).assign(&xv.column(src));
    }
    // Within each eigenvalue cluster of the first pass, diagonalize the
    // restriction of the orthogonal direction.
    // Loose clustering: near-degenerate first-pass eigenvalues give
    // cross-contaminated eigenvectors, so send them through the exact
    // second-pass diagonalization rather than trusting them.
    let y: Array2<f64> = q.mapv(|v| -sin_t * v.re + cos_t * v.im);
    for (lo, hi) in cluster_descending(&xe_sorted, 1e-5) {
        let w = hi - lo;
        if w > 1 {
            let block = o.slice(s![.., lo..hi]).to_owned();
            let ysub = block.t().dot(&y).dot(&block);
            let ysub = (&ysub + &ysub.t()) / 2.0;
            let (_, yv) = ysub.eigh(UPLO::Lower)?;
            let rotated = block.dot(&yv);
            o.slice_mut(s![.., lo..hi]).assign(&rotated);
        }
    }
    let oc: CMat = o.mapv(|v| C64::new(v, 0.0));
    // D = O^T Q O should now be diagonal with unit-modulus entries.
    let d = oc.t().dot(q).dot(&oc);
    let mut half = eye(n);
    let mut offdiag = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                offdiag += d[(i, j)].norm_sqr();
            }
        }
        let phi = d[(i, i)].arg();
        half[(i, i)] = C64::from_polar(1.0, phi / 2.0);
    }
    let offdiag = offdiag.sqrt();
    if offdiag > 1e-5 * (n as f64) {
        return Err(LinalgError::Numeric(
            "takagi: symmetric-unitary block did not diagonalize".into(),
            offdiag,
        ));
    }
    Ok(oc.dot(&half))
}

/// Takagi-Autonne decomposition of a complex symmetric matrix:
/// A = F diag(r) F^T with F unitary and r >= 0 descending.
///
/// Computed from the SVD A = U S V^H: the symmetric matrix B = U^H A U* is
/// block diagonal over clusters of equal singular values, and each block
/// divided by its singular value is a symmetric unitary whose Takagi factor
/// repairs the phases of the corresponding columns of U.
pub fn takagi_autonne(a: &CMat, tol: f64) -> Result<TakagiResult, LinalgError> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(LinalgError::Dimension(format!(
            "takagi: {}x{} not square",
            n,
            a.ncols()
        )));
    }
    let sym_res = fro_norm(&(a - &a.t().to_owned()));
    if sym_res > tol.max(1e-12 * fro_norm(a).max(1.0)) {
        return Err(LinalgError::Precondition(format!(
            "takagi: input not symmetric, ||A - A^T|| = {sym_res:.3e}"
        )));
    }

    let (u, sv, _) = a.svd(true, false)?;
    let u = u.ok_or_else(|| LinalgError::Backend("svd: U missing".into()))?;
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    let mut values: Vec<f64> = sv.iter().map(|&x| if x < SV_CLAMP * smax { 0.0 } else { x }).collect();

    let b = dagger(&u).dot(a).dot(&conj(&u));
    let mut w = eye(n);
    for (lo, hi) in cluster_descending(&values, (1e-7 * smax).max(1e-300)) {
        let sigma = values[lo..hi].iter().sum::<f64>() / (hi - lo) as f64;
        if sigma == 0.0 {
            continue; // zero block: any unitary works, keep identity
        }
        let mut q = b.slice(s![lo..hi, lo..hi]).mapv(|x| x / sigma);
        q = (&q + &q.t()) / C64::new(2.0, 0.0);
        let wc = takagi_symmetric_unitary(&q)?;
        w.slice_mut(s![lo..hi, lo..hi]).assign(&wc);
    }
    let f = u.dot(&w);

    // validate the reconstruction
    let mut recon = CMat::zeros((n, n));
    for lam in 0..n {
        let col = f.column(lam);
        let s_l = C64::new(values[lam], 0.0);
        for i in 0..n {
            for j in 0..n {
                recon[(i, j)] += s_l * col[i] * col[j];
            }
        }
    }
    let res = fro_norm(&(&recon - a));
    let thresh = tol.max(1e-8 * smax.max(1.0) * n as f64);
    if res > thresh {
        return Err(LinalgError::Numeric("takagi: reconstruction failed".into(), res));
    }
    // exact descending order can be disturbed by clamping only; values stay sorted
    values.iter_mut().for_each(|v| *v = v.max(0.0));
    Ok(TakagiResult { f, values })
}

/// Residuals of the symplectic conditions for a (V, W) block pair.
#[derive(Debug, Clone, Copy)]
pub struct SymplecticCheck {
    /// ‖W V^T − V W^T‖_F
    pub commute_residual: f64,
    /// ‖V* V^T − W* W^T − 1‖_F
    pub identity_residual: f64,
    pub pass: bool,
}

/// Check W V^T = V W^T and V* V^T − W* W^T = 1.
pub fn validate_symplectic(v: &CMat, w: &CMat, tol: f64) -> Result<SymplecticCheck, LinalgError> {
    let n = v.nrows();
    if v.ncols() != n || w.nrows() != n || w.ncols() != n {
        return Err(LinalgError::Dimension(
            "validate_symplectic: V, W must be square and equal size".into(),
        ));
    }
    let c1 = w.dot(&v.t()) - v.dot(&w.t());
    let c2 = conj(v).dot(&v.t()) - conj(w).dot(&w.t()) - eye(n);
    let r1 = fro_norm(&c1);
    let r2 = fro_norm(&c2);
    Ok(SymplecticCheck {
        commute_residual: r1,
        identity_residual: r2,
        pass: r1 <= tol && r2 <= tol,
    })
}

/// Joint singular value decomposition of a Bogoliubov pair:
/// V = F [⊕ cosh r] G and W = F [⊕ sinh r] G*, r >= 0 descending.
pub fn joint_bogoliubov_svd(
    v: &CMat,
    w: &CMat,
    tol: f64,
) -> Result<(CMat, CMat, Vec<f64>), LinalgError> {
    let check = validate_symplectic(v, w, tol)?;
    if !check.pass {
        return Err(LinalgError::Precondition(format!(
            "joint_bogoliubov_svd: not symplectic (residuals {:.3e}, {:.3e})",
            check.commute_residual, check.identity_residual
        )));
    }
    let n = v.nrows();
    let m = w.dot(&v.t());
    let m = (&m + &m.t()) / C64::new(2.0, 0.0);
    let tak = takagi_autonne(&m, tol.max(1e-10))?;
    let r: Vec<f64> = tak.values.iter().map(|&s| 0.5 * (2.0 * s).asinh()).collect();
    let f = tak.f;
    // G = [⊕ 1/cosh r] F^H V  (cosh r >= 1, always invertible)
    let mut g = dagger(&f).dot(v);
    for lam in 0..n {
        let c = C64::new(1.0 / r[lam].cosh(), 0.0);
        g.row_mut(lam).mapv_inplace(|x| x * c);
    }
    // guard against accumulated non-unitarity
    let g = polar_unitary(&g)?;
    // verify both reconstructions
    let mut vres = CMat::zeros((n, n));
    let mut wres = CMat::zeros((n, n));
    for lam in 0..n {
        let ch = C64::new(r[lam].cosh(), 0.0);
        let sh = C64::new(r[lam].sinh(), 0.0);
        for i in 0..n {
            for j in 0..n {
                vres[(i, j)] += f[(i, lam)] * ch * g[(lam, j)];
                wres[(i, j)] += f[(i, lam)] * sh * g[(lam, j)].conj();
            }
        }
    }
    let res = fro_norm(&(&vres - v)).max(fro_norm(&(&wres - w)));
    let scale = fro_norm(v).max(1.0);
    if res > (10.0 * tol).max(1e-8) * scale {
        return Err(LinalgError::Numeric(
            "joint_bogoliubov_svd: reconstruction failed".into(),
            res,
        ));
    }
    Ok((f, g, r))
}

/// Principal Hermitian logarithm of a unitary: phi with exp(i phi) = U.
pub fn unitary_log(u: &CMat, tol: f64) -> Result<CMat, LinalgError> {
    let res = unitarity_residual(u);
    if res > tol {
        return Err(LinalgError::Precondition(format!(
            "unitary_log: input not unitary, residual {res:.3e}"
        )));
    }
    let (vals, vecs) = u.eig()?;
    let n = u.nrows();
    let mut d = CMat::zeros((n, n));
    for k in 0..n {
        d[(k, k)] = C64::new(vals[k].arg(), 0.0);
    }
    let vinv = vecs.inv()?;
    let phi = vecs.dot(&d).dot(&vinv);
    // Hermitize to wash out eigenvector conditioning noise.
    let phi = (&phi + &dagger(&phi)) / C64::new(2.0, 0.0);
    let back = matrix_exp(&phi.mapv(|x| x * I));
    let rres = fro_norm(&(&back - u));
    if rres > (100.0 * tol).max(1e-8) * (n as f64) {
        return Err(LinalgError::Numeric("unitary_log: round trip failed".into(), rres));
    }
    Ok(phi)
}
