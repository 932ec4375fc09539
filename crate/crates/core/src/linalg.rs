//! Dense and tridiagonal symmetric eigen-machinery plus Haar-orthogonal
//! sampling. Everything else in the crate builds on this module.
//!
//! Dense factorizations are delegated to LAPACK (via `ndarray-linalg`);
//! the tridiagonal path is a hand-rolled Sturm-count bisection so that
//! extreme eigenvalues of very large matrices stay O(n) in memory.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Cholesky, Determinant, Eigh, EigValsh, QR, UPLO};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Real symmetric matrix. The lower triangle is authoritative: the
/// constructor mirrors it into the upper triangle, so symmetry holds
/// exactly as stored.
#[derive(Debug, Clone)]
pub struct SymMatrix {
    data: Array2<f64>,
}

impl SymMatrix {
    /// Build from an arbitrary square array, mirroring the lower triangle.
    pub fn from_lower(mut a: Array2<f64>) -> Result<Self> {
        let n = a.nrows();
        if n == 0 || a.ncols() != n {
            return Err(Error::InvalidInput(format!(
                "symmetric matrix must be square and non-empty, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                a[(i, j)] = a[(j, i)];
            }
        }
        Ok(Self { data: a })
    }

    /// Symmetrize an approximately symmetric array as (A + Aᵀ)/2.
    pub fn symmetrized(a: &Array2<f64>) -> Result<Self> {
        let sym = 0.5 * (a + &a.t());
        Self::from_lower(sym)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: Array2::eye(n),
        }
    }

    pub fn from_diag(d: &[f64]) -> Self {
        Self {
            data: Array2::from_diag(&Array1::from_vec(d.to_vec())),
        }
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.data
    }

    fn check_finite(&self) -> Result<()> {
        if self.data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(
                "matrix contains non-finite entries".into(),
            ));
        }
        Ok(())
    }
}

/// Symmetric tridiagonal matrix: `diag` has length n, `offdiag` length n-1.
#[derive(Debug, Clone)]
pub struct TriDiag {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TriDiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidInput(format!(
                "tridiagonal dimensions inconsistent: diag {}, offdiag {}",
                diag.len(),
                offdiag.len()
            )));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> SymMatrix {
        let n = self.n();
        let mut a = Array2::zeros((n, n));
        for i in 0..n {
            a[(i, i)] = self.diag[i];
            if i + 1 < n {
                a[(i + 1, i)] = self.offdiag[i];
            }
        }
        SymMatrix::from_lower(a).expect("square by construction")
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.offdiag[i - 1].abs();
            }
            if i + 1 < n {
                r += self.offdiag[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }
}

/// Real orthogonal matrix with determinant +1.
#[derive(Debug, Clone)]
pub struct OrthogonalMatrix {
    data: Array2<f64>,
}

impl OrthogonalMatrix {
    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.data
    }

    /// Max-abs deviation of QᵀQ from the identity.
    pub fn orthogonality_defect(&self) -> f64 {
        let g = self.data.t().dot(&self.data);
        let n = self.n();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - target).abs());
            }
        }
        worst
    }
}

/// Eigenvalues of a symmetric matrix, sorted descending.
pub fn sym_eigs(m: &SymMatrix) -> Result<Vec<f64>> {
    m.check_finite()?;
    let mut vals = m
        .data
        .eigvalsh(UPLO::Lower)
        .map_err(|e| Error::InvalidInput(format!("eigendecomposition failed: {e}")))?
        .to_vec();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(vals)
}

/// Full eigendecomposition; eigenvalues descending, columns of the returned
/// matrix are the matching eigenvectors.
pub fn sym_eigh(m: &SymMatrix) -> Result<(Vec<f64>, Array2<f64>)> {
    m.check_finite()?;
    let (vals, vecs) = m
        .data
        .eigh(UPLO::Lower)
        .map_err(|e| Error::InvalidInput(format!("eigendecomposition failed: {e}")))?;
    let n = vals.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).unwrap());
    let sorted_vals: Vec<f64> = idx.iter().map(|&i| vals[i]).collect();
    let mut sorted_vecs = Array2::zeros((n, n));
    for (col, &i) in idx.iter().enumerate() {
        sorted_vecs.column_mut(col).assign(&vecs.column(i));
    }
    Ok((sorted_vals, sorted_vecs))
}

/// Smallest pivot of the (attempted) Cholesky factorization of `a`.
/// Used to produce an informative error when LAPACK reports failure.
fn smallest_cholesky_pivot(a: &Array2<f64>) -> f64 {
    let n = a.nrows();
    let mut l = Array2::<f64>::zeros((n, n));
    let mut smallest = f64::INFINITY;
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        smallest = smallest.min(d);
        if d <= 0.0 {
            return smallest;
        }
        let dj = d.sqrt();
        l[(j, j)] = dj;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / dj;
        }
    }
    smallest
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
pub fn cholesky_lower(m: &SymMatrix) -> Result<Array2<f64>> {
    m.check_finite()?;
    m.data.cholesky(UPLO::Lower).map_err(|_| Error::SingularPencil {
        pivot: smallest_cholesky_pivot(&m.data),
    })
}

/// Solve L X = B for X with L lower triangular. Forward substitution,
/// organized as row operations so every inner update is a contiguous axpy.
pub fn solve_lower(l: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let n = l.nrows();
    let m = b.ncols();
    let mut x = b.as_standard_layout().into_owned();
    let buf = x.as_slice_mut().expect("standard layout by construction");
    for i in 0..n {
        let (solved, rest) = buf.split_at_mut(i * m);
        let row = &mut rest[..m];
        for k in 0..i {
            let lik = l[(i, k)];
            if lik != 0.0 {
                let rk = &solved[k * m..(k + 1) * m];
                for (r, &v) in row.iter_mut().zip(rk) {
                    *r -= lik * v;
                }
            }
        }
        let pivot = l[(i, i)];
        for r in row.iter_mut() {
            *r /= pivot;
        }
    }
    x
}

/// Generalized symmetric-definite eigenvalues: the λ solving
/// det(A - λB) = 0 with B positive definite, descending. Solved by the
/// Cholesky congruence B = LLᵀ followed by a standard symmetric problem
/// for L⁻¹AL⁻ᵀ.
pub fn gen_eigs_spd(a: &SymMatrix, b: &SymMatrix) -> Result<Vec<f64>> {
    a.check_finite()?;
    if a.n() != b.n() {
        return Err(Error::InvalidInput(format!(
            "pencil dimensions differ: {} vs {}",
            a.n(),
            b.n()
        )));
    }
    let l = cholesky_lower(b)?;
    // W = L⁻¹ A L⁻ᵀ, formed by two triangular solves.
    let y = solve_lower(&l, a.as_array()); // L⁻¹ A
    let w = solve_lower(&l, &y.t().to_owned()); // L⁻¹ (L⁻¹A)ᵀ = L⁻¹AᵀL⁻ᵀ
    let w = SymMatrix::symmetrized(&w)?;
    sym_eigs(&w)
}

/// Haar-distributed matrix from SO(n): QR of an i.i.d. standard Gaussian
/// matrix with the sign convention R_ii > 0, then one column negated if
/// needed to land in the determinant +1 component.
pub fn haar_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<OrthogonalMatrix> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let g = Array2::from_shape_simple_fn((n, n), || rng.sample::<f64, _>(StandardNormal));
    let (mut q, r) = g
        .qr()
        .map_err(|e| Error::InvalidInput(format!("QR failed: {e}")))?;
    for i in 0..n {
        if r[(i, i)] < 0.0 {
            q.column_mut(i).mapv_inplace(|x| -x);
        }
    }
    let det = q.det().map_err(|e| Error::InvalidInput(format!("det failed: {e}")))?;
    if det < 0.0 {
        q.column_mut(0).mapv_inplace(|x| -x);
    }
    Ok(OrthogonalMatrix { data: q })
}

/// Haar-distributed unitary matrix (used by the β = 2 Jacobi samplers).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Array2<Complex64>> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let g = Array2::from_shape_simple_fn((n, n), || {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        )
    });
    let (mut q, r) = g
        .qr()
        .map_err(|e| Error::InvalidInput(format!("QR failed: {e}")))?;
    for i in 0..n {
        let rii = r[(i, i)];
        if rii.norm() > 0.0 {
            let phase = rii / rii.norm();
            let scale = phase.conj();
            q.column_mut(i).mapv_inplace(|x| x * scale);
        }
    }
    Ok(q)
}

/// Number of eigenvalues of `t` strictly below `x`, by the LDLᵀ inertia
/// (Sturm sequence) recurrence.
pub fn sturm_count_below(t: &TriDiag, x: f64) -> usize {
    let n = t.n();
    let mut count = 0usize;
    let mut q = t.diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        if q == 0.0 {
            q = -f64::MIN_POSITIVE;
        }
        let e = t.offdiag[i - 1];
        q = t.diag[i] - x - e * e / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` largest eigenvalues of a symmetric tridiagonal matrix,
/// descending, via Sturm counting + bisection. O(n) memory, absolute
/// tolerance 1e-10 times the Gershgorin radius.
pub fn tridiag_top_eigs(t: &TriDiag, k: usize) -> Result<Vec<f64>> {
    let n = t.n();
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!(
            "requested {k} eigenvalues of a {n}-dimensional matrix"
        )));
    }
    if t.diag.iter().chain(t.offdiag.iter()).any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(
            "tridiagonal matrix contains non-finite entries".into(),
        ));
    }
    let (glo, ghi) = t.gershgorin();
    let radius = (ghi - glo).abs().max(ghi.abs()).max(glo.abs()).max(1.0);
    let tol = 1e-10 * radius;

    let mut out = Vec::with_capacity(k);
    let mut upper = ghi;
    for i in 1..=k {
        // The i-th largest eigenvalue λ satisfies: count_below(x) >= n-i+1
        // exactly for x > λ.
        let target = n - i + 1;
        let mut lo = glo;
        let mut hi = upper;
        // Previous eigenvalue is a valid upper bound for the next one.
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if sturm_count_below(t, mid) >= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let lam = 0.5 * (lo + hi);
        out.push(lam);
        upper = lam + tol;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Characteristic polynomial coefficients of a small matrix by
    /// Faddeev-LeVerrier: returns c so that det(λI - M) = Σ c[k] λ^k.
    fn char_poly(m: &Array2<f64>) -> Vec<f64> {
        let n = m.nrows();
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        let mut aux = Array2::<f64>::eye(n);
        for k in 1..=n {
            aux = m.dot(&aux);
            let c = -aux.diag().sum() / k as f64;
            coeffs[n - k] = c;
            for i in 0..n {
                aux[(i, i)] += c;
            }
        }
        coeffs
    }

    fn poly_eval(c: &[f64], x: f64) -> f64 {
        c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck)
    }

    /// All real roots of a polynomial with exclusively real roots, via the
    /// classical Sturm chain (polynomial remainder sequence) + bisection.
    /// Independent of any matrix eigensolver.
    fn sturm_chain_roots(c: &[f64], lo: f64, hi: f64) -> Vec<f64> {
        fn deriv(p: &[f64]) -> Vec<f64> {
            p.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &ci)| ci * i as f64)
                .collect()
        }
        fn rem(num: &[f64], den: &[f64]) -> Vec<f64> {
            let mut r = num.to_vec();
            let dd = den.len() - 1;
            while r.len() >= den.len() && r.len() > 1 {
                let k = r.len() - 1;
                let f = r[k] / den[dd];
                let shift = k - dd;
                for i in 0..den.len() {
                    r[shift + i] -= f * den[i];
                }
                r.pop();
            }
            while r.len() > 1 && r.last().unwrap().abs() < 1e-300 {
                r.pop();
            }
            r
        }
        let mut chain = vec![c.to_vec(), deriv(c)];
        loop {
            let k = chain.len();
            let r = rem(&chain[k - 2], &chain[k - 1]);
            if r.len() == 1 && r[0].abs() < 1e-12 {
                break;
            }
            let neg: Vec<f64> = r.iter().map(|x| -x).collect();
            let degree = neg.len() - 1;
            chain.push(neg);
            if degree == 0 {
                break;
            }
        }
        let sign_changes = |x: f64| -> usize {
            let mut prev = 0.0f64;
            let mut changes = 0;
            for p in &chain {
                let v = poly_eval(p, x);
                if v != 0.0 {
                    if prev != 0.0 && v.signum() != prev.signum() {
                        changes += 1;
                    }
                    prev = v;
                }
            }
            changes
        };
        let n_roots_below = |x: f64| sign_changes(lo) as isize - sign_changes(x) as isize;
        let total = n_roots_below(hi);
        let mut roots = Vec::new();
        for i in 1..=total {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if n_roots_below(mid) >= i {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        roots.reverse(); // descending
        roots
    }

    #[test]
    fn sym_eigs_identity_and_diag() {
        let eye = SymMatrix::identity(3);
        assert_eq!(sym_eigs(&eye).unwrap(), vec![1.0, 1.0, 1.0]);
        let d = SymMatrix::from_diag(&[2.0, -1.0]);
        assert_eq!(sym_eigs(&d).unwrap(), vec![2.0, -1.0]);
    }

    #[test]
    fn sym_eigs_matches_char_poly_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let g = Array2::from_shape_simple_fn((5, 5), || {
                rng.sample::<f64, _>(StandardNormal)
            });
            let m = SymMatrix::symmetrized(&g).unwrap();
            let eigs = sym_eigs(&m).unwrap();
            let c = char_poly(m.as_array());
            let bound = 1.0
                + m.as_array()
                    .rows()
                    .into_iter()
                    .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
                    .fold(0.0f64, f64::max);
            let roots = sturm_chain_roots(&c, -bound, bound);
            assert_eq!(roots.len(), 5);
            for (a, b) in eigs.iter().zip(roots.iter()) {
                assert!((a - b).abs() < 1e-8, "eig {a} vs root {b}");
            }
        }
    }

    #[test]
    fn sym_eigs_rejects_non_finite() {
        let mut a = Array2::<f64>::eye(2);
        a[(0, 1)] = f64::NAN;
        a[(1, 0)] = f64::NAN;
        let m = SymMatrix::from_lower(a).unwrap();
        assert!(matches!(sym_eigs(&m), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn sym_eigh_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = Array2::from_shape_simple_fn((6, 6), || rng.sample::<f64, _>(StandardNormal));
        let m = SymMatrix::symmetrized(&g).unwrap();
        let (vals, vecs) = sym_eigh(&m).unwrap();
        let lam = Array2::from_diag(&Array1::from_vec(vals));
        let rec = vecs.dot(&lam).dot(&vecs.t());
        let scale = m.as_array().iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        let err = (&rec - m.as_array())
            .iter()
            .fold(0.0f64, |a, &x| a.max(x.abs()));
        assert!(err <= 1e-8 * scale.max(1.0));
    }

    /// det(A - λB) as a polynomial in λ by brute-force permanent-style
    /// expansion over all permutations (n = 4: 24 terms).
    fn pencil_det_poly(a: &Array2<f64>, b: &Array2<f64>) -> Vec<f64> {
        fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
            fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, f64)>) {
                let n = used.len();
                if cur.len() == n {
                    // parity by counting inversions
                    let mut inv = 0;
                    for i in 0..n {
                        for j in (i + 1)..n {
                            if cur[i] > cur[j] {
                                inv += 1;
                            }
                        }
                    }
                    out.push((cur.clone(), if inv % 2 == 0 { 1.0 } else { -1.0 }));
                    return;
                }
                for v in 0..n {
                    if !used[v] {
                        used[v] = true;
                        cur.push(v);
                        go(cur, used, out);
                        cur.pop();
                        used[v] = false;
                    }
                }
            }
            let mut out = Vec::new();
            go(&mut Vec::new(), &mut vec![false; n], &mut out);
            out
        }
        fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
            let mut r = vec![0.0; p.len() + q.len() - 1];
            for (i, &pi) in p.iter().enumerate() {
                for (j, &qj) in q.iter().enumerate() {
                    r[i + j] += pi * qj;
                }
            }
            r
        }
        let n = a.nrows();
        let mut acc = vec![0.0; n + 1];
        for (perm, sign) in permutations(n) {
            let mut term = vec![sign];
            for (i, &j) in perm.iter().enumerate() {
                term = poly_mul(&term, &[a[(i, j)], -b[(i, j)]]);
            }
            for (k, &c) in term.iter().enumerate() {
                acc[k] += c;
            }
        }
        acc
    }

    #[test]
    fn gen_eigs_trivial_cases() {
        let i2 = SymMatrix::identity(2);
        assert_eq!(gen_eigs_spd(&i2, &i2).unwrap(), vec![1.0, 1.0]);
        let a = SymMatrix::from_diag(&[1.0, 0.0]);
        assert_eq!(gen_eigs_spd(&a, &i2).unwrap(), vec![1.0, 0.0]);
    }

    #[test]
    fn gen_eigs_matches_determinant_polynomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let g = Array2::from_shape_simple_fn((4, 4), || {
                rng.sample::<f64, _>(StandardNormal)
            });
            let a = SymMatrix::symmetrized(&g).unwrap();
            let h = Array2::from_shape_simple_fn((4, 4), || {
                rng.sample::<f64, _>(StandardNormal)
            });
            let b_raw = h.dot(&h.t()) + 4.0 * Array2::<f64>::eye(4);
            let b = SymMatrix::from_lower(b_raw).unwrap();
            let eigs = gen_eigs_spd(&a, &b).unwrap();
            let poly = pencil_det_poly(a.as_array(), b.as_array());
            let bound = 1.0 + eigs.iter().fold(0.0f64, |m, &x| m.max(x.abs())) * 2.0 + 10.0;
            let roots = sturm_chain_roots(&poly, -bound, bound);
            assert_eq!(roots.len(), 4);
            for (e, r) in eigs.iter().zip(roots.iter()) {
                assert!((e - r).abs() < 1e-8, "pencil eig {e} vs det root {r}");
            }
        }
    }

    #[test]
    fn gen_eigs_reports_singular_pencil() {
        let a = SymMatrix::identity(2);
        let b = SymMatrix::from_diag(&[1.0, 0.0]);
        match gen_eigs_spd(&a, &b) {
            Err(Error::SingularPencil { pivot }) => assert!(pivot <= 0.0),
            other => panic!("expected singular pencil, got {other:?}"),
        }
    }

    #[test]
    fn gen_eigs_equals_congruence_route() {
        // gen_eigs_spd(A,B) must equal sym_eigs of B^{-1/2} A B^{-1/2}.
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..10 {
            let n = 5;
            let g = Array2::from_shape_simple_fn((n, n), || {
                rng.sample::<f64, _>(StandardNormal)
            });
            let a = SymMatrix::symmetrized(&g).unwrap();
            let h = Array2::from_shape_simple_fn((n, n), || {
                rng.sample::<f64, _>(StandardNormal)
            });
            let b = SymMatrix::from_lower(h.dot(&h.t()) + 3.0 * Array2::<f64>::eye(n)).unwrap();
            let eigs = gen_eigs_spd(&a, &b).unwrap();
            // B^{-1/2} via eigendecomposition of B.
            let (bv, bq) = sym_eigh(&b).unwrap();
            let inv_sqrt = Array2::from_diag(&Array1::from_vec(
                bv.iter().map(|x| 1.0 / x.sqrt()).collect(),
            ));
            let bis = bq.dot(&inv_sqrt).dot(&bq.t());
            let w = SymMatrix::symmetrized(&bis.dot(a.as_array()).dot(&bis)).unwrap();
            let alt = sym_eigs(&w).unwrap();
            for (x, y) in eigs.iter().zip(alt.iter()) {
                assert!((x - y).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn haar_n1_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let q = haar_orthogonal(1, &mut rng).unwrap();
        assert!((q.as_array()[(0, 0)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn haar_is_special_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2usize, 3, 7, 20] {
            let q = haar_orthogonal(n, &mut rng).unwrap();
            assert!(q.orthogonality_defect() < 1e-10);
            let det = q.as_array().det().unwrap();
            assert!((det - 1.0).abs() < 1e-8, "det {det}");
        }
    }

    #[test]
    fn haar_first_column_uniform_on_sphere() {
        // Oracle: direct sphere sampling via a normalized Gaussian vector
        // has first-coordinate mean 0; the Haar first column must agree.
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let reps = 100_000;
        let mut sum = 0.0;
        for _ in 0..reps {
            let q = haar_orthogonal(3, &mut rng).unwrap();
            sum += q.as_array()[(0, 0)];
        }
        let mean = sum / reps as f64;
        assert!(mean.abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn haar_left_invariance_moments() {
        // For fixed orthogonal P, PQ must have the same first/second entry
        // moments as Q. Checked within 3 Monte Carlo standard errors.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let p = haar_orthogonal(3, &mut rng).unwrap();
        let reps = 100_000usize;
        let mut m1 = [0.0f64; 2]; // E[Q_00], E[(PQ)_00]
        let mut m2 = [0.0f64; 2]; // E[Q_00^2], E[(PQ)_00^2]
        for _ in 0..reps {
            let q = haar_orthogonal(3, &mut rng).unwrap();
            let pq = p.as_array().dot(q.as_array());
            m1[0] += q.as_array()[(0, 0)];
            m1[1] += pq[(0, 0)];
            m2[0] += q.as_array()[(0, 0)].powi(2);
            m2[1] += pq[(0, 0)].powi(2);
        }
        let n = reps as f64;
        // Var of a sphere coordinate is 1/3; se of the mean ~ sqrt(1/3/n).
        let se1 = (1.0f64 / 3.0 / n).sqrt();
        let se2 = (0.2f64 / n).sqrt();
        assert!((m1[0] / n - m1[1] / n).abs() < 3.0 * se1 * 1.5);
        assert!((m2[0] / n - m2[1] / n).abs() < 3.0 * se2 * 1.5);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let q = haar_unitary(6, &mut rng).unwrap();
        let g = q.t().mapv(|x| x.conj()).dot(&q);
        for i in 0..6 {
            for j in 0..6 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((g[(i, j)] - Complex64::new(target, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn tridiag_decoupled_diagonal() {
        let t = TriDiag::new(vec![3.0, 1.0, 2.0], vec![0.0, 0.0]).unwrap();
        let top = tridiag_top_eigs(&t, 2).unwrap();
        assert!((top[0] - 3.0).abs() < 1e-9);
        assert!((top[1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn tridiag_k_too_large_errors() {
        let t = TriDiag::new(vec![1.0, 2.0], vec![0.5]).unwrap();
        assert!(tridiag_top_eigs(&t, 3).is_err());
    }

    #[test]
    fn tridiag_matches_dense_n50() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let diag: Vec<f64> = (0..50).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let off: Vec<f64> = (0..49).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let t = TriDiag::new(diag, off).unwrap();
        let top = tridiag_top_eigs(&t, 5).unwrap();
        let dense = sym_eigs(&t.to_dense()).unwrap();
        for (a, b) in top.iter().zip(dense.iter()) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn tridiag_matches_dense_random_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let n = 1 + rng.random_range(0..200usize);
            let diag: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let off: Vec<f64> = (0..n.saturating_sub(1))
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect();
            let t = TriDiag::new(diag, off).unwrap();
            let k = 1 + rng.random_range(0..n);
            let top = tridiag_top_eigs(&t, k).unwrap();
            let dense = sym_eigs(&t.to_dense()).unwrap();
            for (a, b) in top.iter().zip(dense.iter()) {
                assert!((a - b).abs() < 1e-8, "n={n} k={k}: {a} vs {b}");
            }
        }
    }
}
