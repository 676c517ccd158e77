//! Dense exact linear algebra over [`Scalar`] plus a thin numeric eigen layer.
//!
//! Identity checks run entirely over the exact field (rref, kernel, solve,
//! LDL^† positivity). Spectra are the one place floating point is allowed:
//! matrices embed into real symmetric form and go through nalgebra.

use crate::scalar::Scalar;
use nalgebra::DMatrix;

/// Row-major dense matrix over the Gaussian rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for k in 0..n {
            m.set(k, k, Scalar::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    /// Matrix with the given columns.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Mat::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for r in 0..rows {
                m.set(r, c, col[r].clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Scalar) {
        let idx = r * self.cols + c;
        let cur = self.data[idx].clone();
        self.data[idx] = cur + v;
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c).clone() + rhs.at(r, c))
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c).clone() - rhs.at(r, c).clone())
    }

    pub fn neg(&self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |r, c| -self.at(r, c))
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c) * s)
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    out.add_at(r, c, &(a * b));
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![Scalar::zero(); self.rows];
        for r in 0..self.rows {
            let mut acc = Scalar::zero();
            for c in 0..self.cols {
                let a = self.at(r, c);
                if !a.is_zero() && !v[c].is_zero() {
                    acc += a * &v[c];
                }
            }
            out[r] = acc;
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn conj(&self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c).conj())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self.at(c, r).conj())
    }

    pub fn commutator(&self, rhs: &Mat) -> Mat {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// Kronecker product `self ⊗ rhs` in row-major block convention.
    pub fn kron(&self, rhs: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.at(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..rhs.rows {
                    for c2 in 0..rhs.cols {
                        let b = rhs.at(r2, c2);
                        if !b.is_zero() {
                            out.set(r1 * rhs.rows + r2, c1 * rhs.cols + c2, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Largest entry modulus after f64 embedding; deviation metric for reports.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.abs_f64()).fold(0.0, f64::max)
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self.at(row, col).inv();
            for c in col..self.cols {
                let v = self.at(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let f = self.at(r, col).clone();
                    for c in col..self.cols {
                        let v = self.at(r, c).clone() - &f * self.at(row, c);
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Columns spanning the null space, in deterministic free-column order.
    pub fn kernel(&self) -> Mat {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut cols = Vec::new();
        for &f in &free {
            let mut v = vec![Scalar::zero(); self.cols];
            v[f] = Scalar::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m.at(i, f);
            }
            cols.push(v);
        }
        Mat::from_columns(self.cols, &cols)
    }

    /// Exact solve `self · X = rhs`; `None` if any column is inconsistent.
    /// When the system is underdetermined the free coordinates are set to 0.
    pub fn solve(&self, rhs: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, rhs.rows);
        let mut aug = Mat::zeros(self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c).clone());
            }
            for c in 0..rhs.cols {
                aug.set(r, self.cols + c, rhs.at(r, c).clone());
            }
        }
        let pivots = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(p, c, aug.at(i, self.cols + c).clone());
            }
        }
        Some(x)
    }

    /// Exact LDL^† factorization of a hermitian matrix.
    ///
    /// Returns the diagonal of D (real scalars) when every leading pivot is
    /// nonzero; positive definiteness is equivalent to all entries positive.
    pub fn ldlt_diagonal(&self) -> Option<Vec<Scalar>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut l = Mat::identity(n);
        let mut d: Vec<Scalar> = Vec::with_capacity(n);
        for j in 0..n {
            let mut dj = self.at(j, j).clone();
            for k in 0..j {
                dj -= l.at(j, k) * &l.at(j, k).conj() * &d[k];
            }
            if dj.is_zero() {
                return None;
            }
            for i in (j + 1)..n {
                let mut v = self.at(i, j).clone();
                for k in 0..j {
                    v -= l.at(i, k) * &l.at(j, k).conj() * &d[k];
                }
                l.set(i, j, v * &dj.inv());
            }
            d.push(dj);
        }
        Some(d)
    }

    /// Exact positive-definiteness test for a hermitian matrix.
    pub fn is_positive_definite(&self) -> bool {
        use num::traits::Signed;
        match self.ldlt_diagonal() {
            Some(d) => d.iter().all(|v| v.is_real() && v.re().is_positive()),
            None => false,
        }
    }

    /// Real symmetric embedding `[[Re, -Im], [Im, Re]]` of the f64 image.
    pub fn real_embedding(&self) -> DMatrix<f64> {
        let n = self.rows;
        let m = self.cols;
        let mut out = DMatrix::<f64>::zeros(2 * n, 2 * m);
        for r in 0..n {
            for c in 0..m {
                let z = self.at(r, c).to_complex();
                out[(r, c)] = z.re;
                out[(r, m + c)] = -z.im;
                out[(n + r, c)] = z.im;
                out[(n + r, m + c)] = z.re;
            }
        }
        out
    }
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.at(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Eigenvalues of a hermitian matrix, ascending, via the real embedding.
///
/// The embedding doubles every multiplicity; the duplicates are merged by the
/// caller-facing clustering in [`cluster_eigenvalues`].
pub fn hermitian_eigenvalues(h: &Mat) -> Vec<f64> {
    eigen_real_symmetric(h.real_embedding())
}

/// Eigenvalues of an operator `m` that is hermitian with respect to the
/// positive definite Gram matrix `g` (that is, `m† g = g m`).
pub fn gram_hermitian_eigenvalues(m: &Mat, g: &Mat) -> Vec<f64> {
    assert_eq!(m.rows(), m.cols());
    assert_eq!(g.rows(), g.cols());
    assert_eq!(m.rows(), g.rows());
    let gr = g.real_embedding();
    let mr = m.real_embedding();
    let chol = nalgebra::Cholesky::new(gr.clone())
        .expect("Gram matrix must be positive definite for the spectral path");
    let l = chol.l();
    // K = Lᵀ M L^{-T} is symmetric and similar to M.
    let zt = l
        .clone()
        .solve_lower_triangular(&mr.transpose())
        .expect("triangular solve failed");
    let k = l.transpose() * zt.transpose();
    let k = (k.clone() + k.transpose()) * 0.5;
    eigen_real_symmetric(k)
}

fn eigen_real_symmetric(m: DMatrix<f64>) -> Vec<f64> {
    let sym = (m.clone() + m.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(sym);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // The real embedding reports each complex eigenvalue twice.
    vals.into_iter().step_by(2).collect()
}

/// Bin sorted eigenvalues into (value, multiplicity) clusters with the given
/// gap threshold; the reported value is the cluster mean.
pub fn cluster_eigenvalues(sorted: &[f64], gap: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && (sorted[j] - sorted[j - 1]).abs() <= gap {
            j += 1;
        }
        let mean = sorted[i..j].iter().sum::<f64>() / (j - i) as f64;
        out.push((mean, j - i));
        i = j;
    }
    out
}

/// Matrix exponential of the f64 embedding, by scaling and squaring.
pub fn expm(m: &Mat) -> DMatrix<num::complex::Complex64> {
    use num::complex::Complex64;
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let mut a = DMatrix::<Complex64>::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            a[(r, c)] = m.at(r, c).to_complex();
        }
    }
    let norm: f64 = a.iter().map(|z| z.norm()).fold(0.0, f64::max) * n as f64;
    let squarings = norm.log2().ceil().max(0.0) as u32 + 1;
    let scaled = a / Complex64::new(2f64.powi(squarings as i32), 0.0);
    let mut result = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..30 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rref_kernel_and_solve() {
        // x + y + z = 0 has a 2-dimensional kernel.
        let m = Mat::from_fn(1, 3, |_, _| s(1));
        let k = m.kernel();
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());

        let a = Mat::from_fn(2, 2, |r, c| s([[2, 1], [1, 3]][r][c]));
        let rhs = Mat::from_columns(2, &[vec![s(5), s(10)]]);
        let x = a.solve(&rhs).unwrap();
        assert_eq!(a.mul(&x), rhs);
    }

    #[test]
    fn inconsistent_solve_is_detected() {
        let a = Mat::from_fn(2, 1, |_, _| s(1));
        let rhs = Mat::from_columns(2, &[vec![s(1), s(2)]]);
        assert!(a.solve(&rhs).is_none());
    }

    #[test]
    fn ldlt_positivity() {
        let pd = Mat::from_fn(2, 2, |r, c| {
            if r == c {
                s(2)
            } else if (r, c) == (0, 1) {
                Scalar::i()
            } else {
                -Scalar::i()
            }
        });
        assert!(pd.is_positive_definite());
        let indef = Mat::from_fn(2, 2, |r, c| if r == c { s(if r == 0 { 1 } else { -1 }) } else { s(0) });
        assert!(!indef.is_positive_definite());
    }

    #[test]
    fn hermitian_eigenvalues_of_pauli_like_matrix() {
        // [[0, -i], [i, 0]] has eigenvalues ±1.
        let mut m = Mat::zeros(2, 2);
        m.set(0, 1, -Scalar::i());
        m.set(1, 0, Scalar::i());
        let vals = hermitian_eigenvalues(&m);
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gram_hermitian_path_matches_plain_path_for_identity_gram() {
        let mut m = Mat::zeros(2, 2);
        m.set(0, 1, Scalar::i());
        m.set(1, 0, -Scalar::i());
        let g = Mat::identity(2);
        let a = hermitian_eigenvalues(&m);
        let b = gram_hermitian_eigenvalues(&m, &g);
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn expm_of_rotation_generator() {
        // exp(π · [[0,-1],[1,0]]) = -id.
        let mut m = Mat::zeros(2, 2);
        m.set(0, 1, Scalar::from_ratio(-355, 113));
        m.set(1, 0, Scalar::from_ratio(355, 113));
        let e = expm(&m);
        assert!((e[(0, 0)].re + 1.0).abs() < 1e-4);
        assert!((e[(1, 1)].re + 1.0).abs() < 1e-4);
    }

    #[test]
    fn eigenvalue_clustering() {
        let vals = [1.0, 1.0 + 1e-9, 2.0, 2.0, 2.0];
        let c = cluster_eigenvalues(&vals, 1e-6);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1, 2);
        assert_eq!(c[1].1, 3);
    }
}
