//! Shared contract for finite total-space models: a truncated coefficient
//! algebra B_N carrying frame derivations X_i, an infinitesimal structure
//! group action, a center parity grading, a *-operation, a faithful state ν,
//! and a partial product with explicit overflow signaling.
//!
//! Derivations and the group action preserve the truncation exactly in both
//! shipped backends; only products can leave B_N, and when they do the model
//! reports [`ModelError::Overflow`] instead of projecting silently. The
//! combination ν(u·v) stays computable even past the truncation, which keeps
//! every inner product and integral total.

use crate::linalg::Mat;
use crate::scalar::Scalar;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("product leaves the level-{level} truncation")]
    Overflow { level: u32 },
    #[error("{0}")]
    Unsupported(String),
}

pub trait TotalSpaceModel {
    /// Frame dimension n (number of derivations X_i).
    fn n(&self) -> usize;

    /// Dimension of the truncated coefficient algebra B_N.
    fn dim(&self) -> usize;

    /// Truncation level parameter (max 2j for Peter–Weyl, word level for Cuntz).
    fn level(&self) -> u32;

    /// Human-readable label of a basis element.
    fn label(&self, i: usize) -> String;

    /// Id of the invariant block containing basis element i. Derivations,
    /// the group action, and the *-map never mix blocks with different ids,
    /// so kernel computations may run block by block.
    fn block_id(&self, i: usize) -> usize;

    /// Coordinates of the unit element.
    fn unit(&self) -> Vec<Scalar>;

    /// Matrix of the frame derivation X_i on B_N (0-based, i < n).
    fn xi(&self, i: usize) -> &Mat;

    /// Matrix of the infinitesimal structure group generator e_{kl}
    /// (0-based pair k < l < n) acting on B_N.
    fn coaction_gen(&self, k: usize, l: usize) -> &Mat;

    /// Center parity (±1) of each basis element.
    fn center_parity(&self) -> &[i8];

    /// The *-operation, as an antilinear map on coordinates.
    fn star(&self, v: &[Scalar]) -> Vec<Scalar>;

    /// The state ν on coordinates.
    fn nu(&self, v: &[Scalar]) -> Scalar;

    /// Product of two elements expanded over the basis; overflow is reported,
    /// never silently truncated.
    fn product(&self, u: &[Scalar], v: &[Scalar]) -> Result<Vec<Scalar>, ModelError>;

    /// ν(u·v), computed without truncating the product. Total.
    fn nu_product(&self, u: &[Scalar], v: &[Scalar]) -> Scalar;

    /// ⟨u, v⟩ = ν(u* v), the faithful inner product on B_N. Total.
    fn inner(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        self.nu_product(&self.star(u), v)
    }

    /// Basis coordinate vector e_i.
    fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[i] = Scalar::one();
        v
    }

    /// Gram matrix G_{ij} = ν(b_i* b_j) of the ν-inner product.
    fn gram(&self) -> Mat {
        let dim = self.dim();
        let stars: Vec<Vec<Scalar>> =
            (0..dim).map(|i| self.star(&self.basis_vector(i))).collect();
        Mat::from_fn(dim, dim, |i, j| self.nu_product(&stars[i], &self.basis_vector(j)))
    }
}
