//! Clifford algebra Cl_n (Euclidean signature) and its Fock spinor module.
//!
//! For even n = 2r the spinor space S is the exterior algebra of the
//! isotropic half V₊ spanned by w_j = (e_{2j-1} + i e_{2j})/√2, with basis
//! σ_I = ∧_{j∈I} w_j. The √2 normalizations cancel in every matrix entry, so
//! the gamma matrices are exact with entries in {0, ±1, ±i}.

use crate::exterior::{blade_degree, hodge_blade, merge_sign, reversal_sign, Blade};
use crate::linalg::Mat;
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CliffordError {
    #[error("spinor construction requires even dimension, got n = {n}")]
    OddDimension { n: usize },
}

/// Element of Cl_n as a sparse blade expansion (e_I for increasing I).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordElement {
    n: usize,
    terms: BTreeMap<Blade, Scalar>,
}

impl CliffordElement {
    pub fn zero(n: usize) -> Self {
        CliffordElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        let mut c = CliffordElement::zero(n);
        c.add_term(0, Scalar::one());
        c
    }

    pub fn generator(n: usize, i: usize) -> Self {
        assert!(i < n);
        let mut c = CliffordElement::zero(n);
        c.add_term(1 << i, Scalar::one());
        c
    }

    pub fn basis_blade(n: usize, b: Blade) -> Self {
        assert!(b < (1 << n));
        let mut c = CliffordElement::zero(n);
        c.add_term(b, Scalar::one());
        c
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Blade, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, b: Blade, s: Scalar) {
        if s.is_zero() {
            return;
        }
        let entry = self.terms.entry(b).or_insert_with(Scalar::zero);
        *entry += s;
        if entry.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add(&self, rhs: &CliffordElement) -> CliffordElement {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (b, s) in &rhs.terms {
            out.add_term(*b, s.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> CliffordElement {
        let mut out = CliffordElement::zero(self.n);
        for (b, v) in &self.terms {
            out.add_term(*b, v * s);
        }
        out
    }

    pub fn neg(&self) -> CliffordElement {
        self.scale(&Scalar::from_int(-1))
    }

    /// Clifford product with relations e_i e_j + e_j e_i = 2δ_{ij}.
    ///
    /// On blades: e_A e_B = (−1)^{inv(A,B)} e_{A Δ B}, where inv counts pairs
    /// i∈A, j∈B with i > j (shared generators square to +1).
    pub fn mul(&self, rhs: &CliffordElement) -> CliffordElement {
        assert_eq!(self.n, rhs.n);
        let mut out = CliffordElement::zero(self.n);
        for (a, sa) in &self.terms {
            for (b, sb) in &rhs.terms {
                let sign = merge_sign(*a, *b);
                let mut v = sa * sb;
                if sign < 0 {
                    v = -v;
                }
                out.add_term(a ^ b, v);
            }
        }
        out
    }

    /// The *-involution: antilinear, fixes generators, (ab)* = b*a*.
    pub fn conjugate(&self) -> CliffordElement {
        let mut out = CliffordElement::zero(self.n);
        for (b, s) in &self.terms {
            let sign = reversal_sign(blade_degree(*b));
            let v = s.conj();
            out.add_term(*b, if sign < 0 { -v } else { v });
        }
        out
    }
}

/// Spinor in the Fock basis σ_I, I ⊆ {0, .., r−1}, component index = bitmask.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Spinor {
    r: usize,
    comps: Vec<Scalar>,
}

impl Spinor {
    pub fn zero(r: usize) -> Self {
        Spinor { r, comps: vec![Scalar::zero(); 1 << r] }
    }

    /// Basis spinor σ_I for the subset bitmask `mask`.
    pub fn sigma(r: usize, mask: Blade) -> Self {
        assert!(mask < (1 << r));
        let mut s = Spinor::zero(r);
        s.comps[mask as usize] = Scalar::one();
        s
    }

    pub fn from_components(r: usize, comps: Vec<Scalar>) -> Self {
        assert_eq!(comps.len(), 1 << r);
        Spinor { r, comps }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn components(&self) -> &[Scalar] {
        &self.comps
    }

    pub fn scale(&self, s: &Scalar) -> Spinor {
        Spinor { r: self.r, comps: self.comps.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, rhs: &Spinor) -> Spinor {
        assert_eq!(self.r, rhs.r);
        Spinor {
            r: self.r,
            comps: self
                .comps
                .iter()
                .zip(rhs.comps.iter())
                .map(|(a, b)| a.clone() + b)
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// Split into (even-|I|, odd-|I|) parts; the sum reconstructs the
    /// spinor and every gamma matrix swaps the two parts.
    pub fn chirality_split(&self) -> (Spinor, Spinor) {
        let mut even = Spinor::zero(self.r);
        let mut odd = Spinor::zero(self.r);
        for (mask, c) in self.comps.iter().enumerate() {
            if (mask as u32).count_ones() % 2 == 0 {
                even.comps[mask] = c.clone();
            } else {
                odd.comps[mask] = c.clone();
            }
        }
        (even, odd)
    }
}

/// Inner product on S, conjugate-linear in the FIRST slot, σ_I orthonormal.
pub fn spinor_inner(a: &Spinor, b: &Spinor) -> Scalar {
    assert_eq!(a.r, b.r);
    let mut acc = Scalar::zero();
    for (x, y) in a.comps.iter().zip(b.comps.iter()) {
        acc += x.conj() * y;
    }
    acc
}

/// The spinor representation of Cl_n for even n: gamma matrices, chirality,
/// charge conjugation, and the induced so(n) action.
#[derive(Debug)]
pub struct GammaRep {
    n: usize,
    r: usize,
    gammas: Vec<Mat>,
}

impl GammaRep {
    pub fn new(n: usize) -> Result<Self, CliffordError> {
        if n == 0 || n % 2 != 0 {
            return Err(CliffordError::OddDimension { n });
        }
        let r = n / 2;
        let dim = 1usize << r;
        let mut gammas = Vec::with_capacity(n);
        for i in 0..n {
            let j = i / 2;
            let mut m = Mat::zeros(dim, dim);
            for mask in 0..dim as u32 {
                // Sign from carrying w_j past the generators of I below j.
                let below = (mask & ((1 << j) - 1)).count_ones();
                let sgn = if below % 2 == 0 { Scalar::one() } else { Scalar::from_int(-1) };
                if mask & (1 << j) == 0 {
                    // creation part: σ_I -> ± σ_{I∪{j}}
                    let target = mask | (1 << j);
                    let v = if i % 2 == 0 { sgn.clone() } else { -Scalar::i() * &sgn };
                    m.add_at(target as usize, mask as usize, &v);
                } else {
                    // annihilation part: σ_I -> ± σ_{I∖{j}}
                    let target = mask & !(1 << j);
                    let v = if i % 2 == 0 { sgn.clone() } else { Scalar::i() * &sgn };
                    m.add_at(target as usize, mask as usize, &v);
                }
            }
            gammas.push(m);
        }
        Ok(GammaRep { n, r, gammas })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        1 << self.r
    }

    /// Gamma matrix for generator index i (0-based).
    pub fn gamma(&self, i: usize) -> &Mat {
        &self.gammas[i]
    }

    pub fn apply(&self, m: &Mat, s: &Spinor) -> Spinor {
        Spinor { r: self.r, comps: m.apply(s.components()) }
    }

    /// Chirality grading: +1 on even σ_I, −1 on odd.
    pub fn chirality(&self) -> Mat {
        let dim = self.dim();
        Mat::from_fn(dim, dim, |r, c| {
            if r == c {
                Scalar::from_int(if (r as u32).count_ones() % 2 == 0 { 1 } else { -1 })
            } else {
                Scalar::zero()
            }
        })
    }

    /// Charge conjugation as an antilinear operator: apply the returned
    /// matrix to the componentwise conjugate, C(ψ) = M·conj(ψ).
    ///
    /// C(σ_I) = (−1)^{k(k+1)/2} ★_S(σ_I) with k = |I| and ★_S the Hodge dual
    /// inside S = Λ(V₊).
    pub fn charge_conjugation(&self) -> Mat {
        let dim = self.dim();
        let mut m = Mat::zeros(dim, dim);
        for mask in 0..dim as u32 {
            let k = blade_degree(mask);
            let (comp, eps) = hodge_blade(self.r, mask);
            let sign = if (k * (k + 1) / 2) % 2 == 0 { 1 } else { -1 };
            m.set(comp as usize, mask as usize, Scalar::from_int((sign * eps) as i64));
        }
        m
    }

    /// Charge conjugation applied to a spinor: antilinear, so the
    /// components are conjugated before the matrix acts.
    pub fn charge_conjugate(&self, psi: &Spinor) -> Spinor {
        let conjugated: Vec<Scalar> = psi.components().iter().map(Scalar::conj).collect();
        Spinor { r: self.r, comps: self.charge_conjugation().apply(&conjugated) }
    }

    /// so(n) generator e_{kl} acting on spinors: ¼[γ_k, γ_l].
    pub fn spin_action(&self, k: usize, l: usize) -> Mat {
        self.gammas[k]
            .commutator(&self.gammas[l])
            .scale(&Scalar::from_ratio(1, 4))
    }

    /// Representation matrix of a Clifford element (products of gammas).
    pub fn clifford_action(&self, q: &CliffordElement) -> Mat {
        assert_eq!(q.n(), self.n);
        let dim = self.dim();
        let mut out = Mat::zeros(dim, dim);
        for (blade, coeff) in q.terms() {
            let mut m = Mat::identity(dim);
            for i in crate::exterior::blade_indices(*blade) {
                m = m.mul(&self.gammas[i]);
            }
            out = out.add(&m.scale(coeff));
        }
        out
    }
}

/// Central element sign of the spin representation: the 2π rotation
/// exp(2π·spin(0,1)) acts as −1 on every Fock spinor. Computed numerically
/// and rounded, so the parity is observed rather than hardcoded.
pub fn spinor_center_parity(rep: &GammaRep, tol: f64) -> i8 {
    let gen = rep.spin_action(0, 1);
    let two_pi = 2.0 * std::f64::consts::PI;
    // scale by 2π numerically: exponentiate 2π·gen
    let scaled = gen.scale(&Scalar::from_ratio(
        (two_pi * 1e9).round() as i64,
        1_000_000_000,
    ));
    let e = crate::linalg::expm(&scaled);
    let dim = rep.dim();
    let candidate = e[(0, 0)].re.round() as i8;
    for r in 0..dim {
        for c in 0..dim {
            let expected = if r == c { candidate as f64 } else { 0.0 };
            let z = e[(r, c)];
            assert!(
                (z.re - expected).abs() < tol && z.im.abs() < tol,
                "2π spin rotation is not ±identity within tolerance"
            );
        }
    }
    assert!(candidate == 1 || candidate == -1);
    candidate
}
