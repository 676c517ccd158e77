//! Peter–Weyl model: the polynomial coordinate ring of the 2×2 special
//! unitary group truncated to matrix-element blocks of spin j ≤ cutoff/2.
//!
//! Elements live in ℂ[α,β,γ,δ]/(αδ−βγ−1) in the normal form min(a,d) = 0.
//! The block basis t^j_{pq} consists of the matrix elements of the 2j-th
//! symmetric power in the monomial basis; its coefficients are integers, so
//! the whole model is exact. Frame derivations and the structure group act
//! block-diagonally by right-translation generators; only products can leave
//! the truncation.

use crate::group::{iota_generator, su2_image, su2_image_of, sym_power_derivation};
use crate::linalg::Mat;
use crate::model::{ModelError, TotalSpaceModel};
use crate::scalar::Scalar;
use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::{One, Zero};
use std::collections::BTreeMap;

fn binom_big(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for t in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

fn binom(n: u32, k: u32) -> Scalar {
    Scalar::new(BigRational::from_integer(binom_big(n, k)), BigRational::zero())
}

/// Normal-form monomial α^a β^b γ^c δ^d; the relation αδ = 1 + βγ keeps
/// min(a, d) = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Mono {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl Mono {
    pub fn degree(&self) -> u32 {
        self.a + self.b + self.c + self.d
    }

    /// Torus biweights (left, right): eigenvalues of the two diagonal
    /// one-parameter subgroups, doubled to stay integral.
    pub fn weights(&self) -> (i64, i64) {
        let (a, b, c, d) = (self.a as i64, self.b as i64, self.c as i64, self.d as i64);
        (a + b - c - d, a - b + c - d)
    }
}

/// Polynomial in the coordinate ring, all monomials in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Mono, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        let mut p = Poly::zero();
        p.add_monomial(0, 0, 0, 0, Scalar::one());
        p
    }

    /// Generators by index: 0 = α, 1 = β, 2 = γ, 3 = δ.
    pub fn generator(which: usize) -> Self {
        let mut p = Poly::zero();
        match which {
            0 => p.add_monomial(1, 0, 0, 0, Scalar::one()),
            1 => p.add_monomial(0, 1, 0, 0, Scalar::one()),
            2 => p.add_monomial(0, 0, 1, 0, Scalar::one()),
            3 => p.add_monomial(0, 0, 0, 1, Scalar::one()),
            _ => panic!("generator index must be 0..4"),
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    /// Add coeff·α^a β^b γ^c δ^d, rewriting αδ → 1 + βγ as needed.
    pub fn add_monomial(&mut self, a: u32, b: u32, c: u32, d: u32, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let m = a.min(d);
        for k in 0..=m {
            let mono = Mono { a: a - m, b: b + k, c: c + k, d: d - m };
            let v = &coeff * &binom(m, k);
            let entry = self.terms.entry(mono).or_insert_with(Scalar::zero);
            *entry += v;
            if entry.is_zero() {
                self.terms.remove(&mono);
            }
        }
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_monomial(m.a, m.b, m.c, m.d, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_monomial(m.a, m.b, m.c, m.d, c * s);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_monomial(m1.a + m2.a, m1.b + m2.b, m1.c + m2.c, m1.d + m2.d, c1 * c2);
            }
        }
        out
    }

    /// The *-operation: α* = δ, β* = −γ, γ* = −β, δ* = α, coefficients
    /// conjugated. Preserves normal form.
    pub fn star(&self) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let sign = if (m.b + m.c) % 2 == 0 { Scalar::one() } else { Scalar::from_int(-1) };
            out.add_monomial(m.d, m.c, m.b, m.a, c.conj() * sign);
        }
        out
    }

    /// Right-translation derivation attached to a 2×2 Lie algebra matrix x:
    /// the generators transform as matrix columns, t_{pq} ↦ Σ_s t_{ps} x_{sq},
    /// extended by the Leibniz rule.
    pub fn derivation(&self, x: &Mat) -> Poly {
        assert_eq!((x.rows(), x.cols()), (2, 2));
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.a > 0 {
                let e = c * &Scalar::from_int(m.a as i64);
                out.add_monomial(m.a, m.b, m.c, m.d, &e * x.at(0, 0));
                out.add_monomial(m.a - 1, m.b + 1, m.c, m.d, &e * x.at(1, 0));
            }
            if m.b > 0 {
                let e = c * &Scalar::from_int(m.b as i64);
                out.add_monomial(m.a + 1, m.b - 1, m.c, m.d, &e * x.at(0, 1));
                out.add_monomial(m.a, m.b, m.c, m.d, &e * x.at(1, 1));
            }
            if m.c > 0 {
                let e = c * &Scalar::from_int(m.c as i64);
                out.add_monomial(m.a, m.b, m.c, m.d, &e * x.at(0, 0));
                out.add_monomial(m.a, m.b, m.c - 1, m.d + 1, &e * x.at(1, 0));
            }
            if m.d > 0 {
                let e = c * &Scalar::from_int(m.d as i64);
                out.add_monomial(m.a, m.b, m.c + 1, m.d - 1, &e * x.at(0, 1));
                out.add_monomial(m.a, m.b, m.c, m.d, &e * x.at(1, 1));
            }
        }
        out
    }

    /// The Haar state: on normal-form monomials ν((βγ)^b) = (−1)^b/(b+1) and
    /// every monomial with unbalanced torus weights integrates to zero.
    pub fn nu(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            if m.a == 0 && m.d == 0 && m.b == m.c {
                let sign = if m.b % 2 == 0 { 1 } else { -1 };
                acc += c * &Scalar::from_ratio(sign, m.b as i64 + 1);
            }
        }
        acc
    }

    /// Numeric evaluation at the group element parametrized by (α, β)
    /// with γ = −β̄ and δ = ᾱ.
    pub fn eval(&self, alpha: Complex64, beta: Complex64) -> Complex64 {
        let gamma = -beta.conj();
        let delta = alpha.conj();
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            acc += c.to_complex()
                * alpha.powu(m.a)
                * beta.powu(m.b)
                * gamma.powu(m.c)
                * delta.powu(m.d);
        }
        acc
    }
}

/// Matrix-element polynomials t^j_{pq} of the 2j-th symmetric power in the
/// monomial basis x^{2j−q} y^q; indices flattened as p·(2j+1)+q.
pub fn block_polynomials(two_j: u32) -> Vec<Poly> {
    let dim = two_j as usize + 1;
    let mut out = Vec::with_capacity(dim * dim);
    for p in 0..=two_j {
        for q in 0..=two_j {
            let mut poly = Poly::zero();
            for r in 0..=(two_j - q) {
                let s = (two_j - p) as i64 - r as i64;
                if s < 0 || s as u32 > q {
                    continue;
                }
                let s = s as u32;
                let coeff = binom(two_j - q, r) * binom(q, s);
                poly.add_monomial(r, s, two_j - q - r, q - s, coeff);
            }
            out.push(poly);
        }
    }
    out
}

fn j_label(two_j: u32) -> String {
    if two_j % 2 == 0 {
        format!("{}", two_j / 2)
    } else {
        format!("{}/2", two_j)
    }
}

/// Exact change of basis between normal-form monomials and matrix-element
/// blocks, organized by torus biweight classes, valid up to `max_degree`.
struct Expander {
    max_degree: u32,
    meta: Vec<(u32, usize, usize)>,
    classes: BTreeMap<(i64, i64), ExpClass>,
}

struct ExpClass {
    mono_pos: BTreeMap<Mono, usize>,
    members: Vec<usize>,
    inverse: Mat,
}

fn class_monomials(w_l: i64, w_r: i64, max_degree: u32) -> Vec<Mono> {
    let twice_w1 = w_l + w_r;
    let twice_w2 = w_l - w_r;
    if twice_w1 % 2 != 0 {
        return Vec::new();
    }
    let w1 = twice_w1 / 2;
    let w2 = twice_w2 / 2;
    let a = w1.max(0) as u32;
    let d = (-w1).max(0) as u32;
    let b0 = w2.max(0) as u32;
    let c0 = (-w2).max(0) as u32;
    let mut out = Vec::new();
    let base = a + d + b0 + c0;
    let mut t = 0;
    while base + 2 * t <= max_degree {
        out.push(Mono { a, b: b0 + t, c: c0 + t, d });
        t += 1;
    }
    out
}

impl Expander {
    fn new(max_degree: u32) -> Self {
        let mut meta = Vec::new();
        let mut polys = Vec::new();
        for two_j in 0..=max_degree {
            let block = block_polynomials(two_j);
            let dim = two_j as usize + 1;
            for p in 0..dim {
                for q in 0..dim {
                    meta.push((two_j, p, q));
                    polys.push(block[p * dim + q].clone());
                }
            }
        }
        let mut buckets: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for (idx, &(two_j, p, q)) in meta.iter().enumerate() {
            let w = (two_j as i64 - 2 * p as i64, two_j as i64 - 2 * q as i64);
            buckets.entry(w).or_default().push(idx);
        }
        let mut classes = BTreeMap::new();
        for (w, members) in buckets {
            let monos = class_monomials(w.0, w.1, max_degree);
            assert_eq!(monos.len(), members.len(), "weight class must be square");
            let mono_pos: BTreeMap<Mono, usize> =
                monos.iter().copied().enumerate().map(|(i, m)| (m, i)).collect();
            let size = monos.len();
            let mut basis_in_monos = Mat::zeros(size, size);
            for (col, &idx) in members.iter().enumerate() {
                for (m, c) in polys[idx].terms() {
                    let row = *mono_pos.get(m).expect("basis monomial inside its weight class");
                    basis_in_monos.set(row, col, c.clone());
                }
            }
            let inverse = basis_in_monos
                .solve(&Mat::identity(size))
                .expect("block change of basis is invertible");
            classes.insert(w, ExpClass { mono_pos, members, inverse });
        }
        Expander { max_degree, meta, classes }
    }

    fn dim(&self) -> usize {
        self.meta.len()
    }

    /// Coordinates of `poly` over the block basis; requires degree ≤ max.
    fn expand(&self, poly: &Poly) -> Option<Vec<Scalar>> {
        if poly.degree() > self.max_degree {
            return None;
        }
        let mut split: BTreeMap<(i64, i64), Vec<(Mono, Scalar)>> = BTreeMap::new();
        for (m, c) in poly.terms() {
            split.entry(m.weights()).or_default().push((*m, c.clone()));
        }
        let mut out = vec![Scalar::zero(); self.dim()];
        for (w, terms) in split {
            let class = self.classes.get(&w)?;
            let mut rhs = vec![Scalar::zero(); class.members.len()];
            for (m, c) in terms {
                let row = *class.mono_pos.get(&m)?;
                rhs[row] = c;
            }
            let coords = class.inverse.apply(&rhs);
            for (pos, &idx) in class.members.iter().enumerate() {
                out[idx] = coords[pos].clone();
            }
        }
        Some(out)
    }
}

/// The Peter–Weyl total-space model for n = 2: blocks 2j ≤ cutoff.
pub struct PeterWeylModel {
    cutoff: u32,
    dim: usize,
    meta: Vec<(u32, usize, usize)>,
    polys: Vec<Poly>,
    xi_mats: Vec<Mat>,
    coact: Mat,
    parity: Vec<i8>,
    star_mat: Mat,
    nu_vec: Vec<Scalar>,
    expander: Expander,
}

impl PeterWeylModel {
    pub fn new(cutoff: u32) -> Self {
        let expander = Expander::new(2 * cutoff.max(1));
        let mut meta = Vec::new();
        let mut polys = Vec::new();
        let mut parity = Vec::new();
        for two_j in 0..=cutoff {
            let block = block_polynomials(two_j);
            let bdim = two_j as usize + 1;
            for p in 0..bdim {
                for q in 0..bdim {
                    meta.push((two_j, p, q));
                    polys.push(block[p * bdim + q].clone());
                    parity.push(if two_j % 2 == 0 { 1 } else { -1 });
                }
            }
        }
        let dim = meta.len();

        let block_diag = |x: &Mat| -> Mat {
            let mut m = Mat::zeros(dim, dim);
            let mut offset = 0;
            for two_j in 0..=cutoff {
                let bdim = two_j as usize + 1;
                let pi = sym_power_derivation(two_j, x);
                // right translation acts on the column index q of t_{pq}
                for p in 0..bdim {
                    for q in 0..bdim {
                        for s in 0..bdim {
                            let v = pi.at(s, q);
                            if !v.is_zero() {
                                m.add_at(offset + p * bdim + s, offset + p * bdim + q, v);
                            }
                        }
                    }
                }
                offset += bdim * bdim;
            }
            m
        };

        let xi_mats: Vec<Mat> = (0..2)
            .map(|i| {
                let x = su2_image_of(&iota_generator(2, i)).expect("frame embedding is skew");
                block_diag(&x)
            })
            .collect();
        let coact = block_diag(&su2_image(0, 1));

        let mut star_mat = Mat::zeros(dim, dim);
        for (col, poly) in polys.iter().enumerate() {
            let coords = expander.expand(&poly.star()).expect("star keeps degree");
            for (row, v) in coords.iter().enumerate().take(dim) {
                star_mat.set(row, col, v.clone());
            }
            for (row, v) in coords.iter().enumerate().skip(dim) {
                assert!(v.is_zero(), "star left the truncation at index {row}");
            }
        }

        let nu_vec: Vec<Scalar> = polys.iter().map(Poly::nu).collect();

        PeterWeylModel { cutoff, dim, meta, polys, xi_mats, coact, parity, star_mat, nu_vec, expander }
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// (2j, p, q) of each basis element.
    pub fn basis_meta(&self) -> &[(u32, usize, usize)] {
        &self.meta
    }

    pub fn basis_poly(&self, i: usize) -> &Poly {
        &self.polys[i]
    }

    pub fn poly_of(&self, v: &[Scalar]) -> Poly {
        assert_eq!(v.len(), self.dim);
        let mut out = Poly::zero();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.polys[i].scale(c));
            }
        }
        out
    }

    /// Coordinates of a polynomial over B_N; overflow if higher blocks occur.
    pub fn coordinates_of(&self, poly: &Poly) -> Result<Vec<Scalar>, ModelError> {
        let coords = self
            .expander
            .expand(poly)
            .ok_or(ModelError::Overflow { level: self.cutoff })?;
        for v in coords.iter().skip(self.dim) {
            if !v.is_zero() {
                return Err(ModelError::Overflow { level: self.cutoff });
            }
        }
        Ok(coords[..self.dim].to_vec())
    }
}

impl TotalSpaceModel for PeterWeylModel {
    fn n(&self) -> usize {
        2
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn level(&self) -> u32 {
        self.cutoff
    }

    fn label(&self, i: usize) -> String {
        let (two_j, p, q) = self.meta[i];
        format!("t[{}]({},{})", j_label(two_j), p, q)
    }

    fn block_id(&self, i: usize) -> usize {
        self.meta[i].0 as usize
    }

    fn unit(&self) -> Vec<Scalar> {
        self.basis_vector(0)
    }

    fn xi(&self, i: usize) -> &Mat {
        &self.xi_mats[i]
    }

    fn coaction_gen(&self, k: usize, l: usize) -> &Mat {
        assert_eq!((k, l), (0, 1), "n = 2 has a single structure generator");
        &self.coact
    }

    fn center_parity(&self) -> &[i8] {
        &self.parity
    }

    fn star(&self, v: &[Scalar]) -> Vec<Scalar> {
        let conj: Vec<Scalar> = v.iter().map(Scalar::conj).collect();
        self.star_mat.apply(&conj)
    }

    fn nu(&self, v: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (c, w) in v.iter().zip(self.nu_vec.iter()) {
            acc += c * w;
        }
        acc
    }

    fn product(&self, u: &[Scalar], v: &[Scalar]) -> Result<Vec<Scalar>, ModelError> {
        let w = self.poly_of(u).mul(&self.poly_of(v));
        self.coordinates_of(&w)
    }

    fn nu_product(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        self.poly_of(u).mul(&self.poly_of(v)).nu()
    }
}
