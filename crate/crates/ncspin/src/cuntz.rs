//! Cuntz algebra C_d: exact normal forms ψ_μψ_ν*, level raising, the
//! canonical state, the structure-group coaction with symbolic matrix-entry
//! coefficients, the freeness identity, and the level-truncated total-space
//! model for d = 2.
//!
//! Truncation semantics: B_N is spanned by words at the canonical level
//! (|μ|, |ν|) = (N, N−δ) for sector δ = |μ|−|ν| ≥ 0 and (N−|δ|, N) below.
//! Derivations, the group action, and * preserve sectors and levels exactly;
//! products contract words and only overflow when a factor with positive
//! sector pushes kets past the level.

use crate::group::{iota_generator, su2_image, su2_image_of};
use crate::linalg::Mat;
use crate::model::{ModelError, TotalSpaceModel};
use crate::scalar::Scalar;
use num::complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;

/// Coefficient ring for Cuntz elements: exact scalars or symbolic
/// polynomials in the representation entries.
pub trait Coefficient: Clone + PartialEq + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn star(&self) -> Self;
}

impl Coefficient for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.clone() + rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn star(&self) -> Self {
        self.conj()
    }
}

/// Normal-form word ψ_μ ψ_ν* with ψ_ν* = ψ_{ν_b}*…ψ_{ν_1}*; letters 0-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Word {
    pub kets: Vec<u8>,
    pub bras: Vec<u8>,
}

impl Word {
    pub fn unit() -> Self {
        Word { kets: Vec::new(), bras: Vec::new() }
    }

    pub fn level(&self) -> usize {
        self.kets.len().max(self.bras.len())
    }

    pub fn sector(&self) -> i64 {
        self.kets.len() as i64 - self.bras.len() as i64
    }

    /// Product with the middle ψ*ψ contractions resolved; `None` when a
    /// letter mismatch annihilates the word.
    pub fn mul(&self, rhs: &Word) -> Option<Word> {
        let k = self.bras.len().min(rhs.kets.len());
        if self.bras[..k] != rhs.kets[..k] {
            return None;
        }
        if self.bras.len() <= rhs.kets.len() {
            let mut kets = self.kets.clone();
            kets.extend_from_slice(&rhs.kets[k..]);
            Some(Word { kets, bras: rhs.bras.clone() })
        } else {
            let mut bras = rhs.bras.clone();
            bras.extend_from_slice(&self.bras[k..]);
            Some(Word { kets: self.kets.clone(), bras })
        }
    }

    pub fn star(&self) -> Word {
        Word { kets: self.bras.clone(), bras: self.kets.clone() }
    }
}

fn word_label(w: &Word) -> String {
    let fmt_idx = |v: &[u8]| v.iter().map(|i| (i + 1).to_string()).collect::<String>();
    match (w.kets.is_empty(), w.bras.is_empty()) {
        (true, true) => "1".to_string(),
        (false, true) => format!("ψ{}", fmt_idx(&w.kets)),
        (true, false) => format!("ψ{}*", fmt_idx(&w.bras)),
        (false, false) => format!("ψ{}ψ{}*", fmt_idx(&w.kets), fmt_idx(&w.bras)),
    }
}

/// Finite combination of normal-form words over a coefficient ring.
#[derive(Clone, Debug, PartialEq)]
pub struct CuntzElement<C: Coefficient> {
    d: usize,
    terms: BTreeMap<Word, C>,
}

impl<C: Coefficient> CuntzElement<C> {
    pub fn zero(d: usize) -> Self {
        assert!(d >= 2, "the Cuntz algebra needs d >= 2");
        CuntzElement { d, terms: BTreeMap::new() }
    }

    pub fn unit(d: usize) -> Self {
        let mut e = CuntzElement::zero(d);
        e.add_term(Word::unit(), C::one());
        e
    }

    pub fn generator(d: usize, i: u8) -> Self {
        assert!((i as usize) < d);
        let mut e = CuntzElement::zero(d);
        e.add_term(Word { kets: vec![i], bras: Vec::new() }, C::one());
        e
    }

    pub fn generator_star(d: usize, i: u8) -> Self {
        assert!((i as usize) < d);
        let mut e = CuntzElement::zero(d);
        e.add_term(Word { kets: Vec::new(), bras: vec![i] }, C::one());
        e
    }

    pub fn from_word(d: usize, w: Word, c: C) -> Self {
        let mut e = CuntzElement::zero(d);
        e.add_term(w, c);
        e
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> &BTreeMap<Word, C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: C) {
        if c.is_zero() {
            return;
        }
        let d = self.d;
        for letter in w.kets.iter().chain(w.bras.iter()) {
            assert!((*letter as usize) < d, "letter out of range for C_{d}");
        }
        let entry = self.terms.entry(w).or_insert_with(C::zero);
        *entry = entry.plus(&c);
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .expect("zero entry present");
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.d, rhs.d);
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = CuntzElement::zero(self.d);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.times(s));
        }
        out
    }

    pub fn neg(&self) -> Self
    where
        C: NegCoefficient,
    {
        let mut out = CuntzElement::zero(self.d);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.negate());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.d, rhs.d);
        let mut out = CuntzElement::zero(self.d);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                if let Some(w) = w1.mul(w2) {
                    out.add_term(w, c1.times(c2));
                }
            }
        }
        out
    }

    pub fn star(&self) -> Self {
        let mut out = CuntzElement::zero(self.d);
        for (w, c) in &self.terms {
            out.add_term(w.star(), c.star());
        }
        out
    }

    /// Apply ψ_μψ_ν* = Σ_i ψ_{μi}ψ_{νi}* until every word sits at `level`.
    pub fn raise_to_level(&self, level: usize) -> Self {
        let mut out = CuntzElement::zero(self.d);
        for (w, c) in &self.terms {
            assert!(w.level() <= level, "cannot lower a word level");
            let mut frontier = vec![w.clone()];
            for _ in 0..(level - w.level()) {
                let mut next = Vec::with_capacity(frontier.len() * self.d);
                for fw in frontier {
                    for i in 0..self.d as u8 {
                        let mut kets = fw.kets.clone();
                        let mut bras = fw.bras.clone();
                        kets.push(i);
                        bras.push(i);
                        next.push(Word { kets, bras });
                    }
                }
                frontier = next;
            }
            for fw in frontier {
                out.add_term(fw, c.clone());
            }
        }
        out
    }

    pub fn max_level(&self) -> usize {
        self.terms.keys().map(Word::level).max().unwrap_or(0)
    }
}

/// Coefficients with a negation, needed only for convenience arithmetic.
pub trait NegCoefficient: Coefficient {
    fn negate(&self) -> Self;
}

impl NegCoefficient for Scalar {
    fn negate(&self) -> Self {
        -self.clone()
    }
}

/// Equality in C_d: match coefficients after raising both sides to a common
/// level.
pub fn equal<C: Coefficient>(a: &CuntzElement<C>, b: &CuntzElement<C>) -> bool {
    assert_eq!(a.d(), b.d());
    let level = a.max_level().max(b.max_level());
    a.raise_to_level(level).terms == b.raise_to_level(level).terms
}

impl CuntzElement<Scalar> {
    /// Canonical state ν(ψ_μψ_ν*) = δ_{μν} d^{−|μ|}.
    pub fn nu(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for (w, c) in &self.terms {
            if w.kets == w.bras {
                let den = (self.d as i64).pow(w.kets.len() as u32);
                acc += c * &Scalar::from_ratio(1, den);
            }
        }
        acc
    }
}

/// A generator or its adjoint, for building words to normalize.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    Gen(u8),
    Star(u8),
}

/// Normal form of an arbitrary product of generators and adjoints.
pub fn normal_form(d: usize, letters: &[Letter]) -> CuntzElement<Scalar> {
    let mut acc = CuntzElement::unit(d);
    for letter in letters {
        let factor = match letter {
            Letter::Gen(i) => CuntzElement::generator(d, *i),
            Letter::Star(i) => CuntzElement::generator_star(d, *i),
        };
        acc = acc.mul(&factor);
    }
    acc
}

/// Commutative *-polynomial in the entries v_{ij} of the structure-group
/// representation; variables are free (no unitarity relations), equality is
/// decided by the seeded evaluation protocol.
///
/// Exponent keys index v_{ij} at i·d+j with conjugates offset by d², stored
/// with trailing zeros trimmed so constants are d-agnostic; `d = 0` marks a
/// constant-only polynomial and upgrades on arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCoeff {
    d: usize,
    terms: BTreeMap<Vec<u8>, Scalar>,
}

fn trim_exp(mut e: Vec<u8>) -> Vec<u8> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl PolyCoeff {
    pub fn constant(d: usize, s: Scalar) -> Self {
        let mut p = PolyCoeff { d, terms: BTreeMap::new() };
        if !Scalar::is_zero(&s) {
            p.terms.insert(Vec::new(), s);
        }
        p
    }

    pub fn var(d: usize, i: usize, j: usize) -> Self {
        assert!(i < d && j < d);
        let mut exp = vec![0u8; i * d + j + 1];
        exp[i * d + j] = 1;
        let mut p = PolyCoeff { d, terms: BTreeMap::new() };
        p.terms.insert(exp, Scalar::one());
        p
    }

    pub fn var_conj(d: usize, i: usize, j: usize) -> Self {
        PolyCoeff::var(d, i, j).star()
    }

    fn add_term(&mut self, exp: Vec<u8>, c: Scalar) {
        if Scalar::is_zero(&c) {
            return;
        }
        let exp = trim_exp(exp);
        let entry = self.terms.entry(exp.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if Scalar::is_zero(entry) {
            self.terms.remove(&exp);
        }
    }

    fn joined_d(&self, rhs: &Self) -> usize {
        if self.d > 0 && rhs.d > 0 {
            assert_eq!(self.d, rhs.d, "mixed representation sizes");
        }
        self.d.max(rhs.d)
    }

    /// Evaluate at a numeric d×d representation matrix.
    pub fn eval(&self, v: &[Vec<Complex64>]) -> Complex64 {
        let d = if self.d > 0 { self.d } else { v.len() };
        let mut acc = Complex64::new(0.0, 0.0);
        for (exp, c) in &self.terms {
            let mut term = c.to_complex();
            for (idx, &power) in exp.iter().enumerate() {
                let (i, j) = ((idx % (d * d)) / d, idx % d);
                let base = if idx < d * d { v[i][j] } else { v[i][j].conj() };
                for _ in 0..power {
                    term *= base;
                }
            }
            acc += term;
        }
        acc
    }
}

impl fmt::Display for PolyCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let d = self.d.max(1);
        let mut parts = Vec::new();
        for (exp, c) in &self.terms {
            let mut factors = Vec::new();
            if !c.is_one() {
                factors.push(format!("({c})"));
            }
            for (idx, &power) in exp.iter().enumerate() {
                let (i, j) = ((idx % (d * d)) / d, idx % d);
                let name = if idx < d * d {
                    format!("v{}{}", i + 1, j + 1)
                } else {
                    format!("v{}{}*", i + 1, j + 1)
                };
                for _ in 0..power {
                    factors.push(name.clone());
                }
            }
            if factors.is_empty() {
                factors.push("1".to_string());
            }
            parts.push(factors.join("·"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Coefficient for PolyCoeff {
    fn zero() -> Self {
        PolyCoeff { d: 0, terms: BTreeMap::new() }
    }
    fn one() -> Self {
        PolyCoeff::constant(0, Scalar::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, rhs: &Self) -> Self {
        let d = self.joined_d(rhs);
        let mut out = PolyCoeff { d, terms: self.terms.clone() };
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
    fn times(&self, rhs: &Self) -> Self {
        let d = self.joined_d(rhs);
        let mut out = PolyCoeff { d, terms: BTreeMap::new() };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let len = e1.len().max(e2.len());
                let exp: Vec<u8> = (0..len)
                    .map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(exp, c1 * c2);
            }
        }
        out
    }
    fn star(&self) -> Self {
        let dd = self.d * self.d;
        let mut out = PolyCoeff { d: self.d, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            let exp = if dd == 0 {
                Vec::new()
            } else {
                let mut padded = vec![0u8; 2 * dd];
                for (i, &p) in e.iter().enumerate() {
                    padded[i] = p;
                }
                let mut swapped = vec![0u8; 2 * dd];
                swapped[..dd].copy_from_slice(&padded[dd..]);
                swapped[dd..].copy_from_slice(&padded[..dd]);
                swapped
            };
            out.add_term(exp, c.conj());
        }
        out
    }
}

/// 2×2 special unitary samples for the evaluation protocol, generated from a
/// seeded stream through the closed-form exponential of su(2).
pub fn sample_su2(seed: u64, count: usize) -> Vec<Vec<Vec<Complex64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let a: f64 = rng.random_range(-3.0..3.0);
        let b: f64 = rng.random_range(-3.0..3.0);
        let c: f64 = rng.random_range(-3.0..3.0);
        // u = [[ia, b+ic], [−b+ic, −ia]] is traceless anti-hermitian with
        // u² = −θ²·id, so exp(u) = cosθ + (sinθ/θ)·u.
        let theta = (a * a + b * b + c * c).sqrt();
        let (cs, sc) =
            if theta < 1e-12 { (1.0, 1.0) } else { (theta.cos(), theta.sin() / theta) };
        let u = [
            [Complex64::new(0.0, a), Complex64::new(b, c)],
            [Complex64::new(-b, c), Complex64::new(0.0, -a)],
        ];
        let mut g = vec![vec![Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in u.iter().enumerate() {
            for (cix, entry) in row.iter().enumerate() {
                let id = if r == cix { 1.0 } else { 0.0 };
                g[r][cix] = Complex64::new(cs * id, 0.0) + sc * entry;
            }
        }
        out.push(g);
    }
    out
}

/// Evaluation-protocol equality: raise to a common level and compare every
/// coefficient at `samples` seeded group elements within `tol`.
pub fn equal_sampled(
    a: &CuntzElement<PolyCoeff>,
    b: &CuntzElement<PolyCoeff>,
    seed: u64,
    samples: usize,
    tol: f64,
) -> bool {
    assert_eq!(a.d(), b.d());
    assert_eq!(a.d(), 2, "the evaluation protocol samples the 2×2 unitary group");
    let level = a.max_level().max(b.max_level());
    let ar = a.raise_to_level(level);
    let br = b.raise_to_level(level);
    let groups = sample_su2(seed, samples);
    let zero = PolyCoeff { d: a.d(), terms: BTreeMap::new() };
    let mut words: Vec<&Word> = ar.terms().keys().collect();
    for w in br.terms().keys() {
        if !ar.terms().contains_key(w) {
            words.push(w);
        }
    }
    for w in words {
        let ca = ar.terms().get(w).unwrap_or(&zero);
        let cb = br.terms().get(w).unwrap_or(&zero);
        for g in &groups {
            if (ca.eval(g) - cb.eval(g)).norm() > tol {
                return false;
            }
        }
    }
    true
}

/// The coaction F(ψ_i) = Σ_k ψ_k ⊗ v_{ki}, extended as a *-homomorphism to
/// normal-form elements.
pub fn coaction(elem: &CuntzElement<Scalar>) -> CuntzElement<PolyCoeff> {
    let d = elem.d();
    let mut out = CuntzElement::zero(d);
    for (w, c) in elem.terms() {
        let mut expansion: Vec<(Word, PolyCoeff)> =
            vec![(Word::unit(), PolyCoeff::constant(d, c.clone()))];
        for &letter in &w.kets {
            let mut next = Vec::with_capacity(expansion.len() * d);
            for (partial, coeff) in &expansion {
                for k in 0..d as u8 {
                    let mut kets = partial.kets.clone();
                    kets.push(k);
                    let word = Word { kets, bras: partial.bras.clone() };
                    next.push((
                        word,
                        coeff.times(&PolyCoeff::var(d, k as usize, letter as usize)),
                    ));
                }
            }
            expansion = next;
        }
        for &letter in &w.bras {
            let mut next = Vec::with_capacity(expansion.len() * d);
            for (partial, coeff) in &expansion {
                for k in 0..d as u8 {
                    let mut bras = partial.bras.clone();
                    bras.push(k);
                    let word = Word { kets: partial.kets.clone(), bras };
                    next.push((
                        word,
                        coeff.times(&PolyCoeff::var_conj(d, k as usize, letter as usize)),
                    ));
                }
            }
            expansion = next;
        }
        for (word, coeff) in expansion {
            out.add_term(word, coeff);
        }
    }
    out
}

/// The freeness identity ψ_j*·F(ψ_i) = 1 ⊗ v_{ji}, verified purely
/// symbolically (only the ψ*ψ relation is used).
pub fn freeness_witness(d: usize, i: u8, j: u8) -> CuntzElement<PolyCoeff> {
    let lhs = CuntzElement::<PolyCoeff>::from_word(
        d,
        Word { kets: Vec::new(), bras: vec![j] },
        PolyCoeff::constant(d, Scalar::one()),
    )
    .mul(&coaction(&CuntzElement::generator(d, i)));
    let expected = CuntzElement::<PolyCoeff>::from_word(
        d,
        Word::unit(),
        PolyCoeff::var(d, j as usize, i as usize),
    );
    assert_eq!(lhs, expected, "freeness identity failed at ({i},{j})");
    lhs
}

/// Level-truncated total-space model over C_2 with the Spin(3) fundamental
/// representation driving derivations and the structure group action.
pub struct CuntzModel {
    level: u32,
    words: Vec<Word>,
    index: BTreeMap<Word, usize>,
    sector_of: Vec<usize>,
    xi_mats: Vec<Mat>,
    coact: Mat,
    parity: Vec<i8>,
}

const CUNTZ_D: usize = 2;

impl CuntzModel {
    pub fn new(level: u32) -> Self {
        let n = level as i64;
        let mut words = Vec::new();
        let mut sector_of = Vec::new();
        for delta in -n..=n {
            let (ka, kb) = if delta >= 0 {
                (n as usize, (n - delta) as usize)
            } else {
                ((n + delta) as usize, n as usize)
            };
            let mut kets_list = enumerate_words(ka);
            kets_list.sort();
            let mut bras_list = enumerate_words(kb);
            bras_list.sort();
            for kets in &kets_list {
                for bras in &bras_list {
                    words.push(Word { kets: kets.clone(), bras: bras.clone() });
                    sector_of.push((delta + n) as usize);
                }
            }
        }
        let index: BTreeMap<Word, usize> =
            words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let parity: Vec<i8> = words
            .iter()
            .map(|w| if (w.kets.len() + w.bras.len()) % 2 == 0 { 1 } else { -1 })
            .collect();

        let letter_action = |x: &Mat, out: &mut Mat| {
            for (col, w) in words.iter().enumerate() {
                for t in 0..w.kets.len() {
                    for k in 0..CUNTZ_D {
                        let v = x.at(k, w.kets[t] as usize);
                        if v.is_zero() {
                            continue;
                        }
                        let mut kets = w.kets.clone();
                        kets[t] = k as u8;
                        let row = index[&Word { kets, bras: w.bras.clone() }];
                        out.add_at(row, col, v);
                    }
                }
                for t in 0..w.bras.len() {
                    for k in 0..CUNTZ_D {
                        let v = x.at(k, w.bras[t] as usize).conj();
                        if v.is_zero() {
                            continue;
                        }
                        let mut bras = w.bras.clone();
                        bras[t] = k as u8;
                        let row = index[&Word { kets: w.kets.clone(), bras }];
                        out.add_at(row, col, &v);
                    }
                }
            }
        };

        let dim = words.len();
        let xi_mats: Vec<Mat> = (0..2)
            .map(|i| {
                let x = su2_image_of(&iota_generator(2, i)).expect("frame embedding is skew");
                let mut m = Mat::zeros(dim, dim);
                letter_action(&x, &mut m);
                m
            })
            .collect();
        let mut coact = Mat::zeros(dim, dim);
        letter_action(&su2_image(0, 1), &mut coact);

        CuntzModel { level, words, index, sector_of, xi_mats, coact, parity }
    }

    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Coordinates of an element at the truncation level. Words are raised
    /// to a uniform level first; anything above the truncation must then
    /// collapse through complete constant-coefficient fibers
    /// Σ_i ψ_{μi}ψ_{νi}* = ψ_μψ_ν*, otherwise the element genuinely leaves
    /// the truncation and overflow is reported.
    pub fn coords_of(&self, elem: &CuntzElement<Scalar>) -> Result<Vec<Scalar>, ModelError> {
        assert_eq!(elem.d(), CUNTZ_D);
        let n = self.level as usize;
        for w in elem.terms().keys() {
            if w.sector().unsigned_abs() as usize > n {
                return Err(ModelError::Overflow { level: self.level });
            }
        }
        let top = elem.max_level().max(n);
        let mut terms = elem.raise_to_level(top).terms.clone();
        for level in (n + 1..=top).rev() {
            let mut parents: BTreeMap<Word, Vec<Option<Scalar>>> = BTreeMap::new();
            for (w, c) in &terms {
                debug_assert_eq!(w.level(), level);
                let (Some(&kl), Some(&bl)) = (w.kets.last(), w.bras.last()) else {
                    return Err(ModelError::Overflow { level: self.level });
                };
                if kl != bl {
                    return Err(ModelError::Overflow { level: self.level });
                }
                let parent = Word {
                    kets: w.kets[..w.kets.len() - 1].to_vec(),
                    bras: w.bras[..w.bras.len() - 1].to_vec(),
                };
                parents.entry(parent).or_insert_with(|| vec![None; CUNTZ_D])[kl as usize] =
                    Some(c.clone());
            }
            let mut lowered = BTreeMap::new();
            for (parent, fiber) in parents {
                let mut coeff = None;
                for entry in &fiber {
                    match (entry, &coeff) {
                        (Some(c), None) => coeff = Some(c.clone()),
                        (Some(c), Some(prev)) if c == prev => {}
                        _ => return Err(ModelError::Overflow { level: self.level }),
                    }
                }
                lowered.insert(parent, coeff.expect("fiber groups are nonempty"));
            }
            terms = lowered;
        }
        let mut out = vec![Scalar::zero(); self.words.len()];
        for (w, c) in terms {
            let idx = self.index[&w];
            out[idx] = out[idx].clone() + &c;
        }
        Ok(out)
    }

    pub fn element_of(&self, v: &[Scalar]) -> CuntzElement<Scalar> {
        let mut out = CuntzElement::zero(CUNTZ_D);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out.add_term(self.words[i].clone(), c.clone());
            }
        }
        out
    }
}

fn enumerate_words(len: usize) -> Vec<Vec<u8>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let shorter = enumerate_words(len - 1);
    let mut out = Vec::with_capacity(shorter.len() * CUNTZ_D);
    for w in shorter {
        for i in 0..CUNTZ_D as u8 {
            let mut next = w.clone();
            next.push(i);
            out.push(next);
        }
    }
    out
}

impl TotalSpaceModel for CuntzModel {
    fn n(&self) -> usize {
        2
    }

    fn dim(&self) -> usize {
        self.words.len()
    }

    fn level(&self) -> u32 {
        self.level
    }

    fn label(&self, i: usize) -> String {
        word_label(&self.words[i])
    }

    fn block_id(&self, i: usize) -> usize {
        self.sector_of[i]
    }

    fn unit(&self) -> Vec<Scalar> {
        self.coords_of(&CuntzElement::unit(CUNTZ_D)).expect("unit fits every level")
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
        let mut out = vec![Scalar::zero(); self.words.len()];
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let target = self.index[&self.words[i].star()];
                out[target] = out[target].clone() + c.conj();
            }
        }
        out
    }

    fn nu(&self, v: &[Scalar]) -> Scalar {
        self.element_of(v).nu()
    }

    fn product(&self, u: &[Scalar], v: &[Scalar]) -> Result<Vec<Scalar>, ModelError> {
        let w = self.element_of(u).mul(&self.element_of(v));
        self.coords_of(&w)
    }

    fn nu_product(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        self.element_of(u).mul(&self.element_of(v)).nu()
    }
}
