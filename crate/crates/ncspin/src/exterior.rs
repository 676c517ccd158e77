//! Exterior algebra Λ(Cⁿ): blades, wedge, contraction, Hodge star, conjugation.
//!
//! Blades are strictly increasing index subsets stored as bitmasks (bit i set
//! means generator e_{i+1} in math labelling, index i in the API). All signs
//! are exact; coefficients live in the Gaussian rationals.

use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

/// Basis blade as a bitmask over generators `0..n`.
pub type Blade = u32;

pub fn blade_degree(b: Blade) -> usize {
    b.count_ones() as usize
}

pub fn blade_from_indices(indices: &[usize]) -> Blade {
    let mut b = 0u32;
    for &i in indices {
        assert!(i < 32, "generator index out of range");
        assert!(b & (1 << i) == 0, "repeated index in blade");
        b |= 1 << i;
    }
    b
}

pub fn blade_indices(b: Blade) -> Vec<usize> {
    (0..32).filter(|i| b & (1 << i) != 0).collect()
}

/// All 2ⁿ blades in ascending bitmask order (deterministic basis order).
pub fn all_blades(n: usize) -> Vec<Blade> {
    (0..(1u32 << n)).collect()
}

/// Number of transpositions needed to merge the sorted index lists of `a`
/// and `b` (counting pairs i∈a, j∈b with i > j), modulo 2 as a sign.
pub(crate) fn merge_sign(a: Blade, b: Blade) -> i8 {
    let mut inversions = 0u32;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (b & ((1 << i) - 1)).count_ones();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Wedge of two basis blades: `None` when they share a generator.
pub fn wedge_blades(a: Blade, b: Blade) -> Option<(Blade, i8)> {
    if a & b != 0 {
        return None;
    }
    Some((a | b, merge_sign(a, b)))
}

/// Contraction of the basis covector `e_j♭` into a blade.
pub fn contract_blade(j: usize, b: Blade) -> Option<(Blade, i8)> {
    let bit = 1u32 << j;
    if b & bit == 0 {
        return None;
    }
    let below = (b & (bit - 1)).count_ones();
    Some((b & !bit, if below % 2 == 0 { 1 } else { -1 }))
}

/// Hodge dual of a blade in Λ(Cⁿ): `★e_I = ε(I, Iᶜ) e_{Iᶜ}` with the sign of
/// the permutation sorting the concatenation (I, Iᶜ).
pub fn hodge_blade(n: usize, b: Blade) -> (Blade, i8) {
    let full = (1u32 << n) - 1;
    let comp = full & !b;
    (comp, merge_sign(b, comp))
}

/// Sign of reversing a degree-k product: (−1)^{k(k−1)/2}.
pub fn reversal_sign(k: usize) -> i8 {
    if (k * k.saturating_sub(1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Element of Λ(Cⁿ) as a sparse blade-to-coefficient map.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtForm {
    n: usize,
    terms: BTreeMap<Blade, Scalar>,
}

impl ExtForm {
    pub fn zero(n: usize) -> Self {
        ExtForm { n, terms: BTreeMap::new() }
    }

    pub fn scalar(n: usize, s: Scalar) -> Self {
        let mut f = ExtForm::zero(n);
        f.add_term(0, s);
        f
    }

    pub fn one(n: usize) -> Self {
        ExtForm::scalar(n, Scalar::one())
    }

    /// Single generator e_i (0-based index).
    pub fn generator(n: usize, i: usize) -> Self {
        assert!(i < n);
        let mut f = ExtForm::zero(n);
        f.add_term(1 << i, Scalar::one());
        f
    }

    pub fn basis_blade(n: usize, b: Blade) -> Self {
        assert!(b < (1 << n));
        let mut f = ExtForm::zero(n);
        f.add_term(b, Scalar::one());
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Blade, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, b: Blade) -> Scalar {
        self.terms.get(&b).cloned().unwrap_or_else(Scalar::zero)
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

    pub fn add(&self, rhs: &ExtForm) -> ExtForm {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (b, s) in &rhs.terms {
            out.add_term(*b, s.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> ExtForm {
        let mut out = ExtForm::zero(self.n);
        for (b, v) in &self.terms {
            out.add_term(*b, v * s);
        }
        out
    }

    pub fn neg(&self) -> ExtForm {
        self.scale(&Scalar::from_int(-1))
    }

    /// True when all terms share one degree; scalars are degree 0.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut deg = None;
        for b in self.terms.keys() {
            let d = blade_degree(*b);
            match deg {
                None => deg = Some(d),
                Some(k) if k != d => return None,
                _ => {}
            }
        }
        Some(deg.unwrap_or(0))
    }

    pub fn degree_component(&self, k: usize) -> ExtForm {
        let mut out = ExtForm::zero(self.n);
        for (b, s) in &self.terms {
            if blade_degree(*b) == k {
                out.add_term(*b, s.clone());
            }
        }
        out
    }

    pub fn wedge(&self, rhs: &ExtForm) -> ExtForm {
        assert_eq!(self.n, rhs.n);
        let mut out = ExtForm::zero(self.n);
        for (a, sa) in &self.terms {
            for (b, sb) in &rhs.terms {
                if let Some((c, sign)) = wedge_blades(*a, *b) {
                    let mut v = sa * sb;
                    if sign < 0 {
                        v = -v;
                    }
                    out.add_term(c, v);
                }
            }
        }
        out
    }

    /// Contraction by a covector with coefficients `x` (length n): the graded
    /// antiderivation of degree −1 with `contract(x, e_i) = x_i`.
    pub fn contract(&self, x: &[Scalar]) -> ExtForm {
        assert_eq!(x.len(), self.n);
        let mut out = ExtForm::zero(self.n);
        for (b, s) in &self.terms {
            for (j, xj) in x.iter().enumerate() {
                if xj.is_zero() {
                    continue;
                }
                if let Some((c, sign)) = contract_blade(j, *b) {
                    let mut v = s * xj;
                    if sign < 0 {
                        v = -v;
                    }
                    out.add_term(c, v);
                }
            }
        }
        out
    }

    /// Hodge star: blade-wise dual with permutation sign.
    pub fn hodge(&self) -> ExtForm {
        let mut out = ExtForm::zero(self.n);
        for (b, s) in &self.terms {
            let (c, sign) = hodge_blade(self.n, *b);
            out.add_term(c, if sign < 0 { -s.clone() } else { s.clone() });
        }
        out
    }

    /// The *-involution: antilinear, fixes generators, reverses products
    /// ((ab)* = b*a*), so a degree-k blade picks up (−1)^{k(k−1)/2}.
    pub fn conjugate(&self) -> ExtForm {
        let mut out = ExtForm::zero(self.n);
        for (b, s) in &self.terms {
            let sign = reversal_sign(blade_degree(*b));
            let v = s.conj();
            out.add_term(*b, if sign < 0 { -v } else { v });
        }
        out
    }

    /// Coefficientwise conjugation fixing every basis blade (the conjugation
    /// used inside scalar products, where blades are treated as real).
    pub fn bar(&self) -> ExtForm {
        let mut out = ExtForm::zero(self.n);
        for (b, s) in &self.terms {
            out.add_term(*b, s.conj());
        }
        out
    }
}

pub fn blade_label(b: Blade) -> String {
    if b == 0 {
        return "1".to_string();
    }
    blade_indices(b)
        .iter()
        .map(|i| format!("e{}", i + 1))
        .collect::<Vec<_>>()
        .join("∧")
}

impl fmt::Display for ExtForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, s)| {
                if *b == 0 {
                    format!("{}", s)
                } else if s.is_one() {
                    blade_label(*b)
                } else {
                    format!("({})·{}", s, blade_label(*b))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for ExtForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, idx: &[usize]) -> ExtForm {
        ExtForm::basis_blade(n, blade_from_indices(idx))
    }

    /// Independent sign oracle: build the concatenated index list and count
    /// inversions by explicit bubble sort.
    fn permutation_sign_oracle(left: &[usize], right: &[usize]) -> i8 {
        let mut v: Vec<usize> = left.iter().chain(right.iter()).copied().collect();
        let mut sign = 1i8;
        for i in 0..v.len() {
            for j in 0..v.len().saturating_sub(i + 1) {
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        sign
    }

    #[test]
    fn hodge_on_all_blades_matches_permutation_parity_oracle() {
        for n in 1..=6 {
            for b in all_blades(n) {
                let (comp, sign) = hodge_blade(n, b);
                let oracle =
                    permutation_sign_oracle(&blade_indices(b), &blade_indices(comp));
                assert_eq!(sign, oracle, "n={} blade={:b}", n, b);
            }
        }
    }

    #[test]
    fn hodge_examples_low_dimension() {
        // n = 2: ★e_2 = -e_1, ★e_1 = e_2, ★1 = e_1∧e_2.
        let star_e2 = e(2, &[1]).hodge();
        assert_eq!(star_e2, e(2, &[0]).neg());
        assert_eq!(e(2, &[0]).hodge(), e(2, &[1]));
        assert_eq!(ExtForm::one(2).hodge(), e(2, &[0, 1]));
        assert_eq!(e(2, &[0, 1]).hodge(), ExtForm::one(2));
    }

    #[test]
    fn hodge_squared_sign_all_blades() {
        for n in 1..=6 {
            for b in all_blades(n) {
                let k = blade_degree(b);
                let twice = ExtForm::basis_blade(n, b).hodge().hodge();
                let sign = if ((n - k) * k) % 2 == 0 { 1 } else { -1 };
                let expected = ExtForm::basis_blade(n, b).scale(&Scalar::from_int(sign));
                assert_eq!(twice, expected, "n={} blade={:b}", n, b);
            }
        }
    }

    #[test]
    fn wedge_graded_commutativity_exhaustive() {
        for n in 1..=6 {
            for a in all_blades(n) {
                for b in all_blades(n) {
                    let ab = ExtForm::basis_blade(n, a).wedge(&ExtForm::basis_blade(n, b));
                    let ba = ExtForm::basis_blade(n, b).wedge(&ExtForm::basis_blade(n, a));
                    let sign = (blade_degree(a) * blade_degree(b)) % 2;
                    let expected = if sign == 0 { ba.clone() } else { ba.neg() };
                    assert_eq!(ab, expected);
                }
            }
        }
    }

    #[test]
    fn wedge_repeated_generator_vanishes() {
        assert!(e(3, &[0]).wedge(&e(3, &[0, 2])).is_zero());
    }

    #[test]
    fn contraction_examples() {
        // contract(e_2♭, e_1∧e_2) = -e_1.
        let x: Vec<Scalar> = vec![Scalar::zero(), Scalar::one()];
        assert_eq!(e(2, &[0, 1]).contract(&x), e(2, &[0]).neg());
        // contract(e_1♭, e_1∧e_2) = e_2.
        let y: Vec<Scalar> = vec![Scalar::one(), Scalar::zero()];
        assert_eq!(e(2, &[0, 1]).contract(&y), e(2, &[1]));
    }

    #[test]
    fn contraction_is_graded_antiderivation_exhaustive() {
        // contract(x, a∧b) = contract(x,a)∧b + (−1)^{deg a} a∧contract(x,b)
        for n in 1..=4 {
            let covectors: Vec<Vec<Scalar>> = (0..n)
                .map(|j| {
                    (0..n)
                        .map(|i| if i == j { Scalar::one() } else { Scalar::zero() })
                        .collect()
                })
                .chain(std::iter::once(
                    (0..n).map(|i| Scalar::from_parts(1, 1 + i as i64, 1, 2)).collect(),
                ))
                .collect();
            for x in &covectors {
                for a in all_blades(n) {
                    for b in all_blades(n) {
                        let fa = ExtForm::basis_blade(n, a);
                        let fb = ExtForm::basis_blade(n, b);
                        let lhs = fa.wedge(&fb).contract(x);
                        let mut rhs = fa.contract(x).wedge(&fb);
                        let second = fa.wedge(&fb.contract(x));
                        rhs = if blade_degree(a) % 2 == 0 {
                            rhs.add(&second)
                        } else {
                            rhs.add(&second.neg())
                        };
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn contraction_squares_to_zero() {
        for n in 1..=4 {
            let x: Vec<Scalar> =
                (0..n).map(|i| Scalar::from_parts(i as i64 + 1, 2, 1, 3)).collect();
            for b in all_blades(n) {
                let twice = ExtForm::basis_blade(n, b).contract(&x).contract(&x);
                assert!(twice.is_zero());
            }
        }
    }

    #[test]
    fn conjugation_is_antimultiplicative_involution() {
        // (e_1∧e_2)* = -e_1∧e_2.
        assert_eq!(e(2, &[0, 1]).conjugate(), e(2, &[0, 1]).neg());
        for n in 1..=4 {
            for a in all_blades(n) {
                let f = ExtForm::basis_blade(n, a).scale(&Scalar::from_parts(1, 2, 3, 1));
                assert_eq!(f.conjugate().conjugate(), f);
                for b in all_blades(n) {
                    let g = ExtForm::basis_blade(n, b);
                    // (fg)* = g* f*
                    assert_eq!(f.wedge(&g).conjugate(), g.conjugate().wedge(&f.conjugate()));
                }
            }
        }
    }

    #[test]
    fn generators_are_conjugation_fixed() {
        for i in 0..3 {
            assert_eq!(ExtForm::generator(3, i).conjugate(), ExtForm::generator(3, i));
        }
    }

    #[test]
    fn display_labels() {
        let f = e(2, &[0, 1]).scale(&Scalar::from_int(-1));
        assert_eq!(f.to_string(), "(-1)·e1∧e2");
        assert_eq!(ExtForm::one(2).to_string(), "1");
    }
}
