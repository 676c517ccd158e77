//! Orthogonal Lie algebras so(m), the frame embedding of Cⁿ into so(n+1),
//! curvature components from brackets, and exact Spin(3) irreps.
//!
//! Irreps of Spin(3) ≅ SU(2) are realized on symmetric powers of the
//! fundamental representation in the monomial basis x^{2j−q} y^q. Entries are
//! integer combinations of the su(2) matrix entries, so everything stays in
//! the Gaussian rationals; skew-hermiticity holds w.r.t. the invariant Gram
//! of that basis rather than the identity.

use crate::linalg::Mat;
use crate::scalar::Scalar;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("matrix is not in the span of so({m}) generators")]
    NotSkew { m: usize },
    #[error("curvature bracket escaped the stabilizer subalgebra")]
    BracketEscapesStabilizer,
}

/// Ordered basis pairs (k, l) with k < l for so(m), lexicographic.
pub fn so_basis(m: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for k in 0..m {
        for l in (k + 1)..m {
            v.push((k, l));
        }
    }
    v
}

/// Generator e_{kl} = E_{kl} − E_{lk} of so(m).
pub fn so_generator(m: usize, k: usize, l: usize) -> Mat {
    assert!(k < l && l < m);
    let mut g = Mat::zeros(m, m);
    g.set(k, l, Scalar::one());
    g.set(l, k, Scalar::from_int(-1));
    g
}

/// Expand a matrix over the e_{kl} basis; errors unless it is real-skew in
/// the exact sense required (X = Σ c_{kl} e_{kl}).
pub fn expand_so(m: usize, x: &Mat) -> Result<Vec<Scalar>, GroupError> {
    let basis = so_basis(m);
    let mut coeffs = Vec::with_capacity(basis.len());
    let mut rebuilt = Mat::zeros(m, m);
    for &(k, l) in &basis {
        let c = x.at(k, l).clone();
        rebuilt = rebuilt.add(&so_generator(m, k, l).scale(&c));
        coeffs.push(c);
    }
    if &rebuilt != x {
        return Err(GroupError::NotSkew { m });
    }
    Ok(coeffs)
}

/// Structure constants f[a][b][c] with [e_a, e_b] = Σ_c f[a][b][c] e_c.
pub fn so_structure_constants(m: usize) -> Vec<Vec<Vec<Scalar>>> {
    let basis = so_basis(m);
    let gens: Vec<Mat> = basis.iter().map(|&(k, l)| so_generator(m, k, l)).collect();
    basis
        .iter()
        .enumerate()
        .map(|(a, _)| {
            basis
                .iter()
                .enumerate()
                .map(|(b, _)| {
                    expand_so(m, &gens[a].commutator(&gens[b]))
                        .expect("so(m) is closed under brackets")
                })
                .collect()
        })
        .collect()
}

/// Embedding ι: Cⁿ → so(n+1), x ↦ [[0, x], [−xᵀ, 0]].
pub fn iota(n: usize, x: &[Scalar]) -> Mat {
    assert_eq!(x.len(), n);
    let mut m = Mat::zeros(n + 1, n + 1);
    for (i, v) in x.iter().enumerate() {
        m.set(i, n, v.clone());
        m.set(n, i, -v);
    }
    m
}

/// ι(e_i) for the standard basis vector (0-based).
pub fn iota_generator(n: usize, i: usize) -> Mat {
    let mut x = vec![Scalar::zero(); n];
    x[i] = Scalar::one();
    iota(n, &x)
}

/// Curvature components ρ_{ijkl} of the frame model on so(n+1)/so(n).
///
/// ρ_{ij} is read off from −[ι(e_i), ι(e_j)] expanded over the stabilizer
/// basis e_{kl}, normalized so that ρ_{ij}(a) = ½ Σ_{kl} ρ_{ijkl}·(e_{kl}a)_ε.
pub struct CurvatureTable {
    n: usize,
    /// Dense table indexed by ((i·n + j)·n + k)·n + l.
    rho: Vec<Scalar>,
}

impl CurvatureTable {
    pub fn new(n: usize) -> Result<Self, GroupError> {
        assert!(n >= 2);
        let basis = so_basis(n);
        let mut rho = vec![Scalar::zero(); n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let bracket = iota_generator(n, i).commutator(&iota_generator(n, j)).neg();
                // The bracket of two frame directions must land back in so(n)
                // (top-left block of so(n+1)).
                for t in 0..n {
                    if !bracket.at(t, n).is_zero() || !bracket.at(n, t).is_zero() {
                        return Err(GroupError::BracketEscapesStabilizer);
                    }
                }
                let block = Mat::from_fn(n, n, |r, c| bracket.at(r, c).clone());
                let coeffs = expand_so(n, &block).map_err(|_| GroupError::BracketEscapesStabilizer)?;
                for (idx, &(k, l)) in basis.iter().enumerate() {
                    rho[((i * n + j) * n + k) * n + l] = coeffs[idx].clone();
                    rho[((i * n + j) * n + l) * n + k] = -&coeffs[idx];
                }
            }
        }
        Ok(CurvatureTable { n, rho })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> &Scalar {
        &self.rho[((i * self.n + j) * self.n + k) * self.n + l]
    }

    /// Scalar curvature ρ = Σ_{ij} ρ_{ijij}.
    pub fn scalar_curvature(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc += self.component(i, j, i, j).clone();
            }
        }
        acc
    }

    /// Stabilizer-basis weights of ρ_{ij}: pairs ((k,l), ρ_{ijkl}) over k < l,
    /// so that ρ_{ij}(a) = Σ_{k<l} ρ_{ijkl}·(e_{kl} a)_ε.
    pub fn vertical_weights(&self, i: usize, j: usize) -> Vec<((usize, usize), Scalar)> {
        so_basis(self.n)
            .into_iter()
            .map(|(k, l)| ((k, l), self.component(i, j, k, l).clone()))
            .collect()
    }

    /// Evaluate the two-form coefficient ρ_{ij} on a stabilizer element,
    /// ρ_{ij}(a) = Σ_{k<l} ρ_{ijkl}·a_{kl}; linear, so the unit of the
    /// enveloping algebra (zero stabilizer part) evaluates to 0.
    pub fn evaluate(&self, i: usize, j: usize, a: &Mat) -> Result<Scalar, GroupError> {
        let coeffs = expand_so(self.n, a)?;
        let mut acc = Scalar::zero();
        for (idx, (k, l)) in so_basis(self.n).into_iter().enumerate() {
            acc += self.component(i, j, k, l) * &coeffs[idx];
        }
        Ok(acc)
    }

    /// Component-level reality: every ρ_{ijkl} must be a real scalar, which
    /// reduces the star and antipode identities on ρ to sign bookkeeping on
    /// basis elements. Returns the violating components (empty = all real).
    pub fn reality_violations(&self) -> Vec<String> {
        let n = self.n;
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        if !self.component(i, j, k, l).is_real() {
                            bad.push(format!("non-real component at {i}{j}{k}{l}"));
                        }
                    }
                }
            }
        }
        bad
    }

    /// The three symmetry families, checked exactly. Returns the list of
    /// violated relations (empty = all hold).
    pub fn symmetry_violations(&self) -> Vec<String> {
        let n = self.n;
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.component(i, j, k, l);
                        if -r.clone() != self.component(j, i, k, l).clone() {
                            bad.push(format!("index antisymmetry (left) at {i}{j}{k}{l}"));
                        }
                        if -r.clone() != self.component(i, j, l, k).clone() {
                            bad.push(format!("index antisymmetry (right) at {i}{j}{k}{l}"));
                        }
                        if r != self.component(k, l, i, j) {
                            bad.push(format!("pair symmetry at {i}{j}{k}{l}"));
                        }
                        let cyc = self.component(i, j, k, l).clone()
                            + self.component(i, k, l, j).clone()
                            + self.component(i, l, j, k).clone();
                        if !cyc.is_zero() {
                            bad.push(format!("first Bianchi at {i}{j}{k}{l}"));
                        }
                    }
                }
            }
        }
        bad
    }
}

/// Fixed Lie algebra isomorphism so(3) → su(2) used for every Spin(3) model:
/// e_{01} ↦ (i/2)σ₃, e_{02} ↦ −(i/2)σ₂, e_{12} ↦ (i/2)σ₁ (0-based pairs).
pub fn su2_image(k: usize, l: usize) -> Mat {
    let mut m = Mat::zeros(2, 2);
    match (k, l) {
        (0, 1) => {
            m.set(0, 0, Scalar::from_parts(0, 1, 1, 2));
            m.set(1, 1, Scalar::from_parts(0, 1, -1, 2));
        }
        (0, 2) => {
            m.set(0, 1, Scalar::from_ratio(-1, 2));
            m.set(1, 0, Scalar::from_ratio(1, 2));
        }
        (1, 2) => {
            m.set(0, 1, Scalar::from_parts(0, 1, 1, 2));
            m.set(1, 0, Scalar::from_parts(0, 1, 1, 2));
        }
        _ => panic!("su2_image expects a so(3) basis pair"),
    }
    m
}

/// Image of an arbitrary so(3) element under the fixed isomorphism.
pub fn su2_image_of(x: &Mat) -> Result<Mat, GroupError> {
    let coeffs = expand_so(3, x)?;
    let mut out = Mat::zeros(2, 2);
    for (idx, (k, l)) in so_basis(3).into_iter().enumerate() {
        out = out.add(&su2_image(k, l).scale(&coeffs[idx]));
    }
    Ok(out)
}

/// Derivative of the 2j-th symmetric power of the fundamental representation
/// in the monomial basis m_q = x^{2j−q} y^q, q = 0..2j.
pub fn sym_power_derivation(two_j: u32, x: &Mat) -> Mat {
    assert_eq!((x.rows(), x.cols()), (2, 2));
    let dim = two_j as usize + 1;
    let mut m = Mat::zeros(dim, dim);
    for q in 0..dim {
        let alpha = Scalar::from_int((two_j as usize - q) as i64);
        let beta = Scalar::from_int(q as i64);
        m.add_at(q, q, &(alpha.clone() * x.at(0, 0) + beta.clone() * x.at(1, 1)));
        if q + 1 < dim {
            m.add_at(q + 1, q, &(alpha * x.at(1, 0)));
        }
        if q > 0 {
            m.add_at(q - 1, q, &(beta * x.at(0, 1)));
        }
    }
    m
}

/// One Spin(3) irrep with the so(3) generator images and weight data.
pub struct Irrep {
    two_j: u32,
    gens: Vec<Mat>,
}

impl Irrep {
    /// Build the spin-j irrep (j = two_j/2) over the so(3) basis.
    pub fn spin3(two_j: u32) -> Self {
        let gens = so_basis(3)
            .into_iter()
            .map(|(k, l)| sym_power_derivation(two_j, &su2_image(k, l)))
            .collect();
        Irrep { two_j, gens }
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// Generator image for the so(3) basis pair (k, l), k < l.
    pub fn gen(&self, k: usize, l: usize) -> &Mat {
        let idx = so_basis(3).iter().position(|&p| p == (k, l)).expect("so(3) basis pair");
        &self.gens[idx]
    }

    /// Twice-weights of the Cartan generator e_{01} on the monomial basis;
    /// the q-th basis vector has weight (2j − 2q)/2, exactly.
    pub fn twice_weights(&self) -> Vec<i64> {
        let cartan = self.gen(0, 1);
        let dim = self.dim();
        let mut out = Vec::with_capacity(dim);
        for q in 0..dim {
            let w = self.two_j as i64 - 2 * q as i64;
            // Confirm the basis really is a weight basis for the Cartan.
            for r in 0..dim {
                let expected =
                    if r == q { Scalar::from_parts(0, 1, w, 2) } else { Scalar::zero() };
                assert_eq!(cartan.at(r, q), &expected, "monomial basis must diagonalize e01");
            }
            out.push(w);
        }
        out
    }

    /// Center parity observed from the 2π rotation exp(2π·π_j(e01)),
    /// rounded to ±1 within `tol`. Equals (−1)^{2j}.
    pub fn center_parity(&self, tol: f64) -> i8 {
        let two_pi = 2.0 * std::f64::consts::PI;
        let scaled = self
            .gen(0, 1)
            .scale(&Scalar::from_ratio((two_pi * 1e9).round() as i64, 1_000_000_000));
        let e = crate::linalg::expm(&scaled);
        let dim = self.dim();
        let candidate = e[(0, 0)].re.round() as i8;
        assert!(candidate == 1 || candidate == -1);
        for r in 0..dim {
            for c in 0..dim {
                let expected = if r == c { candidate as f64 } else { 0.0 };
                assert!(
                    (e[(r, c)].re - expected).abs() < tol && e[(r, c)].im.abs() < tol,
                    "2π rotation is not ±identity in irrep 2j={}",
                    self.two_j
                );
            }
        }
        candidate
    }
}

/// All Spin(3) irreps with 2j ≤ cutoff (half-integer spins at odd 2j), with
/// the so(3) brackets verified exactly at construction.
pub fn irrep_registry(cutoff: u32) -> Vec<Irrep> {
    let basis = so_basis(3);
    let f = so_structure_constants(3);
    (0..=cutoff)
        .map(|two_j| {
            let irrep = Irrep::spin3(two_j);
            for (a, &(k1, l1)) in basis.iter().enumerate() {
                for (b, &(k2, l2)) in basis.iter().enumerate() {
                    let bracket = irrep.gen(k1, l1).commutator(irrep.gen(k2, l2));
                    let mut expected = Mat::zeros(irrep.dim(), irrep.dim());
                    for (c, &(k3, l3)) in basis.iter().enumerate() {
                        expected = expected.add(&irrep.gen(k3, l3).scale(&f[a][b][c]));
                    }
                    assert_eq!(bracket, expected, "bracket violated in irrep 2j={two_j}");
                }
            }
            irrep
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle for so(m) brackets:
    /// [e_{kl}, e_{pq}] = δ_{lp}e_{kq} − δ_{kp}e_{lq} − δ_{lq}e_{kp} + δ_{kq}e_{lp}.
    fn bracket_oracle(m: usize, kl: (usize, usize), pq: (usize, usize)) -> Mat {
        let (k, l) = kl;
        let (p, q) = pq;
        let mut out = Mat::zeros(m, m);
        let mut add = |a: usize, b: usize, sign: i64| {
            if a == b {
                return;
            }
            let (a2, b2, s2) = if a < b { (a, b, sign) } else { (b, a, -sign) };
            out = out.add(&so_generator(m, a2, b2).scale(&Scalar::from_int(s2)));
        };
        if l == p {
            add(k, q, 1);
        }
        if k == p {
            add(l, q, -1);
        }
        if l == q {
            add(k, p, -1);
        }
        if k == q {
            add(l, p, 1);
        }
        out
    }

    #[test]
    fn so_brackets_match_delta_oracle() {
        for m in [3usize, 4, 5] {
            for &a in &so_basis(m) {
                for &b in &so_basis(m) {
                    let lhs = so_generator(m, a.0, a.1).commutator(&so_generator(m, b.0, b.1));
                    assert_eq!(lhs, bracket_oracle(m, a, b), "m={} {:?} {:?}", m, a, b);
                }
            }
        }
    }

    #[test]
    fn iota_bracket_example_n2() {
        // [ι(e_1), ι(e_2)] = −e_{12} inside so(3)  (0-based: −e_{01}).
        let lhs = iota_generator(2, 0).commutator(&iota_generator(2, 1));
        let mut expected = Mat::zeros(3, 3);
        expected.set(0, 1, Scalar::from_int(-1));
        expected.set(1, 0, Scalar::one());
        assert_eq!(lhs, expected);
    }

    #[test]
    fn curvature_components_and_scalar() {
        let t2 = CurvatureTable::new(2).unwrap();
        assert_eq!(t2.component(0, 1, 0, 1), &Scalar::one());
        assert_eq!(t2.scalar_curvature(), Scalar::from_int(2));

        let t4 = CurvatureTable::new(4).unwrap();
        assert_eq!(t4.scalar_curvature(), Scalar::from_int(12));
    }

    #[test]
    fn curvature_matches_round_metric_pattern() {
        // cross-check: the bracket recipe must reproduce the constant-curvature
        // tensor δ_{ik}δ_{jl} − δ_{il}δ_{jk} of the unit sphere.
        for n in [2usize, 4] {
            let t = CurvatureTable::new(n).unwrap();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let expected = (i == k && j == l) as i64 - (i == l && j == k) as i64;
                            assert_eq!(t.component(i, j, k, l), &Scalar::from_int(expected));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn curvature_symmetries_hold_exactly() {
        for n in [2usize, 4] {
            assert!(CurvatureTable::new(n).unwrap().symmetry_violations().is_empty());
        }
    }

    #[test]
    fn su2_map_preserves_brackets() {
        for &a in &so_basis(3) {
            for &b in &so_basis(3) {
                let so_bracket =
                    so_generator(3, a.0, a.1).commutator(&so_generator(3, b.0, b.1));
                let lhs = su2_image_of(&so_bracket).unwrap();
                let rhs = su2_image(a.0, a.1).commutator(&su2_image(b.0, b.1));
                assert_eq!(lhs, rhs, "bracket image mismatch at {:?} {:?}", a, b);
            }
        }
    }

    #[test]
    fn su2_images_are_skew_hermitian() {
        for (k, l) in so_basis(3) {
            let x = su2_image(k, l);
            assert_eq!(x.dagger(), x.neg());
        }
    }

    #[test]
    fn irrep_brackets_all_small_spins() {
        for two_j in 0..=6u32 {
            let irr = Irrep::spin3(two_j);
            for &a in &so_basis(3) {
                for &b in &so_basis(3) {
                    let so_bracket =
                        so_generator(3, a.0, a.1).commutator(&so_generator(3, b.0, b.1));
                    let coeffs = expand_so(3, &so_bracket).unwrap();
                    let mut rhs = Mat::zeros(irr.dim(), irr.dim());
                    for (idx, (k, l)) in so_basis(3).into_iter().enumerate() {
                        rhs = rhs.add(&irr.gen(k, l).scale(&coeffs[idx]));
                    }
                    let lhs = irr.gen(a.0, a.1).commutator(irr.gen(b.0, b.1));
                    assert_eq!(lhs, rhs, "2j={} {:?} {:?}", two_j, a, b);
                }
            }
        }
    }

    #[test]
    fn irrep_fundamental_recovers_su2_matrices() {
        let irr = Irrep::spin3(1);
        for (k, l) in so_basis(3) {
            assert_eq!(irr.gen(k, l), &su2_image(k, l));
        }
    }

    #[test]
    fn irrep_weights_and_center_parity() {
        for two_j in 0..=5u32 {
            let irr = Irrep::spin3(two_j);
            let w = irr.twice_weights();
            let expected: Vec<i64> =
                (0..=two_j as i64).map(|q| two_j as i64 - 2 * q).collect();
            assert_eq!(w, expected);
            let parity = irr.center_parity(1e-6);
            assert_eq!(parity as i64, if two_j % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn irrep_casimir_is_scalar() {
        // Σ_{k<l} π(e_{kl})² = −j(j+1)·id, exactly.
        for two_j in 0..=6u32 {
            let irr = Irrep::spin3(two_j);
            let mut casimir = Mat::zeros(irr.dim(), irr.dim());
            for (k, l) in so_basis(3) {
                casimir = casimir.add(&irr.gen(k, l).mul(irr.gen(k, l)));
            }
            let jj = Scalar::from_ratio(-((two_j * (two_j + 2)) as i64), 4);
            assert_eq!(casimir, Mat::identity(irr.dim()).scale(&jj));
        }
    }

    #[test]
    fn irrep_ladder_structure() {
        // Angular-momentum ladder oracle: J± shift the weight by ±1 and kill
        // the extreme vectors; [J₊, J₋] = 2J₃.
        for two_j in 1..=5u32 {
            let irr = Irrep::spin3(two_j);
            let i = Scalar::i();
            let j_plus = irr.gen(1, 2).scale(&-i.clone()).add(&irr.gen(0, 2).neg());
            let j_minus = irr.gen(1, 2).scale(&-i.clone()).add(irr.gen(0, 2));
            let j3 = irr.gen(0, 1).scale(&-i);
            let dim = irr.dim();
            // top weight vector is q = 0, bottom is q = 2j
            for q in 0..dim {
                let mut v = vec![Scalar::zero(); dim];
                v[q] = Scalar::one();
                let up = j_plus.apply(&v);
                let down = j_minus.apply(&v);
                for r in 0..dim {
                    if r + 1 != q && !up[r].is_zero() {
                        panic!("J+ must move q -> q-1 (weight +1)");
                    }
                    if r != q + 1 && !down[r].is_zero() {
                        panic!("J- must move q -> q+1 (weight −1)");
                    }
                }
                if q == 0 {
                    assert!(up.iter().all(|c| c.is_zero()));
                }
                if q == dim - 1 {
                    assert!(down.iter().all(|c| c.is_zero()));
                }
            }
            assert_eq!(j_plus.commutator(&j_minus), j3.scale(&Scalar::from_int(2)));
        }
    }

    #[test]
    fn registry_lists_verified_irreps_up_to_cutoff() {
        let registry = irrep_registry(4);
        assert_eq!(registry.len(), 5);
        for (two_j, irrep) in registry.iter().enumerate() {
            assert_eq!(irrep.two_j() as usize, two_j);
            assert_eq!(irrep.dim(), two_j + 1);
            let expected = if two_j % 2 == 0 { 1 } else { -1 };
            assert_eq!(irrep.center_parity(1e-9), expected);
        }
    }

    #[test]
    fn curvature_components_are_real_and_evaluate_linearly() {
        for n in [2usize, 4] {
            let table = CurvatureTable::new(n).unwrap();
            assert!(table.reality_violations().is_empty());
            // the unit pairs to zero, and negating the argument (star and
            // antipode on basis elements) negates the value
            assert_eq!(table.evaluate(0, 1, &Mat::zeros(n, n)).unwrap(), Scalar::zero());
            for (k, l) in so_basis(n) {
                let val = table.evaluate(0, 1, &so_generator(n, k, l)).unwrap();
                let neg = table.evaluate(0, 1, &so_generator(n, k, l).neg()).unwrap();
                assert!(val.is_real());
                assert_eq!(neg, -val);
            }
        }
    }
}
