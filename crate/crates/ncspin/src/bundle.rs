//! Horizontal differential calculus over a total-space model: the covariant
//! derivative, Hodge star and divergence, invariant subspaces (the base
//! algebra V and the form spaces Ω_M), the full complex Ω_P with
//! Maurer–Cartan and curvature legs, d∧, integration and its vanishing
//! lemmas, scalar products, the orientation subalgebra, and the frame
//! nondegeneracy witness.

use crate::exterior::{
    all_blades, blade_degree, blade_indices, hodge_blade, wedge_blades, Blade, ExtForm,
};
use crate::group::{so_basis, so_structure_constants, CurvatureTable};
use crate::linalg::Mat;
use crate::model::{ModelError, TotalSpaceModel};
use crate::pw::PeterWeylModel;
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CalculusError {
    #[error("expected a homogeneous form")]
    NotHomogeneous,
    #[error("element does not lie in the invariant span")]
    NotInSpan,
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn vec_zero(dim: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); dim]
}

fn vec_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

fn vec_axpy(acc: &mut [Scalar], s: &Scalar, v: &[Scalar]) {
    for (a, b) in acc.iter_mut().zip(v.iter()) {
        *a += b * s;
    }
}

/// Replace the leg at bit `leg` of `lblade` by each `(blade, coeff)` term of
/// `replacement`, keeping the remaining legs in place and tracking the wedge
/// signs of the re-insertion.
fn replace_leg(
    lblade: Blade,
    leg: usize,
    replacement: &[(Blade, Scalar)],
) -> Vec<(Blade, Scalar)> {
    let prefix = lblade & ((1u32 << leg) - 1);
    let suffix = lblade & !((1u32 << (leg + 1)) - 1);
    let mut out = Vec::new();
    for (rb, coeff) in replacement {
        let Some((inner, s1)) = wedge_blades(*rb, suffix) else { continue };
        let Some((full, s2)) = wedge_blades(prefix, inner) else { continue };
        out.push((full, coeff * &Scalar::from_int((s1 * s2) as i64)));
    }
    out
}

/// Element of B_N ⊗ Λ(ℂⁿ), stored per blade.
#[derive(Clone, Debug, PartialEq)]
pub struct HorForm {
    n: usize,
    dim: usize,
    comps: BTreeMap<Blade, Vec<Scalar>>,
}

impl HorForm {
    pub fn zero(n: usize, dim: usize) -> Self {
        HorForm { n, dim, comps: BTreeMap::new() }
    }

    pub fn from_component(n: usize, dim: usize, blade: Blade, coeffs: Vec<Scalar>) -> Self {
        let mut f = HorForm::zero(n, dim);
        f.add_component(blade, &coeffs, &Scalar::one());
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &BTreeMap<Blade, Vec<Scalar>> {
        &self.comps
    }

    pub fn component(&self, blade: Blade) -> Vec<Scalar> {
        self.comps.get(&blade).cloned().unwrap_or_else(|| vec_zero(self.dim))
    }

    pub fn add_component(&mut self, blade: Blade, coeffs: &[Scalar], scale: &Scalar) {
        assert_eq!(coeffs.len(), self.dim);
        let entry = self.comps.entry(blade).or_insert_with(|| vec_zero(self.dim));
        vec_axpy(entry, scale, coeffs);
        if vec_is_zero(entry) {
            self.comps.remove(&blade);
        }
    }

    pub fn add(&self, rhs: &HorForm) -> HorForm {
        assert_eq!((self.n, self.dim), (rhs.n, rhs.dim));
        let mut out = self.clone();
        for (b, v) in &rhs.comps {
            out.add_component(*b, v, &Scalar::one());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> HorForm {
        let mut out = HorForm::zero(self.n, self.dim);
        for (b, v) in &self.comps {
            out.add_component(*b, v, s);
        }
        out
    }

    pub fn neg(&self) -> HorForm {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// The blade degree when homogeneous; the zero form reports degree 0.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut deg = None;
        for b in self.comps.keys() {
            match deg {
                None => deg = Some(blade_degree(*b)),
                Some(d) if d == blade_degree(*b) => {}
                _ => return None,
            }
        }
        Some(deg.unwrap_or(0))
    }

    /// Coefficientwise *-conjugation, with blades fixed (they are real).
    pub fn bar<M: TotalSpaceModel>(&self, model: &M) -> HorForm {
        let mut out = HorForm::zero(self.n, self.dim);
        for (b, v) in &self.comps {
            out.add_component(*b, &model.star(v), &Scalar::one());
        }
        out
    }
}

/// Element of Ω_P = B_N ⊗ Λ(ℂⁿ) ⊗ L^∧, keyed by (blade, L-blade).
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaP {
    n: usize,
    m: usize,
    dim: usize,
    comps: BTreeMap<(Blade, Blade), Vec<Scalar>>,
}

impl OmegaP {
    pub fn zero(n: usize, m: usize, dim: usize) -> Self {
        OmegaP { n, m, dim, comps: BTreeMap::new() }
    }

    pub fn from_component(
        n: usize,
        m: usize,
        dim: usize,
        key: (Blade, Blade),
        coeffs: Vec<Scalar>,
    ) -> Self {
        let mut w = OmegaP::zero(n, m, dim);
        w.add_component(key, &coeffs, &Scalar::one());
        w
    }

    pub fn components(&self) -> &BTreeMap<(Blade, Blade), Vec<Scalar>> {
        &self.comps
    }

    pub fn component(&self, key: (Blade, Blade)) -> Vec<Scalar> {
        self.comps.get(&key).cloned().unwrap_or_else(|| vec_zero(self.dim))
    }

    pub fn add_component(&mut self, key: (Blade, Blade), coeffs: &[Scalar], scale: &Scalar) {
        assert_eq!(coeffs.len(), self.dim);
        let entry = self.comps.entry(key).or_insert_with(|| vec_zero(self.dim));
        vec_axpy(entry, scale, coeffs);
        if vec_is_zero(entry) {
            self.comps.remove(&key);
        }
    }

    pub fn add(&self, rhs: &OmegaP) -> OmegaP {
        assert_eq!((self.n, self.m, self.dim), (rhs.n, rhs.m, rhs.dim));
        let mut out = self.clone();
        for (k, v) in &rhs.comps {
            out.add_component(*k, v, &Scalar::one());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> OmegaP {
        let mut out = OmegaP::zero(self.n, self.m, self.dim);
        for (k, v) in &self.comps {
            out.add_component(*k, v, s);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Total degree (blade plus L-blade) when homogeneous.
    pub fn total_degree(&self) -> Option<usize> {
        let mut deg = None;
        for (b, l) in self.comps.keys() {
            let d = blade_degree(*b) + blade_degree(*l);
            match deg {
                None => deg = Some(d),
                Some(existing) if existing == d => {}
                _ => return None,
            }
        }
        Some(deg.unwrap_or(0))
    }

    pub fn embed_hor(phi: &HorForm, m: usize) -> OmegaP {
        let mut out = OmegaP::zero(phi.n, m, phi.dim);
        for (b, v) in &phi.comps {
            out.add_component((*b, 0), v, &Scalar::one());
        }
        out
    }
}

/// Joint kernel of block- and parity-preserving generators, computed block
/// by block and filtered to the requested center parity. Returns full-length
/// basis vectors in deterministic block order.
/// Derivation action of the rotation generator e_{kl} on a frame blade,
/// sending e_l to e_k and e_k to -e_l leg by leg.
pub(crate) fn rotate_blade(k: usize, l: usize, blade: Blade) -> Vec<(Blade, i8)> {
    let mut out = Vec::new();
    for leg in blade_indices(blade) {
        let (image, base_sign) = if leg == l {
            (k, 1i8)
        } else if leg == k {
            (l, -1i8)
        } else {
            continue;
        };
        let terms = [(1u32 << image, Scalar::one())];
        for (full, c) in replace_leg(blade, leg, &terms) {
            let s = if c.is_one() { 1 } else { -1 };
            out.push((full, base_sign * s));
        }
    }
    out
}

pub fn invariant_subspace(
    mats: &[Mat],
    block_of: &[usize],
    parity: &[i8],
    want: i8,
) -> Vec<Vec<Scalar>> {
    let dim = block_of.len();
    assert_eq!(parity.len(), dim);
    for m in mats {
        assert_eq!((m.rows(), m.cols()), (dim, dim));
    }
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..dim {
        blocks.entry(block_of[i]).or_default().push(i);
    }
    let mut out = Vec::new();
    for indices in blocks.values() {
        let keep: Vec<usize> = indices.iter().copied().filter(|&i| parity[i] == want).collect();
        if keep.is_empty() {
            continue;
        }
        for m in mats {
            for &c in &keep {
                for r in 0..dim {
                    if !m.at(r, c).is_zero() {
                        assert!(
                            keep.contains(&r),
                            "generator does not preserve the block/parity class"
                        );
                    }
                }
            }
        }
        let nk = keep.len();
        let mut stacked = Mat::zeros(mats.len() * nk, nk);
        for (mi, m) in mats.iter().enumerate() {
            for (r, &ri) in keep.iter().enumerate() {
                for (c, &ci) in keep.iter().enumerate() {
                    stacked.set(mi * nk + r, c, m.at(ri, ci).clone());
                }
            }
        }
        let kern = stacked.kernel();
        for col in 0..kern.cols() {
            let mut v = vec_zero(dim);
            for (r, &ri) in keep.iter().enumerate() {
                v[ri] = kern.at(r, col).clone();
            }
            out.push(v);
        }
    }
    out
}

/// The exterior algebra of the vertical Lie algebra L with the
/// Maurer–Cartan differential dθ(X, Y) = −θ([X, Y]), extended by the graded
/// Leibniz rule.
pub struct VerticalComplex {
    m: usize,
    two_forms: Vec<ExtForm>,
}

impl VerticalComplex {
    pub fn new(n: usize) -> Self {
        let fcon = so_structure_constants(n);
        let m = so_basis(n).len();
        let two_forms = (0..m)
            .map(|c| {
                let mut form = ExtForm::zero(m);
                for a in 0..m {
                    for b in (a + 1)..m {
                        let coeff = -fcon[a][b][c].clone();
                        if !coeff.is_zero() {
                            form.add_term((1 << a) | (1 << b), coeff);
                        }
                    }
                }
                form
            })
            .collect();
        VerticalComplex { m, two_forms }
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    /// The image of the degree-one generator θ^c.
    pub fn two_form(&self, c: usize) -> &ExtForm {
        &self.two_forms[c]
    }

    pub fn d(&self, form: &ExtForm) -> ExtForm {
        assert_eq!(form.n(), self.m);
        let mut out = ExtForm::zero(self.m);
        for (lblade, coeff) in form.terms() {
            for (t, &leg) in blade_indices(*lblade).iter().enumerate() {
                let sign = if t % 2 == 0 { 1 } else { -1 };
                let terms: Vec<(Blade, Scalar)> = self.two_forms[leg]
                    .terms()
                    .iter()
                    .map(|(b, c)| (*b, c.clone()))
                    .collect();
                for (full, c) in replace_leg(*lblade, leg, &terms) {
                    out.add_term(full, coeff * &c * Scalar::from_int(sign));
                }
            }
        }
        out
    }
}

/// The calculus over one total-space model.
pub struct Calculus<'a, M: TotalSpaceModel> {
    model: &'a M,
    n: usize,
    m: usize,
    pairs: Vec<(usize, usize)>,
    curvature: CurvatureTable,
    vertical: VerticalComplex,
    fcon: Vec<Vec<Vec<Scalar>>>,
}

impl<'a, M: TotalSpaceModel> Calculus<'a, M> {
    pub fn new(model: &'a M) -> Self {
        let n = model.n();
        let pairs = so_basis(n);
        let m = pairs.len();
        let curvature = CurvatureTable::new(n).expect("frame curvature table");
        let vertical = VerticalComplex::new(n);
        let fcon = so_structure_constants(n);
        Calculus { model, n, m, pairs, curvature, vertical, fcon }
    }

    pub fn model(&self) -> &M {
        self.model
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertical_rank(&self) -> usize {
        self.m
    }

    pub fn curvature(&self) -> &CurvatureTable {
        &self.curvature
    }

    pub fn top_blade(&self) -> Blade {
        (1u32 << self.n) - 1
    }

    pub fn top_l_blade(&self) -> Blade {
        (1u32 << self.m) - 1
    }

    /// ∇(b⊗θ) = Σ_k X_k(b) ⊗ e_k∧θ.
    pub fn covariant_derivative(&self, phi: &HorForm) -> HorForm {
        let mut out = HorForm::zero(self.n, self.model.dim());
        for (b, v) in phi.components() {
            for k in 0..self.n {
                if let Some((wb, sign)) = wedge_blades(1 << k, *b) {
                    let xv = self.model.xi(k).apply(v);
                    out.add_component(wb, &xv, &Scalar::from_int(sign as i64));
                }
            }
        }
        out
    }

    /// Blade-wise Hodge star on horizontal forms.
    pub fn hodge_hor(&self, phi: &HorForm) -> HorForm {
        let mut out = HorForm::zero(self.n, self.model.dim());
        for (b, v) in phi.components() {
            let (hb, sign) = hodge_blade(self.n, *b);
            out.add_component(hb, v, &Scalar::from_int(sign as i64));
        }
        out
    }

    /// ∇†(φ) = −(−1)^{n−nk} ★∇★(φ) on homogeneous degree k.
    pub fn divergence(&self, phi: &HorForm) -> Result<HorForm, CalculusError> {
        let k = phi.homogeneous_degree().ok_or(CalculusError::NotHomogeneous)?;
        let sign = if (self.n * (k + 1)) % 2 == 0 { -1 } else { 1 };
        Ok(self
            .hodge_hor(&self.covariant_derivative(&self.hodge_hor(phi)))
            .scale(&Scalar::from_int(sign)))
    }

    /// Derivation action of the so(n) generator e_{kl} on a blade of the Λ
    /// factor, as a list of (blade, sign) terms.
    fn blade_vector_action(&self, k: usize, l: usize, blade: Blade) -> Vec<(Blade, i8)> {
        rotate_blade(k, l, blade)
    }

    /// Combined infinitesimal coaction D_a = D^B_a ⊗ id + id ⊗ λ_a on
    /// B ⊗ Λ, for the a-th so(n) basis generator.
    pub fn combined_coaction(&self, a: usize, phi: &HorForm) -> HorForm {
        let (k, l) = self.pairs[a];
        let mut out = HorForm::zero(self.n, self.model.dim());
        for (b, v) in phi.components() {
            out.add_component(*b, &self.model.coaction_gen(k, l).apply(v), &Scalar::one());
            for (b2, sign) in self.blade_vector_action(k, l, *b) {
                out.add_component(b2, v, &Scalar::from_int(sign as i64));
            }
        }
        out
    }

    /// The curvature two-form R(θ^a) = Σ_{i<j} ρ_{ij a} e_i∧e_j, with unit
    /// coefficient in B.
    pub fn curvature_two_form(&self, a: usize) -> HorForm {
        let unit = self.model.unit();
        let mut out = HorForm::zero(self.n, self.model.dim());
        for (blade, rho) in self.curvature_blades(a) {
            out.add_component(blade, &unit, &rho);
        }
        out
    }

    fn curvature_blades(&self, a: usize) -> Vec<(Blade, Scalar)> {
        let (k, l) = self.pairs[a];
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let rho = self.curvature.component(i, j, k, l);
                if !rho.is_zero() {
                    out.push(((1 << i) | (1 << j), rho.clone()));
                }
            }
        }
        out
    }

    /// The connection ω(θ^a) = 1⊗1⊗θ^a.
    pub fn connection_omega(&self, a: usize) -> OmegaP {
        assert!(a < self.m);
        OmegaP::from_component(self.n, self.m, self.model.dim(), (0, 1 << a), self.model.unit())
    }

    /// Maurer–Cartan differential on the vertical exterior algebra.
    pub fn maurer_cartan_d(&self, form: &ExtForm) -> ExtForm {
        self.vertical.d(form)
    }

    /// The differential d∧ on Ω_P: the ∇ part, the infinitesimal coaction
    /// legs with θ^a appended, and the graded Leibniz action on L-legs
    /// through d∧(θ^a) = R(θ^a) + dθ^a. Every contribution scales existing
    /// coefficients (the curvature coefficients are multiples of the unit),
    /// so no truncated product is required and overflow cannot arise.
    pub fn d_wedge(&self, w: &OmegaP) -> OmegaP {
        let dim = self.model.dim();
        let mut out = OmegaP::zero(self.n, self.m, dim);
        for ((blade, lblade), v) in w.components() {
            let hor_sign =
                if blade_degree(*blade) % 2 == 0 { Scalar::one() } else { Scalar::from_int(-1) };
            for k in 0..self.n {
                if let Some((wb, sign)) = wedge_blades(1 << k, *blade) {
                    let xv = self.model.xi(k).apply(v);
                    out.add_component((wb, *lblade), &xv, &Scalar::from_int(sign as i64));
                }
            }
            let phi = HorForm::from_component(self.n, dim, *blade, v.clone());
            for a in 0..self.m {
                let Some((wl, sl)) = wedge_blades(1 << a, *lblade) else { continue };
                let scale = &hor_sign * &Scalar::from_int(sl as i64);
                for (b2, v2) in self.combined_coaction(a, &phi).components() {
                    out.add_component((*b2, wl), v2, &scale);
                }
            }
            for (t, &leg) in blade_indices(*lblade).iter().enumerate() {
                let scale_base = &hor_sign * &Scalar::from_int(if t % 2 == 0 { 1 } else { -1 });
                let rest = lblade & !(1u32 << leg);
                for (rb, rho) in self.curvature_blades(leg) {
                    let Some((wb, sb)) = wedge_blades(*blade, rb) else { continue };
                    out.add_component(
                        (wb, rest),
                        v,
                        &(&scale_base * &rho * Scalar::from_int(sb as i64)),
                    );
                }
                let terms: Vec<(Blade, Scalar)> = self
                    .vertical
                    .two_form(leg)
                    .terms()
                    .iter()
                    .map(|(b, c)| (*b, c.clone()))
                    .collect();
                for (full, c) in replace_leg(*lblade, leg, &terms) {
                    out.add_component((*blade, full), v, &(&scale_base * &c));
                }
            }
        }
        out
    }

    /// Infinitesimal total coaction on Ω_P: the combined action on B ⊗ Λ
    /// plus the adjoint action on L-legs.
    pub fn omega_p_coaction(&self, a: usize, w: &OmegaP) -> OmegaP {
        let dim = self.model.dim();
        let mut out = OmegaP::zero(self.n, self.m, dim);
        for ((blade, lblade), v) in w.components() {
            let phi = HorForm::from_component(self.n, dim, *blade, v.clone());
            for (b2, v2) in self.combined_coaction(a, &phi).components() {
                out.add_component((*b2, *lblade), v2, &Scalar::one());
            }
            for &leg in &blade_indices(*lblade) {
                let terms: Vec<(Blade, Scalar)> = (0..self.m)
                    .filter(|&e| !self.fcon[a][leg][e].is_zero())
                    .map(|e| (1u32 << e, self.fcon[a][leg][e].clone()))
                    .collect();
                for (full, c) in replace_leg(*lblade, leg, &terms) {
                    out.add_component((*blade, full), v, &c);
                }
            }
        }
        out
    }

    /// ∫_P: the state applied to the coefficient of the top blade wedged
    /// with the fixed vertical volume (the lexicographic wedge of the
    /// L-basis).
    pub fn integral_p(&self, w: &OmegaP) -> Scalar {
        self.model.nu(&w.component((self.top_blade(), self.top_l_blade())))
    }

    /// ∫↑: the state applied to the top-blade coefficient; equals
    /// ∫_P(φ ⊗ W) for the fixed vertical volume W.
    pub fn integral_up(&self, phi: &HorForm) -> Scalar {
        self.model.nu(&phi.component(self.top_blade()))
    }

    /// The scalar product (ψ,φ) = ∫↑ ψ̄∧★φ = Σ_I ν(ψ_I* φ_I), antilinear in
    /// the first slot. Evaluated through the state of a product, which both
    /// backends compute without truncating, so no overflow can arise.
    pub fn inner_hor(&self, psi: &HorForm, phi: &HorForm) -> Scalar {
        let mut acc = Scalar::zero();
        for (b, v) in psi.components() {
            if let Some(w) = phi.components().get(b) {
                acc += self.model.nu_product(&self.model.star(v), w);
            }
        }
        acc
    }

    /// ∫↑ of ψ̄∧χ by bilinearity through the state, pairing blades that
    /// wedge to the volume blade.
    pub fn integral_up_of_barred_wedge(&self, psi: &HorForm, chi: &HorForm) -> Scalar {
        let mut acc = Scalar::zero();
        for (b1, v1) in psi.components() {
            for (b2, v2) in chi.components() {
                if let Some((wb, sign)) = wedge_blades(*b1, *b2) {
                    if wb == self.top_blade() {
                        let paired = self.model.nu_product(&self.model.star(v1), v2);
                        acc += paired * Scalar::from_int(sign as i64);
                    }
                }
            }
        }
        acc
    }

    /// Basis of the base algebra V: coaction invariants of center
    /// parity +1.
    pub fn base_algebra(&self) -> Vec<Vec<Scalar>> {
        let dim = self.model.dim();
        let mats: Vec<Mat> =
            self.pairs.iter().map(|&(k, l)| self.model.coaction_gen(k, l).clone()).collect();
        let block_of: Vec<usize> = (0..dim).map(|i| self.model.block_id(i)).collect();
        invariant_subspace(&mats, &block_of, self.model.center_parity(), 1)
    }

    /// Indices spanning the orientation subalgebra: all blocks of center
    /// parity +1.
    pub fn orientation_subalgebra(&self) -> Vec<usize> {
        (0..self.model.dim()).filter(|&i| self.model.center_parity()[i] == 1).collect()
    }

    /// The frame derivations preserve the orientation subalgebra.
    pub fn orientation_closed_under_frame(&self) -> bool {
        let keep = self.orientation_subalgebra();
        for k in 0..self.n {
            let x = self.model.xi(k);
            for &c in &keep {
                for r in 0..self.model.dim() {
                    if !x.at(r, c).is_zero() && !keep.contains(&r) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Invariant basis of Ω_M^k inside B ⊗ Λ^k (the Λ factor carries the
    /// vector-representation twist).
    pub fn omega_m_basis(&self, k: usize) -> Vec<HorForm> {
        let dim = self.model.dim();
        let blades: Vec<Blade> =
            all_blades(self.n).into_iter().filter(|b| blade_degree(*b) == k).collect();
        let nb = blades.len();
        let pos: BTreeMap<Blade, usize> =
            blades.iter().enumerate().map(|(p, b)| (*b, p)).collect();
        let cdim = dim * nb;
        let mats: Vec<Mat> = (0..self.m)
            .map(|a| {
                let (kk, ll) = self.pairs[a];
                let mut mat = Mat::zeros(cdim, cdim);
                let db = self.model.coaction_gen(kk, ll);
                for (bp, blade) in blades.iter().enumerate() {
                    for j in 0..dim {
                        let col = j * nb + bp;
                        for i in 0..dim {
                            let entry = db.at(i, j);
                            if !entry.is_zero() {
                                mat.add_at(i * nb + bp, col, entry);
                            }
                        }
                        for (b2, sign) in self.blade_vector_action(kk, ll, *blade) {
                            mat.add_at(j * nb + pos[&b2], col, &Scalar::from_int(sign as i64));
                        }
                    }
                }
                mat
            })
            .collect();
        let block_of: Vec<usize> = (0..cdim).map(|i| self.model.block_id(i / nb)).collect();
        let parity: Vec<i8> = (0..cdim).map(|i| self.model.center_parity()[i / nb]).collect();
        invariant_subspace(&mats, &block_of, &parity, 1)
            .into_iter()
            .map(|v| {
                let mut f = HorForm::zero(self.n, dim);
                for (bp, blade) in blades.iter().enumerate() {
                    let coeffs: Vec<Scalar> = (0..dim).map(|j| v[j * nb + bp].clone()).collect();
                    if !vec_is_zero(&coeffs) {
                        f.add_component(*blade, &coeffs, &Scalar::one());
                    }
                }
                f
            })
            .collect()
    }

    /// The restricted complex on the base: bases of every Ω_M^k together
    /// with the matrices of d_M, d_M†, ★_M, Δ_M and the Gram matrices of
    /// the scalar product.
    pub fn base_complex(&self) -> Result<BaseComplex, CalculusError> {
        let n = self.n;
        let dim = self.model.dim();
        let bases: Vec<Vec<HorForm>> = (0..=n).map(|k| self.omega_m_basis(k)).collect();
        let blades: Vec<Vec<Blade>> = (0..=n)
            .map(|k| all_blades(n).into_iter().filter(|b| blade_degree(*b) == k).collect())
            .collect();
        let mut complex = BaseComplex {
            n,
            dim,
            blades,
            basis_mats: Vec::new(),
            bases,
            d: Vec::new(),
            d_dag: Vec::new(),
            star: Vec::new(),
            lap: Vec::new(),
            gram: Vec::new(),
        };
        complex.basis_mats = (0..=n)
            .map(|k| {
                let cols: Vec<Vec<Scalar>> = complex.bases[k]
                    .iter()
                    .map(|phi| complex.flatten(phi, k).expect("basis flattens"))
                    .collect();
                Mat::from_columns(dim * complex.blades[k].len(), &cols)
            })
            .collect();
        let mut d = Vec::new();
        let mut d_dag = Vec::new();
        let mut star = Vec::new();
        let mut gram = Vec::new();
        for k in 0..=n {
            d.push(if k < n {
                complex.operator_matrix(k, k + 1, &|phi| Ok(self.covariant_derivative(phi)))?
            } else {
                Mat::zeros(0, complex.bases[k].len())
            });
            d_dag.push(if k > 0 {
                complex.operator_matrix(k, k - 1, &|phi| self.divergence(phi))?
            } else {
                Mat::zeros(0, complex.bases[k].len())
            });
            star.push(complex.operator_matrix(k, n - k, &|phi| Ok(self.hodge_hor(phi)))?);
            let mut g = Mat::zeros(complex.bases[k].len(), complex.bases[k].len());
            for (r, a) in complex.bases[k].iter().enumerate() {
                for (c, b) in complex.bases[k].iter().enumerate() {
                    g.set(r, c, self.inner_hor(a, b));
                }
            }
            gram.push(g);
        }
        let mut lap = Vec::new();
        for k in 0..=n {
            let mut l = Mat::zeros(complex.bases[k].len(), complex.bases[k].len());
            if k < n {
                l = l.add(&d_dag[k + 1].mul(&d[k]));
            }
            if k > 0 {
                l = l.add(&d[k - 1].mul(&d_dag[k]));
            }
            lap.push(l);
        }
        complex.d = d;
        complex.d_dag = d_dag;
        complex.star = star;
        complex.lap = lap;
        complex.gram = gram;
        Ok(complex)
    }

    /// ∇²(φ) = −Σ_a D_a(φ)∧ρ(θ^a) on every B ⊗ Λ basis element, exactly.
    pub fn curvature_identity_holds(&self) -> bool {
        let dim = self.model.dim();
        for blade in all_blades(self.n) {
            if blade_degree(blade) + 2 > self.n {
                continue;
            }
            for i in 0..dim {
                let mut v = vec_zero(dim);
                v[i] = Scalar::one();
                let phi = HorForm::from_component(self.n, dim, blade, v);
                let lhs = self.covariant_derivative(&self.covariant_derivative(&phi));
                let mut rhs = HorForm::zero(self.n, dim);
                for a in 0..self.m {
                    let da = self.combined_coaction(a, &phi);
                    for (b1, v1) in da.components() {
                        for (rb, rho) in self.curvature_blades(a) {
                            if let Some((wb, sign)) = wedge_blades(*b1, rb) {
                                rhs.add_component(
                                    wb,
                                    v1,
                                    &(&rho * &Scalar::from_int(-(sign as i64))),
                                );
                            }
                        }
                    }
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// d∧ squares to zero on every (blade, L-blade, basis index) element.
    pub fn d_wedge_squares_to_zero(&self) -> bool {
        let dim = self.model.dim();
        for blade in all_blades(self.n) {
            for lblade in all_blades(self.m) {
                for i in 0..dim {
                    let mut v = vec_zero(dim);
                    v[i] = Scalar::one();
                    let w = OmegaP::from_component(self.n, self.m, dim, (blade, lblade), v);
                    if !self.d_wedge(&self.d_wedge(&w)).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// ∫_P d∧ = 0 on every basis element of total degree n+m−1.
    pub fn integral_annihilates_d_wedge(&self) -> bool {
        let dim = self.model.dim();
        for blade in all_blades(self.n) {
            for lblade in all_blades(self.m) {
                if blade_degree(blade) + blade_degree(lblade) != self.n + self.m - 1 {
                    continue;
                }
                for i in 0..dim {
                    let mut v = vec_zero(dim);
                    v[i] = Scalar::one();
                    let w = OmegaP::from_component(self.n, self.m, dim, (blade, lblade), v);
                    if !self.integral_p(&self.d_wedge(&w)).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Covariance of ∫_P, checked infinitesimally: the total coaction of
    /// every generator is annihilated by ∫_P on every basis element.
    pub fn integral_is_invariant_infinitesimally(&self) -> bool {
        let dim = self.model.dim();
        for blade in all_blades(self.n) {
            for lblade in all_blades(self.m) {
                for i in 0..dim {
                    let mut v = vec_zero(dim);
                    v[i] = Scalar::one();
                    let w = OmegaP::from_component(self.n, self.m, dim, (blade, lblade), v);
                    for a in 0..self.m {
                        if !self.integral_p(&self.omega_p_coaction(a, &w)).is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// ∫↑∇(φ) = 0 on every basis element of degree n−1.
    pub fn integral_up_annihilates_nabla(&self) -> bool {
        let dim = self.model.dim();
        for blade in all_blades(self.n) {
            if blade_degree(blade) != self.n - 1 {
                continue;
            }
            for i in 0..dim {
                let mut v = vec_zero(dim);
                v[i] = Scalar::one();
                let phi = HorForm::from_component(self.n, dim, blade, v);
                if !self.integral_up(&self.covariant_derivative(&phi)).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Frame integrability on the base: every [X_i, X_j] annihilates V.
    pub fn frame_commutators_vanish_on_base(&self) -> bool {
        let basis = self.base_algebra();
        for i in 0..self.n {
            for j in 0..self.n {
                let comm = self.model.xi(i).commutator(self.model.xi(j));
                for v in &basis {
                    if !vec_is_zero(&comm.apply(v)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Covariance of the frame: [R_a, X_i] = Σ_j (e_a)_{ji} X_j for every
    /// so(n) basis generator.
    pub fn frame_is_covariant(&self) -> bool {
        for &(k, l) in &self.pairs {
            let r = self.model.coaction_gen(k, l);
            for i in 0..self.n {
                let lhs = r.commutator(self.model.xi(i));
                let rhs = if i == l {
                    self.model.xi(k).clone()
                } else if i == k {
                    self.model.xi(l).neg()
                } else {
                    Mat::zeros(self.model.dim(), self.model.dim())
                };
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// The restricted complex over the base algebra; matrices act on
/// coordinates in the stored bases.
pub struct BaseComplex {
    n: usize,
    dim: usize,
    blades: Vec<Vec<Blade>>,
    basis_mats: Vec<Mat>,
    pub bases: Vec<Vec<HorForm>>,
    pub d: Vec<Mat>,
    pub d_dag: Vec<Mat>,
    pub star: Vec<Mat>,
    pub lap: Vec<Mat>,
    pub gram: Vec<Mat>,
}

impl BaseComplex {
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims()
            .iter()
            .enumerate()
            .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        let n = self.n;
        (0..=n)
            .map(|k| {
                let rank_out = if k < n { self.d[k].rank() } else { 0 };
                let rank_in = if k > 0 { self.d[k - 1].rank() } else { 0 };
                self.bases[k].len() - rank_out - rank_in
            })
            .collect()
    }

    fn flatten(&self, phi: &HorForm, k: usize) -> Result<Vec<Scalar>, CalculusError> {
        let nb = self.blades[k].len();
        let mut v = vec_zero(self.dim * nb);
        for (blade, coeffs) in phi.components() {
            let bp = self.blades[k]
                .iter()
                .position(|b| b == blade)
                .ok_or(CalculusError::NotInSpan)?;
            for j in 0..self.dim {
                v[j * nb + bp] = coeffs[j].clone();
            }
        }
        Ok(v)
    }

    /// Coordinates of a degree-k element in the stored Ω_M^k basis.
    pub fn coords(&self, phi: &HorForm, k: usize) -> Result<Vec<Scalar>, CalculusError> {
        let flat = self.flatten(phi, k)?;
        let target = Mat::from_columns(self.dim * self.blades[k].len(), &[flat]);
        let sol = self.basis_mats[k].solve(&target).ok_or(CalculusError::NotInSpan)?;
        Ok((0..sol.rows()).map(|r| sol.at(r, 0).clone()).collect())
    }

    fn from_coords(&self, k: usize, x: &[Scalar]) -> HorForm {
        let mut out = HorForm::zero(self.n, self.dim);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.bases[k][i].scale(c));
            }
        }
        out
    }

    fn operator_matrix(
        &self,
        k_from: usize,
        k_to: usize,
        op: &dyn Fn(&HorForm) -> Result<HorForm, CalculusError>,
    ) -> Result<Mat, CalculusError> {
        let mut mat = Mat::zeros(self.bases[k_to].len(), self.bases[k_from].len());
        for (c, phi) in self.bases[k_from].iter().enumerate() {
            let image = op(phi)?;
            for (r, val) in self.coords(&image, k_to)?.into_iter().enumerate() {
                mat.set(r, c, val);
            }
        }
        Ok(mat)
    }

    /// d_M(ω): the restriction of ∇; errors when ω is not in the Ω_M span.
    pub fn d_m(&self, phi: &HorForm) -> Result<HorForm, CalculusError> {
        let k = phi.homogeneous_degree().ok_or(CalculusError::NotHomogeneous)?;
        let x = self.coords(phi, k)?;
        if k == self.n {
            return Ok(HorForm::zero(self.n, self.dim));
        }
        let y = self.d[k].apply(&x);
        Ok(self.from_coords(k + 1, &y))
    }

    /// Δ_M(ω) = (d_M d_M† + d_M† d_M)(ω); grade preserving.
    pub fn laplacian_m(&self, phi: &HorForm) -> Result<HorForm, CalculusError> {
        let k = phi.homogeneous_degree().ok_or(CalculusError::NotHomogeneous)?;
        let x = self.coords(phi, k)?;
        let y = self.lap[k].apply(&x);
        Ok(self.from_coords(k, &y))
    }
}

/// A verified frame nondegeneracy witness: candidate indices α (the part of
/// B with coefficient blocks at most the cutoff) and per-frame-index
/// coefficient matrices with b_{iα} = Σ_β c_{iαβ} v_β such that
/// Σ_α b_{iα} X_j(v_α) = δ_{ij}·1.
pub struct FrameWitness {
    pub cutoff: u32,
    pub candidates: Vec<usize>,
    pub b_coeffs: Vec<Mat>,
}

/// Solve the frame condition with all b, v drawn from the blocks of the
/// Peter–Weyl model with 2j ≤ `cutoff`. The linear system is assembled in
/// the model of cutoff 2·`cutoff`, which holds every required product
/// exactly. Returns `None` when no witness exists at this cutoff.
pub fn frame_nondegeneracy_witness(cutoff: u32) -> Option<FrameWitness> {
    let model = PeterWeylModel::new(2 * cutoff);
    let dim = model.dim();
    let candidates: Vec<usize> =
        (0..dim).filter(|&i| model.basis_meta()[i].0 <= cutoff).collect();
    let nc = candidates.len();
    let mut a = Mat::zeros(2 * dim, nc * nc);
    for (ai, &va) in candidates.iter().enumerate() {
        for j in 0..2usize {
            let xv = model.xi(j).apply(&model.basis_vector(va));
            if vec_is_zero(&xv) {
                continue;
            }
            for (bi, &vb) in candidates.iter().enumerate() {
                let prod = model
                    .product(&model.basis_vector(vb), &xv)
                    .expect("candidate products stay below twice the cutoff");
                for (row, val) in prod.into_iter().enumerate() {
                    if !val.is_zero() {
                        a.add_at(j * dim + row, ai * nc + bi, &val);
                    }
                }
            }
        }
    }
    let unit = model.unit();
    let mut rhs = Mat::zeros(2 * dim, 2);
    for i in 0..2usize {
        for (row, val) in unit.iter().enumerate() {
            rhs.set(i * dim + row, i, val.clone());
        }
    }
    let sol = a.solve(&rhs)?;
    let b_coeffs: Vec<Mat> = (0..2)
        .map(|i| Mat::from_fn(nc, nc, |alpha, beta| sol.at(alpha * nc + beta, i).clone()))
        .collect();
    let witness = FrameWitness { cutoff, candidates, b_coeffs };
    assert!(
        verify_frame_witness(&model, &witness),
        "solver produced an invalid frame witness"
    );
    Some(witness)
}

/// Recompute Σ_α b_{iα} X_j(v_α) from the witness data and compare against
/// δ_{ij}·1, exactly.
pub fn verify_frame_witness(model: &PeterWeylModel, w: &FrameWitness) -> bool {
    let dim = model.dim();
    for i in 0..2usize {
        for j in 0..2usize {
            let mut acc = vec_zero(dim);
            for (ai, &va) in w.candidates.iter().enumerate() {
                let xv = model.xi(j).apply(&model.basis_vector(va));
                if vec_is_zero(&xv) {
                    continue;
                }
                let mut b = vec_zero(dim);
                for (bi, &vb) in w.candidates.iter().enumerate() {
                    let c = w.b_coeffs[i].at(ai, bi);
                    if !c.is_zero() {
                        b[vb] = b[vb].clone() + c;
                    }
                }
                if vec_is_zero(&b) {
                    continue;
                }
                let prod = model.product(&b, &xv).expect("witness products representable");
                vec_axpy(&mut acc, &Scalar::one(), &prod);
            }
            let expected = if i == j { model.unit() } else { vec_zero(dim) };
            if acc != expected {
                return false;
            }
        }
    }
    true
}
