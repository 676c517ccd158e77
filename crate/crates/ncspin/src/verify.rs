//! Named verification checks over the Clifford kernel, the symbolic Cuntz
//! relations, the base calculus, and the spinor bundle. Every check carries
//! a stable anchor label, a pass flag, and a numeric deviation so the whole
//! battery can be reported uniformly.

use crate::bundle::{frame_nondegeneracy_witness, verify_frame_witness, Calculus, HorForm};
use crate::clifford::GammaRep;
use crate::cuntz::{
    coaction, equal, equal_sampled, freeness_witness, normal_form, CuntzElement, Letter,
    PolyCoeff, Word,
};
use crate::group::{so_basis, CurvatureTable};
use crate::linalg::{hermitian_eigenvalues, Mat};
use crate::model::TotalSpaceModel;
use crate::pw::PeterWeylModel;
use crate::report::{CheckRow, SCHEMA};
use crate::scalar::Scalar;
use crate::spinor::SpinorBundle;

/// Floor for numerically certified positivity of Gram spectra.
pub const POSITIVITY_FLOOR: f64 = 1e-10;

/// Tolerance for spectra obtained through floating-point eigensolves.
pub const SPECTRUM_TOL: f64 = 1e-8;

const GENERIC: &str = "generic";

/// Result of one named check: suite and check identifiers, a stable anchor
/// label, the backend it ran on, and the observed deviation.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub suite: &'static str,
    pub check: String,
    pub anchor: &'static str,
    pub backend: String,
    pub passed: bool,
    pub deviation: f64,
}

impl CheckOutcome {
    pub fn new(
        suite: &'static str,
        check: impl Into<String>,
        anchor: &'static str,
        backend: &str,
        passed: bool,
        deviation: f64,
    ) -> CheckOutcome {
        CheckOutcome {
            suite,
            check: check.into(),
            anchor,
            backend: backend.to_string(),
            passed,
            deviation,
        }
    }

    fn exact(
        suite: &'static str,
        check: impl Into<String>,
        anchor: &'static str,
        backend: &str,
        passed: bool,
    ) -> CheckOutcome {
        CheckOutcome::new(suite, check, anchor, backend, passed, if passed { 0.0 } else { 1.0 })
    }

    fn measured(
        suite: &'static str,
        check: impl Into<String>,
        anchor: &'static str,
        backend: &str,
        deviation: f64,
        tol: f64,
    ) -> CheckOutcome {
        CheckOutcome::new(suite, check, anchor, backend, deviation <= tol, deviation)
    }

    pub fn to_row(&self) -> CheckRow {
        CheckRow {
            schema: SCHEMA,
            suite: self.suite.to_string(),
            check: self.check.clone(),
            anchor: self.anchor.to_string(),
            backend: self.backend.clone(),
            status: if self.passed { "pass" } else { "fail" }.to_string(),
            deviation: self.deviation,
        }
    }
}

/// True when every outcome in the battery passed.
pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|o| o.passed)
}

fn min_gram_eigenvalue(g: &Mat) -> f64 {
    if g.rows() == 0 {
        return f64::INFINITY;
    }
    hermitian_eigenvalues(g).first().copied().unwrap_or(f64::INFINITY)
}

/// Exact identities of the Clifford kernel and the frame curvature table at
/// n = 2 and n = 4: generator relations, hermiticity, chirality grading,
/// charge conjugation, the scalar curvature value n(n−1), and the curvature
/// symmetries.
pub fn kernel_checks() -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for n in [2usize, 4] {
        let rep = GammaRep::new(n).expect("even frame dimension");
        let id = Mat::identity(rep.dim());
        let zero = Mat::zeros(rep.dim(), rep.dim());

        let two_id = id.scale(&Scalar::from_int(2));
        let mut anti = true;
        let mut herm = true;
        for i in 0..n {
            herm &= rep.gamma(i).dagger() == *rep.gamma(i);
            for j in 0..n {
                let sum = rep.gamma(i).mul(rep.gamma(j)).add(&rep.gamma(j).mul(rep.gamma(i)));
                anti &= sum == if i == j { two_id.clone() } else { zero.clone() };
            }
        }
        out.push(CheckOutcome::exact(
            "kernel",
            format!("clifford-anticommutation n={n}"),
            "clifford-relations",
            GENERIC,
            anti,
        ));
        out.push(CheckOutcome::exact(
            "kernel",
            format!("gamma-hermitian n={n}"),
            "gamma-hermitian",
            GENERIC,
            herm,
        ));

        let chi = rep.chirality();
        let chi_ok = chi.mul(&chi) == id
            && (0..n).all(|i| chi.mul(rep.gamma(i)).add(&rep.gamma(i).mul(&chi)) == zero);
        out.push(CheckOutcome::exact(
            "kernel",
            format!("chirality-grading n={n}"),
            "chirality-grading",
            GENERIC,
            chi_ok,
        ));

        let c = rep.charge_conjugation();
        let inter = (0..n).all(|i| c.mul(&rep.gamma(i).conj()).add(&rep.gamma(i).mul(&c)) == zero);
        out.push(CheckOutcome::exact(
            "kernel",
            format!("charge-conjugation-intertwines n={n}"),
            "charge-conjugation",
            GENERIC,
            inter,
        ));

        let r = rep.r();
        let sign = if (r * (r + 1) / 2) % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        out.push(CheckOutcome::exact(
            "kernel",
            format!("charge-conjugation-square n={n}"),
            "charge-conjugation-square",
            GENERIC,
            c.mul(&c.conj()) == id.scale(&sign),
        ));

        let spin_ok = so_basis(n).into_iter().all(|(k, l)| {
            let s = rep.spin_action(k, l);
            c.mul(&s.conj()) == s.mul(&c)
        });
        out.push(CheckOutcome::exact(
            "kernel",
            format!("charge-conjugation-spin-equivariance n={n}"),
            "charge-conjugation-spin",
            GENERIC,
            spin_ok,
        ));
    }

    for n in [2usize, 4] {
        let table = CurvatureTable::new(n).expect("frame curvature table");
        let expected = Scalar::from_int((n * (n - 1)) as i64);
        out.push(CheckOutcome::exact(
            "kernel",
            format!("scalar-curvature-value n={n}"),
            "scalar-curvature",
            GENERIC,
            table.scalar_curvature() == expected,
        ));
        out.push(CheckOutcome::exact(
            "kernel",
            format!("curvature-symmetries n={n}"),
            "curvature-symmetries",
            GENERIC,
            table.symmetry_violations().is_empty(),
        ));
        out.push(CheckOutcome::exact(
            "kernel",
            format!("curvature-reality n={n}"),
            "curvature-reality",
            GENERIC,
            table.reality_violations().is_empty(),
        ));
    }
    out
}

/// Symbolic Cuntz-relation checks at d = 2: normal forms of ψ*ψ products,
/// the resolution of the unit, the freeness identity for every generator
/// pair, level invariance of the canonical state, and sampled coaction
/// homomorphism properties.
pub fn cuntz_algebra_checks(seed: u64) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let d = 2usize;
    let unit = CuntzElement::<Scalar>::unit(d);

    let mut rel = true;
    for i in 0..d as u8 {
        for j in 0..d as u8 {
            let nf = normal_form(d, &[Letter::Star(i), Letter::Gen(j)]);
            let expected = if i == j { unit.clone() } else { CuntzElement::zero(d) };
            rel &= equal(&nf, &expected);
        }
    }
    rel &= equal(
        &normal_form(d, &[Letter::Gen(0), Letter::Star(0), Letter::Gen(0)]),
        &CuntzElement::generator(d, 0),
    );
    out.push(CheckOutcome::exact(
        "algebra",
        "annihilation-relation-normal-forms",
        "cuntz-relations",
        GENERIC,
        rel,
    ));

    let resolution = normal_form(d, &[Letter::Gen(0), Letter::Star(0)])
        .add(&normal_form(d, &[Letter::Gen(1), Letter::Star(1)]));
    let res_ok = equal(&unit, &resolution)
        && !equal(&normal_form(d, &[Letter::Gen(0), Letter::Star(0)]), &unit);
    out.push(CheckOutcome::exact(
        "algebra",
        "unit-resolution-after-level-raise",
        "cuntz-unit-resolution",
        GENERIC,
        res_ok,
    ));

    for i in 0..d as u8 {
        for j in 0..d as u8 {
            let witness = freeness_witness(d, i, j);
            let expected = CuntzElement::from_word(
                d,
                Word::unit(),
                PolyCoeff::var(d, j as usize, i as usize),
            );
            out.push(CheckOutcome::exact(
                "algebra",
                format!("freeness-entry i={i} j={j}"),
                "cuntz-freeness",
                GENERIC,
                witness == expected,
            ));
        }
    }

    let letters = [Letter::Gen(0), Letter::Gen(1), Letter::Star(0), Letter::Star(1)];
    let mut corpus = vec![unit.clone()];
    for len in 1..=3usize {
        for mut code in 0..4usize.pow(len as u32) {
            let mut seq = Vec::with_capacity(len);
            for _ in 0..len {
                seq.push(letters[code % 4]);
                code /= 4;
            }
            corpus.push(normal_form(d, &seq));
        }
    }
    let nu_ok = corpus.iter().all(|elem| {
        let value = elem.nu();
        (1..=2).all(|extra| elem.raise_to_level(elem.max_level() + extra).nu() == value)
    });
    out.push(CheckOutcome::exact(
        "algebra",
        "state-invariant-under-level-raise",
        "cuntz-state-level-invariance",
        GENERIC,
        nu_ok,
    ));

    let half = Scalar::from_ratio(1, 2);
    let samples = [
        CuntzElement::generator(d, 0),
        CuntzElement::generator_star(d, 1),
        CuntzElement::generator(d, 0).mul(&CuntzElement::generator_star(d, 1)),
        CuntzElement::generator(d, 1).add(&unit.scale(&half)),
    ];
    let mut hom = true;
    for x in &samples {
        for y in &samples {
            hom &= equal_sampled(
                &coaction(&x.mul(y)),
                &coaction(x).mul(&coaction(y)),
                seed,
                16,
                1e-9,
            );
        }
        hom &= equal_sampled(&coaction(&x.star()), &coaction(x).star(), seed, 16, 1e-9);
    }
    out.push(CheckOutcome::exact(
        "algebra",
        "coaction-star-homomorphism sampled",
        "cuntz-coaction-homomorphism",
        GENERIC,
        hom,
    ));
    out
}

/// Exact identities of the restricted base calculus: the complex property,
/// Laplacian commutations, Hodge signs, the codifferential sign formula,
/// adjointness at matrix and element level, curvature of the connection,
/// the frame Laplacian formula, the integral lemmas, Gram positivity, Hodge
/// isometry, and the frame structure identities.
pub fn base_checks<M: TotalSpaceModel>(model: &M, backend: &str) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let calc = Calculus::new(model);
    let bc = calc.base_complex().expect("base complex assembles");
    let n = model.n();
    let dims = bc.dims();

    let dd = (0..n).all(|k| bc.d[k + 1].mul(&bc.d[k]).max_abs() == 0.0);
    out.push(CheckOutcome::exact("base", "differential-squares-to-zero", "d-squared", backend, dd));

    let lap_d = (0..n).all(|k| bc.lap[k + 1].mul(&bc.d[k]) == bc.d[k].mul(&bc.lap[k]));
    out.push(CheckOutcome::exact(
        "base",
        "laplacian-commutes-with-differential",
        "laplace-commutes-d",
        backend,
        lap_d,
    ));

    let lap_dd = (1..=n).all(|k| bc.lap[k - 1].mul(&bc.d_dag[k]) == bc.d_dag[k].mul(&bc.lap[k]));
    out.push(CheckOutcome::exact(
        "base",
        "laplacian-commutes-with-codifferential",
        "laplace-commutes-codifferential",
        backend,
        lap_dd,
    ));

    let lap_star = (0..=n).all(|k| bc.star[k].mul(&bc.lap[k]) == bc.lap[n - k].mul(&bc.star[k]));
    out.push(CheckOutcome::exact(
        "base",
        "laplacian-commutes-with-hodge",
        "laplace-commutes-hodge",
        backend,
        lap_star,
    ));

    let star_sq = (0..=n).all(|k| {
        let sign = if (k * (n - k)) % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        bc.star[n - k].mul(&bc.star[k]) == Mat::identity(dims[k]).scale(&sign)
    });
    out.push(CheckOutcome::exact(
        "base",
        "hodge-square-grading-sign",
        "hodge-square-sign",
        backend,
        star_sq,
    ));

    let sign_formula = (1..=n).all(|k| {
        let sign = if (n * (k + 1)) % 2 == 0 { -Scalar::one() } else { Scalar::one() };
        bc.star[n - k + 1].mul(&bc.d[n - k]).mul(&bc.star[k]).scale(&sign) == bc.d_dag[k]
    });
    out.push(CheckOutcome::exact(
        "base",
        "codifferential-sign-formula",
        "codifferential-sign",
        backend,
        sign_formula,
    ));

    let adj = (0..n).all(|k| bc.d[k].dagger().mul(&bc.gram[k + 1]) == bc.gram[k].mul(&bc.d_dag[k + 1]));
    out.push(CheckOutcome::exact(
        "base",
        "codifferential-adjoint-in-gram-metric",
        "codifferential-adjoint",
        backend,
        adj,
    ));

    let mut elem_adj = true;
    for k in 0..n {
        for phi in &bc.bases[k] {
            let dphi = calc.covariant_derivative(phi);
            for psi in &bc.bases[k + 1] {
                let lhs = calc.inner_hor(&dphi, psi);
                let rhs = calc.inner_hor(phi, &calc.divergence(psi).expect("homogeneous basis"));
                elem_adj &= lhs == rhs;
            }
        }
    }
    out.push(CheckOutcome::exact(
        "base",
        "adjointness-on-basis-pairs",
        "codifferential-adjoint",
        backend,
        elem_adj,
    ));

    out.push(CheckOutcome::exact(
        "base",
        "connection-curvature-acts-as-two-form",
        "connection-curvature",
        backend,
        calc.curvature_identity_holds(),
    ));

    let mut lap_frame = true;
    for f in calc.base_algebra() {
        let form = HorForm::from_component(n, model.dim(), 0, f.clone());
        let lhs = bc.laplacian_m(&form).expect("base function in degree-0 span");
        let mut acc = vec![Scalar::zero(); model.dim()];
        for i in 0..n {
            let second = model.xi(i).apply(&model.xi(i).apply(&f));
            for (a, b) in acc.iter_mut().zip(&second) {
                *a += b;
            }
        }
        let expected = HorForm::from_component(n, model.dim(), 0, acc).neg();
        lap_frame &= lhs.add(&expected.neg()).is_zero();
    }
    out.push(CheckOutcome::exact(
        "base",
        "laplacian-is-negative-frame-square-sum",
        "laplace-frame-sum",
        backend,
        lap_frame,
    ));

    out.push(CheckOutcome::exact(
        "base",
        "total-differential-squares-to-zero",
        "total-d-squared",
        backend,
        calc.d_wedge_squares_to_zero(),
    ));
    out.push(CheckOutcome::exact(
        "base",
        "integral-annihilates-exact-forms",
        "integral-closed",
        backend,
        calc.integral_annihilates_d_wedge(),
    ));
    out.push(CheckOutcome::exact(
        "base",
        "integral-invariant-infinitesimally",
        "integral-covariance",
        backend,
        calc.integral_is_invariant_infinitesimally(),
    ));
    out.push(CheckOutcome::exact(
        "base",
        "vertical-integral-annihilates-nabla",
        "integral-annihilates-nabla",
        backend,
        calc.integral_up_annihilates_nabla(),
    ));

    for k in 0..=n {
        let g = &bc.gram[k];
        let min = min_gram_eigenvalue(g);
        let passed = g.is_positive_definite() && min > POSITIVITY_FLOOR;
        out.push(CheckOutcome::new(
            "base",
            format!("gram-positive-definite degree={k}"),
            "gram-positive",
            backend,
            passed,
            (-min).max(0.0),
        ));
    }

    let iso = (0..=n).all(|k| bc.star[k].dagger().mul(&bc.gram[n - k]).mul(&bc.star[k]) == bc.gram[k]);
    out.push(CheckOutcome::exact("base", "hodge-is-isometric", "hodge-isometry", backend, iso));

    out.push(CheckOutcome::exact(
        "base",
        "frame-commutators-vanish-on-base",
        "frame-integrability",
        backend,
        calc.frame_commutators_vanish_on_base(),
    ));
    out.push(CheckOutcome::exact(
        "base",
        "frame-covariant-infinitesimally",
        "frame-covariance",
        backend,
        calc.frame_is_covariant(),
    ));
    out
}

/// Identities of the spinor bundle on one backend: invariance of the field
/// space, the Lichnerowicz identity, the curvature action, symmetry and
/// positivity of the operators, chirality grading, charge conjugation, and
/// (optionally) the graded form calculus with its adjointness, isometry,
/// and consistency checks.
pub fn spinor_checks<M: TotalSpaceModel>(
    model: &M,
    backend: &str,
    include_forms: bool,
) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let sb = SpinorBundle::new(model).expect("even frame dimension");
    let n = sb.n();

    let inv = sb.basis().iter().all(|v| {
        sb.invariance_generators().iter().all(|g| g.apply(v).iter().all(Scalar::is_zero))
    });
    out.push(CheckOutcome::exact(
        "spinor",
        "field-space-exactly-invariant",
        "field-invariance",
        backend,
        inv,
    ));

    let lich = sb.lichnerowicz_deviation().expect("fields stay in span");
    out.push(CheckOutcome::measured(
        "spinor",
        "lichnerowicz-identity",
        "lichnerowicz",
        backend,
        lich,
        0.0,
    ));

    let curv = sb.curvature_deviation_from_scalar().expect("fields stay in span");
    out.push(CheckOutcome::measured(
        "spinor",
        "curvature-action-is-quarter-scalar",
        "curvature-action",
        backend,
        curv,
        0.0,
    ));

    let g = sb.gram();
    let rd = sb.restrict(sb.dirac_matrix()).expect("dirac preserves fields");
    let rl = sb.restrict(sb.laplace_matrix()).expect("laplacian preserves fields");
    out.push(CheckOutcome::exact(
        "spinor",
        "dirac-symmetric-in-gram-metric",
        "dirac-symmetric",
        backend,
        rd.dagger().mul(&g) == g.mul(&rd),
    ));
    out.push(CheckOutcome::exact(
        "spinor",
        "laplacian-symmetric-in-gram-metric",
        "laplace-symmetric",
        backend,
        rl.dagger().mul(&g) == g.mul(&rl),
    ));

    let min = min_gram_eigenvalue(&g);
    out.push(CheckOutcome::new(
        "spinor",
        "field-gram-positive-definite",
        "gram-positive",
        backend,
        g.is_positive_definite() && min > POSITIVITY_FLOOR,
        (-min).max(0.0),
    ));

    let lap_min = sb
        .laplace_spectrum()
        .expect("laplacian preserves fields")
        .first()
        .map(|c| c.0)
        .unwrap_or(0.0);
    out.push(CheckOutcome::measured(
        "spinor",
        "laplacian-spectrum-nonnegative",
        "laplace-positive",
        backend,
        (-lap_min).max(0.0),
        POSITIVITY_FLOOR,
    ));

    out.push(CheckOutcome::exact(
        "spinor",
        "dirac-odd-for-chirality",
        "chirality-grading",
        backend,
        sb.anticommutes_with_chirality(sb.dirac_matrix()),
    ));
    out.push(CheckOutcome::exact(
        "spinor",
        "laplacian-even-for-chirality",
        "chirality-grading",
        backend,
        sb.commutes_with_chirality(sb.laplace_matrix()),
    ));
    out.push(CheckOutcome::exact(
        "spinor",
        "curvature-action-even-for-chirality",
        "chirality-grading",
        backend,
        sb.commutes_with_chirality(sb.curvature_matrix()),
    ));

    out.push(CheckOutcome::exact(
        "spinor",
        "charge-conjugation-square-sign",
        "charge-conjugation-square",
        backend,
        sb.charge_conj_square_sign_holds(),
    ));
    for (label, op) in [
        ("dirac", sb.dirac_matrix()),
        ("laplacian", sb.laplace_matrix()),
        ("curvature-action", sb.curvature_matrix()),
    ] {
        out.push(CheckOutcome::exact(
            "spinor",
            format!("charge-conjugation-commutes-with {label}"),
            "charge-conjugation-commutes",
            backend,
            sb.charge_conj_commutes_with(op),
        ));
    }

    let spec = sb.dirac_spectrum().expect("dirac preserves fields");
    let mut sym_dev = 0.0f64;
    let mut sym_ok = true;
    for (i, (value, mult)) in spec.iter().enumerate() {
        let (mirror, mirror_mult) = spec[spec.len() - 1 - i];
        sym_dev = sym_dev.max((value + mirror).abs());
        sym_ok &= *mult == mirror_mult;
    }
    out.push(CheckOutcome::new(
        "spinor",
        "dirac-spectrum-symmetric",
        "dirac-spectrum-symmetry",
        backend,
        sym_ok && sym_dev <= SPECTRUM_TOL,
        sym_dev,
    ));

    if include_forms {
        let bases: Vec<Vec<HorForm>> = (0..=n).map(|k| sb.form_basis(k)).collect();

        let mut adj = true;
        for k in 0..n {
            for f in &bases[k] {
                let df = sb.nabla_form(f);
                for h in &bases[k + 1] {
                    adj &= sb.inner_form(&df, h)
                        == sb.inner_form(f, &sb.divergence_form(h).expect("homogeneous basis"));
                }
            }
        }
        out.push(CheckOutcome::exact(
            "spinor",
            "form-adjointness-on-basis-pairs",
            "codifferential-adjoint",
            backend,
            adj,
        ));

        let mut iso = true;
        let mut square = true;
        for k in 0..=n {
            let sign = if (k * (n - k)) % 2 == 0 { Scalar::one() } else { -Scalar::one() };
            for (a, f) in bases[k].iter().enumerate() {
                let hf = sb.hodge_form(f);
                square &= sb.hodge_form(&hf).add(&f.scale(&sign).neg()).is_zero();
                for h in bases[k].iter().skip(a) {
                    iso &= sb.inner_form(&hf, &sb.hodge_form(h)) == sb.inner_form(f, h);
                }
            }
        }
        out.push(CheckOutcome::exact(
            "spinor",
            "form-hodge-is-isometric",
            "hodge-isometry",
            backend,
            iso,
        ));
        out.push(CheckOutcome::exact(
            "spinor",
            "form-hodge-square-grading-sign",
            "hodge-square-sign",
            backend,
            square,
        ));

        let mut conj_forms = true;
        for f in &bases[0] {
            conj_forms &= sb
                .charge_conj_form(&sb.nabla_form(f))
                .add(&sb.nabla_form(&sb.charge_conj_form(f)).neg())
                .is_zero();
        }
        for f in &bases[1] {
            conj_forms &= sb
                .charge_conj_form(&sb.hodge_form(f))
                .add(&sb.hodge_form(&sb.charge_conj_form(f)).neg())
                .is_zero();
            let lhs = sb
                .charge_conj_form(&sb.divergence_form(f).expect("homogeneous basis"));
            let rhs = sb
                .divergence_form(&sb.charge_conj_form(f))
                .expect("homogeneous basis");
            conj_forms &= lhs.add(&rhs.neg()).is_zero();
        }
        out.push(CheckOutcome::exact(
            "spinor",
            "charge-conjugation-commutes-with-form-operators",
            "charge-conjugation-commutes",
            backend,
            conj_forms,
        ));

        let mut consistent = true;
        for f in &bases[0] {
            let lf = sb.laplace_form(f).expect("degree-0 basis");
            let direct = sb.laplace_matrix().apply(&f.component(0));
            let expected = HorForm::from_component(n, sb.total_dim(), 0, direct);
            consistent &= lf.add(&expected.neg()).is_zero();
        }
        out.push(CheckOutcome::exact(
            "spinor",
            "form-laplacian-matches-field-laplacian",
            "laplace-consistency",
            backend,
            consistent,
        ));
    }
    out
}

/// Closed-form Dirac spectrum on the truncated sphere: eigenvalues ±(k+1)
/// with multiplicity 2(k+1) for 0 ≤ k ≤ K, where K = (cutoff−1)/2.
pub fn expected_dirac_spectrum(cutoff: u32) -> Vec<(f64, usize)> {
    if cutoff == 0 {
        return Vec::new();
    }
    let kmax = (cutoff - 1) / 2;
    let mut out = Vec::new();
    for k in (0..=kmax).rev() {
        out.push((-((k + 1) as f64), 2 * (k + 1) as usize));
    }
    for k in 0..=kmax {
        out.push(((k + 1) as f64, 2 * (k + 1) as usize));
    }
    out
}

/// Compares the computed Dirac spectrum at the given cutoff against the
/// closed form, clusterwise, within the spectral tolerance.
pub fn classical_dirac_check(cutoff: u32) -> CheckOutcome {
    let model = PeterWeylModel::new(cutoff);
    let sb = SpinorBundle::new(&model).expect("even frame dimension");
    let spec = sb.dirac_spectrum().expect("dirac preserves fields");
    let expected = expected_dirac_spectrum(cutoff);
    let mut deviation = 0.0f64;
    let mut passed = spec.len() == expected.len();
    if passed {
        for ((value, mult), (target, target_mult)) in spec.iter().zip(&expected) {
            deviation = deviation.max((value - target).abs());
            passed &= mult == target_mult;
        }
        passed &= deviation <= SPECTRUM_TOL;
    } else {
        deviation = 1.0;
    }
    CheckOutcome::new(
        "spinor",
        format!("dirac-classical-spectrum cutoff={cutoff}"),
        "dirac-classical-spectrum",
        "peter-weyl",
        passed,
        deviation,
    )
}

/// Solves for a frame nondegeneracy witness at the given cutoff and
/// re-verifies it in the model that holds all its products.
pub fn frame_witness_check(cutoff: u32) -> CheckOutcome {
    let ok = match frame_nondegeneracy_witness(cutoff) {
        Some(w) => verify_frame_witness(&PeterWeylModel::new(2 * cutoff), &w),
        None => false,
    };
    CheckOutcome::exact(
        "base",
        format!("frame-nondegeneracy-witness cutoff={cutoff}"),
        "frame-nondegeneracy",
        "peter-weyl",
        ok,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuntz::CuntzModel;

    #[test]
    fn expected_spectrum_matches_closed_form() {
        assert!(expected_dirac_spectrum(0).is_empty());
        assert_eq!(expected_dirac_spectrum(1), vec![(-1.0, 2), (1.0, 2)]);
        assert_eq!(
            expected_dirac_spectrum(3),
            vec![(-2.0, 4), (-1.0, 2), (1.0, 2), (2.0, 4)]
        );
        assert_eq!(expected_dirac_spectrum(2), expected_dirac_spectrum(1));
    }

    #[test]
    fn kernel_suite_passes_and_covers_both_dimensions() {
        let outcomes = kernel_checks();
        assert!(all_passed(&outcomes));
        assert!(outcomes.iter().any(|o| o.check.ends_with("n=2")));
        assert!(outcomes.iter().any(|o| o.check.ends_with("n=4")));
        assert!(outcomes.iter().any(|o| o.anchor == "scalar-curvature"));
    }

    #[test]
    fn algebra_suite_passes_symbolically() {
        let outcomes = cuntz_algebra_checks(7);
        assert!(all_passed(&outcomes));
        assert_eq!(outcomes.len(), 8);
        assert_eq!(outcomes.iter().filter(|o| o.anchor == "cuntz-freeness").count(), 4);
    }

    #[test]
    fn base_and_spinor_suites_pass_on_small_models() {
        let pw = PeterWeylModel::new(2);
        assert!(all_passed(&base_checks(&pw, "peter-weyl")));
        let pw1 = PeterWeylModel::new(1);
        assert!(all_passed(&spinor_checks(&pw1, "peter-weyl", true)));
        let cuntz = CuntzModel::new(1);
        assert!(all_passed(&spinor_checks(&cuntz, "cuntz", true)));
    }

    #[test]
    fn classical_spectrum_and_witness_checks_pass_at_pinned_cutoffs() {
        assert!(classical_dirac_check(1).passed);
        let witness = frame_witness_check(2);
        assert!(witness.passed);
        assert_eq!(witness.deviation, 0.0);
    }

    #[test]
    fn outcome_rows_carry_schema_and_status() {
        let outcome = CheckOutcome::exact("kernel", "demo", "anchor", "generic", true);
        let row = outcome.to_row();
        assert_eq!(row.schema, "ncspin/1");
        assert_eq!(row.status, "pass");
        let failed = CheckOutcome::exact("kernel", "demo", "anchor", "generic", false);
        assert_eq!(failed.to_row().status, "fail");
        assert_eq!(failed.deviation, 1.0);
    }
}
