//! Acceptance battery: one test per headline guarantee, each printing a
//! single pass/fail line. Exact identities must hold with zero deviation;
//! floating-point spectra are held to the pinned tolerances.

use std::time::{Duration, Instant};

use ncspin::bundle::Calculus;
use ncspin::cuntz::CuntzModel;
use ncspin::group::CurvatureTable;
use ncspin::pw::PeterWeylModel;
use ncspin::scalar::Scalar;
use ncspin::spinor::SpinorBundle;
use ncspin::verify::{
    base_checks, classical_dirac_check, cuntz_algebra_checks, frame_witness_check, kernel_checks,
    spinor_checks, CheckOutcome,
};

fn report(name: &str, detail: &str, passed: bool) {
    println!("{} {name}: {detail}", if passed { "PASS" } else { "FAIL" });
    assert!(passed, "{name} failed: {detail}");
}

fn anchors_pass(outcomes: &[CheckOutcome], anchors: &[&str]) -> bool {
    anchors.iter().all(|anchor| {
        let hits: Vec<&CheckOutcome> = outcomes.iter().filter(|o| o.anchor == *anchor).collect();
        !hits.is_empty() && hits.iter().all(|o| o.passed)
    })
}

#[test]
fn criterion_1_lichnerowicz_identity_both_backends() {
    let start = Instant::now();
    let mut max_dev = 0.0f64;
    for cutoff in [1u32, 3, 5] {
        let model = PeterWeylModel::new(cutoff);
        let bundle = SpinorBundle::new(&model).unwrap();
        max_dev = max_dev.max(bundle.lichnerowicz_deviation().unwrap());
    }
    for level in [1u32, 2, 3] {
        let model = CuntzModel::new(level);
        let bundle = SpinorBundle::new(&model).unwrap();
        max_dev = max_dev.max(bundle.lichnerowicz_deviation().unwrap());
    }
    let elapsed = start.elapsed();
    let passed = max_dev == 0.0 && elapsed <= Duration::from_secs(30);
    report(
        "criterion-1",
        &format!(
            "Lichnerowicz identity exact on all pinned truncations \
             (max deviation {max_dev:e}, {elapsed:.2?})"
        ),
        passed,
    );
}

#[test]
fn criterion_2_scalar_curvature_values_and_symmetries() {
    let mut passed = true;
    for (n, expected) in [(2usize, 2i64), (4, 12)] {
        let table = CurvatureTable::new(n).unwrap();
        passed &= table.scalar_curvature() == Scalar::from_int(expected);
        passed &= table.symmetry_violations().is_empty();
        passed &= table.reality_violations().is_empty();
    }
    report(
        "criterion-2",
        "scalar curvature 2 at n=2 and 12 at n=4 with all symmetry relations exact",
        passed,
    );
}

#[test]
fn criterion_3_dirac_spectrum_classical_form() {
    let start = Instant::now();
    let outcomes: Vec<CheckOutcome> =
        [1u32, 3, 5].into_iter().map(classical_dirac_check).collect();
    let elapsed = start.elapsed();
    let max_dev = outcomes.iter().map(|o| o.deviation).fold(0.0, f64::max);
    let passed = outcomes.iter().all(|o| o.passed) && elapsed <= Duration::from_secs(10);
    report(
        "criterion-3",
        &format!(
            "Dirac spectrum matches ±(k+1) with multiplicity 2(k+1) at cutoffs 1, 3, 5 \
             (max deviation {max_dev:e}, {elapsed:.2?})"
        ),
        passed,
    );
}

#[test]
fn criterion_4_calculus_identities_exact() {
    let pw = PeterWeylModel::new(2);
    let cuntz = CuntzModel::new(2);
    let mut outcomes = base_checks(&pw, "peter-weyl");
    outcomes.extend(base_checks(&cuntz, "cuntz"));
    let passed = anchors_pass(
        &outcomes,
        &[
            "d-squared",
            "total-d-squared",
            "laplace-commutes-d",
            "laplace-commutes-codifferential",
            "laplace-commutes-hodge",
            "hodge-square-sign",
            "codifferential-sign",
            "connection-curvature",
            "laplace-frame-sum",
        ],
    );
    report(
        "criterion-4",
        "base calculus identities exact on both backends",
        passed,
    );
}

#[test]
fn criterion_5_integration_lemmas_exact() {
    let pw = PeterWeylModel::new(2);
    let cuntz = CuntzModel::new(2);
    let mut outcomes = base_checks(&pw, "peter-weyl");
    outcomes.extend(base_checks(&cuntz, "cuntz"));
    let passed = anchors_pass(
        &outcomes,
        &["integral-closed", "integral-covariance", "integral-annihilates-nabla"],
    );
    report(
        "criterion-5",
        "integrals annihilate exact forms and covariant derivatives, invariance exact",
        passed,
    );
}

#[test]
fn criterion_6_adjointness_and_positivity() {
    let pw = PeterWeylModel::new(2);
    let cuntz = CuntzModel::new(2);
    let mut outcomes = base_checks(&pw, "peter-weyl");
    outcomes.extend(base_checks(&cuntz, "cuntz"));
    let pw3 = PeterWeylModel::new(3);
    outcomes.extend(spinor_checks(&pw3, "peter-weyl", true));
    outcomes.extend(spinor_checks(&cuntz, "cuntz", true));
    let passed = anchors_pass(
        &outcomes,
        &[
            "gram-positive",
            "codifferential-adjoint",
            "hodge-isometry",
            "dirac-symmetric",
            "laplace-symmetric",
            "laplace-positive",
        ],
    );
    report(
        "criterion-6",
        "Gram matrices positive definite, codifferentials adjoint, Hodge maps isometric",
        passed,
    );
}

#[test]
fn criterion_7_spinor_kernel_identities() {
    let mut outcomes = kernel_checks();
    let pw = PeterWeylModel::new(1);
    let cuntz = CuntzModel::new(1);
    outcomes.extend(spinor_checks(&pw, "peter-weyl", true));
    outcomes.extend(spinor_checks(&cuntz, "cuntz", true));
    let passed = anchors_pass(
        &outcomes,
        &[
            "clifford-relations",
            "gamma-hermitian",
            "chirality-grading",
            "charge-conjugation",
            "charge-conjugation-square",
            "charge-conjugation-spin",
            "charge-conjugation-commutes",
        ],
    );
    report(
        "criterion-7",
        "Clifford generator, chirality, and charge conjugation identities exact at n=2 and n=4",
        passed,
    );
}

#[test]
fn criterion_8_cuntz_relations_and_freeness() {
    let start = Instant::now();
    let outcomes = cuntz_algebra_checks(11);
    let elapsed = start.elapsed();
    let passed = outcomes.iter().all(|o| o.passed) && elapsed <= Duration::from_secs(5);
    report(
        "criterion-8",
        &format!(
            "normal forms, unit resolution, freeness table, and state level invariance \
             hold symbolically ({elapsed:.2?})"
        ),
        passed,
    );
}

#[test]
fn criterion_9_frame_structure_and_nondegeneracy() {
    let pw = PeterWeylModel::new(2);
    let cuntz = CuntzModel::new(2);
    let calc_pw = Calculus::new(&pw);
    let calc_cuntz = Calculus::new(&cuntz);
    let integrable = calc_pw.frame_commutators_vanish_on_base()
        && calc_pw.frame_is_covariant()
        && calc_cuntz.frame_commutators_vanish_on_base()
        && calc_cuntz.frame_is_covariant();
    let witness = frame_witness_check(2);
    let passed = integrable && witness.passed;
    report(
        "criterion-9",
        "frame commutators vanish on the base, frame is covariant, nondegeneracy witness verified",
        passed,
    );
}
