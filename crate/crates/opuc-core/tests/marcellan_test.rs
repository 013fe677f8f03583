use num_complex::Complex64;
use opuc_core::marcellan::{
    a_from_quasi, alpha_from_corollary, disk_grid_32, marcellan_a_seq, quasi_family,
    reconstruct_phi, verify_m2, with_tilde, QuasiFamily,
};
use opuc_core::measure::{companion_tilde, ASeqHint, MeasureSpec};
use opuc_core::szego::{family_from_measure, OpucFamily};
use opuc_core::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn christoffel(gamma: Complex64, n: usize) -> OpucFamily {
    family_from_measure(&MeasureSpec::ChristoffelLebesgue { gamma }, n, None).unwrap()
}

fn rational_spec() -> MeasureSpec {
    MeasureSpec::RationalMarcellan {
        k: 1.0,
        beta: r(0.8),
        chi1: r(0.3),
        chi2: c(0.0, -0.4),
    }
}

/// Christoffel base at gamma with its ratio-rule a-sequence and companion.
fn christoffel_pair(gamma: Complex64, n: usize) -> QuasiFamily {
    let base = christoffel(gamma, n);
    let a = marcellan_a_seq(&base).unwrap();
    let qf = quasi_family(&base, &a).unwrap();
    let tilde = companion_tilde(base.spec.as_ref().unwrap(), &ASeqHint::Marcellan).unwrap();
    with_tilde(qf, tilde).unwrap()
}

fn rational_pair(n: usize) -> QuasiFamily {
    let base = family_from_measure(&rational_spec(), n, None).unwrap();
    let a = marcellan_a_seq(&base).unwrap();
    let qf = quasi_family(&base, &a).unwrap();
    let tilde = companion_tilde(&rational_spec(), &ASeqHint::Marcellan).unwrap();
    with_tilde(qf, tilde).unwrap()
}

#[test]
fn quasi_polynomials_subtract_scaled_predecessor() {
    // Free base: Phi_n = z^n, so Phi~_n = z^n - a z^{n-1}.
    let base =
        family_from_measure(&MeasureSpec::Lebesgue { normalized: true }, 5, None).unwrap();
    let a = vec![c(0.4, -0.1); 5];
    let qf = quasi_family(&base, &a).unwrap();
    assert_eq!(qf.a[0], r(0.0));
    for n in 1..=5usize {
        assert!((qf.qphi[n].coeff(n) - r(1.0)).norm() < 1e-12);
        assert!((qf.qphi[n].coeff(n - 1) + c(0.4, -0.1)).norm() < 1e-12);
        // Reversal convention: Phi~*_n(0) = conj(lead) = 1.
        assert!((qf.qphi_star[n].eval(r(0.0)) - r(1.0)).norm() < 1e-12);
    }
}

#[test]
fn quasi_family_checks_sequence_length() {
    let base =
        family_from_measure(&MeasureSpec::Lebesgue { normalized: true }, 4, None).unwrap();
    assert!(matches!(
        quasi_family(&base, &[r(0.1); 3]),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn ratio_rule_for_real_christoffel() {
    let base = christoffel(r(1.0), 6);
    let a = marcellan_a_seq(&base).unwrap();
    for (idx, got) in a.iter().enumerate() {
        let n = idx + 1;
        let want = r(n as f64 / (n as f64 + 1.0));
        assert!((got - want).norm() < 1e-12, "a_{n}: got {got}, want {want}");
    }
}

#[test]
fn ratio_rule_for_imaginary_christoffel() {
    let base = christoffel(c(0.0, 1.0), 6);
    let a = marcellan_a_seq(&base).unwrap();
    for (idx, got) in a.iter().enumerate() {
        let n = idx + 1;
        let want = c(0.0, n as f64 / (n as f64 + 1.0));
        assert!((got - want).norm() < 1e-12, "a_{n}: got {got}, want {want}");
    }
}

#[test]
fn sequence_rule_requires_nonzero_coefficients() {
    let base =
        family_from_measure(&MeasureSpec::Lebesgue { normalized: true }, 4, None).unwrap();
    assert!(matches!(marcellan_a_seq(&base), Err(Error::ZeroAlpha(0))));
}

// Values frozen from an independent high-precision quadrature oracle for the
// rational weight preset (K = 1, beta = 0.8, chi = {0.3, -0.4i}).
const RAT_A1: [f64; 2] = [0.5187911239425271, 0.0622549348731032];
const RAT_A2: [f64; 2] = [0.6867804900140391, 0.0];
const RAT_A3: [f64; 2] = [0.7335575765126031, 0.0];
const RAT_ALPHA0: [f64; 2] = [-0.263109305760709, 0.4315731166912851];
const RAT_ALPHA1: [f64; 2] = [-0.1806983379375934, 0.1763959965581267];

#[test]
fn rational_sequence_matches_frozen_values() {
    let base = family_from_measure(&rational_spec(), 4, None).unwrap();
    assert!((base.alpha[0] - c(RAT_ALPHA0[0], RAT_ALPHA0[1])).norm() < 1e-9);
    assert!((base.alpha[1] - c(RAT_ALPHA1[0], RAT_ALPHA1[1])).norm() < 1e-9);
    let a = marcellan_a_seq(&base).unwrap();
    assert!((a[0] - c(RAT_A1[0], RAT_A1[1])).norm() < 1e-9);
    assert!((a[1] - c(RAT_A2[0], RAT_A2[1])).norm() < 1e-9);
    assert!((a[2] - c(RAT_A3[0], RAT_A3[1])).norm() < 1e-9);
}

#[test]
fn rational_quasi_matches_companion_family() {
    // The quasi polynomials for the seeded a-sequence coincide with the
    // orthogonal polynomials of the companion weight.
    let qf = rational_pair(5);
    let tilde_fam =
        family_from_measure(qf.tilde_spec.as_ref().unwrap(), 5, None).unwrap();
    for n in 0..=5usize {
        for k in 0..=n {
            assert!(
                (qf.qphi[n].coeff(k) - tilde_fam.phi[n].coeff(k)).norm() < 1e-9,
                "n = {n}, k = {k}"
            );
        }
    }
}

#[test]
fn companion_coefficients_from_recurrence_algebra() {
    // alpha~_0 = alpha_0 + conj(a_1), alpha~_1 = alpha_1 - conj(a_2) alpha_0,
    // and alpha~_n = 0 for n >= 2.
    let qf = rational_pair(5);
    let base = &qf.base;
    let tilde = qf.tilde_alphas.as_ref().unwrap();
    let at0 = base.alpha[0] + qf.a[1].conj();
    let at1 = base.alpha[1] - qf.a[2].conj() * base.alpha[0];
    assert!((tilde[0] - at0).norm() < 1e-9);
    assert!((tilde[1] - at1).norm() < 1e-9);
    for (n, t) in tilde.iter().enumerate().skip(2) {
        assert!(t.norm() < 1e-9, "tilde alpha_{n} = {t}");
    }
}

#[test]
fn inversion_recovers_the_base_pair() {
    let qf = christoffel_pair(r(1.0), 6);
    let base = &qf.base;
    for n in 0..5usize {
        let (phi, phi_star) =
            reconstruct_phi(&qf.qphi[n + 1], &qf.qphi_star[n + 1], qf.a[n + 1], base.alpha[n])
                .unwrap();
        for k in 0..=n {
            assert!((phi.coeff(k) - base.phi[n].coeff(k)).norm() < 1e-10, "n={n} k={k}");
            assert!((phi_star.coeff(k) - base.phi_star[n].coeff(k)).norm() < 1e-10);
        }
    }
}

#[test]
fn inversion_works_when_alpha_vanishes() {
    // Free base with a constant sequence: determinant still invertible.
    let base =
        family_from_measure(&MeasureSpec::Lebesgue { normalized: true }, 4, None).unwrap();
    let qf = quasi_family(&base, &[r(0.4); 4]).unwrap();
    for n in 0..3usize {
        let (phi, _) =
            reconstruct_phi(&qf.qphi[n + 1], &qf.qphi_star[n + 1], qf.a[n + 1], base.alpha[n])
                .unwrap();
        for k in 0..n {
            assert!(phi.coeff(k).norm() < 1e-10);
        }
        assert!((phi.coeff(n) - r(1.0)).norm() < 1e-10);
    }
}

#[test]
fn coefficient_recovery_from_constant_term() {
    // a_{n+1} = (Phi~_{n+1}(0) + conj(alpha_n)) / conj(alpha_{n-1}).
    let qf = christoffel_pair(r(1.0), 5);
    let base = &qf.base;
    let n = 3;
    let got = a_from_quasi(
        qf.qphi[n + 1].eval(r(0.0)),
        base.alpha[n],
        base.alpha[n - 1],
    )
    .unwrap();
    assert!((got - r(0.8)).norm() < 1e-10, "got {got}, want 4/5");
}

#[test]
fn coefficient_recovery_needs_nonzero_previous_alpha() {
    assert!(matches!(
        a_from_quasi(r(0.1), r(0.2), r(0.0)),
        Err(Error::ZeroAlpha(0))
    ));
}

#[test]
fn verblunsky_recovery_from_reversed_quasi() {
    // Real Christoffel family, n = 3: alpha_3 = -1/5.
    let qf = christoffel_pair(r(1.0), 5);
    let got = alpha_from_corollary(&qf, 3).unwrap();
    assert!((got - r(-0.2)).norm() < 1e-10, "got {got}, want -1/5");

    // Imaginary Christoffel family, n = 2: alpha_2 = -i/4.
    let qfi = christoffel_pair(c(0.0, 1.0), 5);
    let got = alpha_from_corollary(&qfi, 2).unwrap();
    assert!((got - c(0.0, -0.25)).norm() < 1e-10, "got {got}, want -i/4");
}

#[test]
fn verblunsky_recovery_round_trips_every_index() {
    for qf in [christoffel_pair(r(1.0), 6), rational_pair(6)] {
        for n in 1..5usize {
            let got = alpha_from_corollary(&qf, n).unwrap();
            assert!(
                (got - qf.base.alpha[n]).norm() < 1e-9,
                "{}: n = {n}, got {got}, want {}",
                qf.base.label,
                qf.base.alpha[n]
            );
        }
    }
}

#[test]
fn verblunsky_recovery_handles_free_base() {
    // alpha_n = 0: the reversed quasi polynomial vanishes at 1/conj(a), so
    // the quotient returns exactly zero.
    let base =
        family_from_measure(&MeasureSpec::Lebesgue { normalized: true }, 4, None).unwrap();
    let qf = quasi_family(&base, &[r(0.4); 4]).unwrap();
    let got = alpha_from_corollary(&qf, 2).unwrap();
    assert!(got.norm() < 1e-12);
}

#[test]
fn membership_verification_passes_for_known_pairs() {
    for qf in [
        christoffel_pair(r(1.0), 6),
        christoffel_pair(c(0.0, 1.0), 6),
        rational_pair(6),
    ] {
        let report = verify_m2(&qf, None, None).unwrap();
        assert!(report.pass(), "{}: {report:?}", qf.base.label);
        assert!(report.max_offdiag < 1e-8);
        assert!(report.min_phi_integral > report.integral_threshold);
        assert!(report.cd2_max_dev < 1e-9);
        assert!(report.tilde_mass > 0.0);
    }
}

#[test]
fn membership_verification_rejects_a_mismatched_companion() {
    // A constant sequence over the free base is orthogonal with respect to
    // the Bernstein-Szego weight, not the flat one: the Gram check must fail.
    let base =
        family_from_measure(&MeasureSpec::Lebesgue { normalized: true }, 4, None).unwrap();
    let qf = quasi_family(&base, &[r(0.4); 4]).unwrap();
    let wrong = with_tilde(qf, MeasureSpec::Lebesgue { normalized: true }).unwrap();
    let report = verify_m2(&wrong, None, None).unwrap();
    assert!(!report.offdiag_pass);
    assert!(!report.pass());
}

#[test]
fn membership_verification_accepts_the_matching_companion() {
    let base =
        family_from_measure(&MeasureSpec::Lebesgue { normalized: false }, 4, None).unwrap();
    let qf = quasi_family(&base, &[r(0.4); 4]).unwrap();
    let tilde = companion_tilde(
        base.spec.as_ref().unwrap(),
        &ASeqHint::Constant(r(0.4)),
    )
    .unwrap();
    let right = with_tilde(qf, tilde).unwrap();
    let report = verify_m2(&right, None, None).unwrap();
    assert!(report.offdiag_pass, "offdiag = {}", report.max_offdiag);
    assert!(report.cd2_pass, "cd2 dev = {}", report.cd2_max_dev);
}

#[test]
fn verification_requires_a_companion() {
    let base = christoffel(r(1.0), 3);
    let a = marcellan_a_seq(&base).unwrap();
    let qf = quasi_family(&base, &a).unwrap();
    assert!(matches!(verify_m2(&qf, None, None), Err(Error::Precondition(_))));
}

#[test]
fn disk_grid_has_interior_and_boundary_points() {
    let grid = disk_grid_32();
    assert_eq!(grid.len(), 32);
    let interior = grid.iter().filter(|z| z.norm() < 1.0 - 1e-9).count();
    let boundary = grid
        .iter()
        .filter(|z| (z.norm() - 1.0).abs() < 1e-12)
        .count();
    assert_eq!(interior, 16);
    assert_eq!(boundary, 16);
}

#[test]
fn with_tilde_records_companion_coefficients() {
    let qf = christoffel_pair(r(1.0), 4);
    assert!(qf.tilde_spec.is_some());
    let alphas = qf.tilde_alphas.as_ref().unwrap();
    assert_eq!(alphas.len(), 4);
    // Companion of the real Christoffel pair is the normalized flat weight.
    for a in alphas {
        assert!(a.norm() < 1e-10);
    }
}
