use num_complex::Complex64;
use opuc_core::cpoly::CPoly;
use opuc_core::measure::MeasureSpec;
use opuc_core::szego::{
    christoffel_family, family_from_alphas, family_from_measure, szego_step, verify_orthogonality,
    OpucFamily,
};
use opuc_core::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn lebesgue_norm_family(n: usize) -> OpucFamily {
    family_from_measure(&MeasureSpec::Lebesgue { normalized: true }, n, None).unwrap()
}

fn christoffel_family_of(gamma: Complex64, n: usize) -> OpucFamily {
    family_from_measure(&MeasureSpec::ChristoffelLebesgue { gamma }, n, None).unwrap()
}

fn rational_family(n: usize) -> OpucFamily {
    let spec = MeasureSpec::RationalMarcellan {
        k: 1.0,
        beta: r(0.8),
        chi1: r(0.3),
        chi2: c(0.0, -0.4),
    };
    family_from_measure(&spec, n, None).unwrap()
}

fn assert_poly_close(p: &CPoly, coeffs: &[Complex64], tol: f64) {
    let deg = coeffs.len() - 1;
    assert_eq!(p.degree(), Some(deg), "degree mismatch");
    for (k, want) in coeffs.iter().enumerate() {
        assert!(
            (p.coeff(k) - want).norm() < tol,
            "coefficient {k}: got {}, want {want}",
            p.coeff(k)
        );
    }
}

#[test]
fn step_with_zero_coefficient_shifts() {
    let (p, ps) = szego_step(&CPoly::one(), &CPoly::one(), r(0.0)).unwrap();
    assert_poly_close(&p, &[r(0.0), r(1.0)], 1e-15);
    assert_poly_close(&ps, &[r(1.0)], 1e-15);
}

#[test]
fn step_with_negative_half() {
    let (p, ps) = szego_step(&CPoly::one(), &CPoly::one(), r(-0.5)).unwrap();
    assert_poly_close(&p, &[r(0.5), r(1.0)], 1e-15);
    assert_poly_close(&ps, &[r(1.0), r(0.5)], 1e-15);
}

#[test]
fn two_steps_reach_the_known_quadratic() {
    let fam = family_from_alphas("steps", &[r(-0.5), r(-1.0 / 3.0)], 1.0).unwrap();
    assert_poly_close(&fam.phi[2], &[r(1.0 / 3.0), r(2.0 / 3.0), r(1.0)], 1e-15);
}

#[test]
fn step_rejects_coefficient_on_the_boundary() {
    let res = szego_step(&CPoly::one(), &CPoly::one(), r(1.0));
    assert!(matches!(res, Err(Error::AlphaOutOfRange { .. })));
}

#[test]
fn zero_coefficients_give_monomials() {
    let fam = family_from_alphas("free", &[r(0.0); 4], 1.0).unwrap();
    for n in 0..=4 {
        let mono = CPoly::monomial(n);
        for k in 0..=n {
            assert!((fam.phi[n].coeff(k) - mono.coeff(k)).norm() < 1e-15);
        }
        assert!((fam.norm_sq[n] - 1.0).abs() < 1e-15);
        assert!((fam.phi_star[n].eval(r(0.0)) - r(1.0)).norm() < 1e-15);
    }
}

#[test]
fn norm_recursion_single_step() {
    let fam = family_from_alphas("one-step", &[r(-0.5)], 2.0).unwrap();
    assert!((fam.norm_sq[1] - 2.0 * 0.75).abs() < 1e-15);
}

#[test]
fn family_from_alphas_rejects_bad_inputs() {
    assert!(matches!(
        family_from_alphas("bad", &[r(0.0)], 0.0),
        Err(Error::InvalidMeasure(_))
    ));
    assert!(matches!(
        family_from_alphas("bad", &[c(0.8, 0.8)], 1.0),
        Err(Error::AlphaOutOfRange { .. })
    ));
}

#[test]
fn family_from_measure_requires_positive_degree() {
    let res = family_from_measure(&MeasureSpec::Lebesgue { normalized: true }, 0, None);
    assert!(matches!(res, Err(Error::Precondition(_))));
}

#[test]
fn normalized_lebesgue_family_is_monomial() {
    let fam = lebesgue_norm_family(8);
    for n in 0..=8 {
        assert!((fam.norm_sq[n] - 1.0).abs() < 1e-12);
        for k in 0..n {
            assert!(fam.phi[n].coeff(k).norm() < 1e-12);
        }
        assert!((fam.phi[n].coeff(n) - r(1.0)).norm() < 1e-12);
    }
    for a in &fam.alpha {
        assert!(a.norm() < 1e-12);
    }
}

#[test]
fn christoffel_one_has_rational_coefficients() {
    let fam = christoffel_family_of(r(1.0), 10);
    for (n, a) in fam.alpha.iter().enumerate() {
        let want = r(-1.0 / (n as f64 + 2.0));
        assert!((a - want).norm() < 1e-10, "alpha_{n}: got {a}, want {want}");
    }
    // Phi_n(z) = sum_k (k+1) z^k / (n+1).
    for n in 1..=10usize {
        for k in 0..=n {
            let want = (k as f64 + 1.0) / (n as f64 + 1.0);
            assert!((fam.phi[n].coeff(k) - r(want)).norm() < 1e-10);
        }
    }
}

#[test]
fn christoffel_i_has_rotating_coefficients() {
    let fam = christoffel_family_of(c(0.0, 1.0), 10);
    let i = Complex64::new(0.0, 1.0);
    for (n, a) in fam.alpha.iter().enumerate() {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let want = i.powu(n as u32 + 1) * sign / (n as f64 + 2.0);
        assert!((a - want).norm() < 1e-10, "alpha_{n}: got {a}, want {want}");
    }
}

#[test]
fn bernstein_szego_family_closed_form() {
    // Phi_n = z^{n-1}(z - a) for n >= 1, alpha_0 = conj(a), alpha_n = 0 after.
    let a = r(0.5);
    let spec = MeasureSpec::BernsteinSzego { a };
    let fam = family_from_measure(&spec, 6, None).unwrap();
    assert!((fam.alpha[0] - a.conj()).norm() < 1e-10);
    for n in 1..6 {
        assert!(fam.alpha[n].norm() < 1e-10);
    }
    for n in 1..=6usize {
        assert!((fam.phi[n].coeff(n) - r(1.0)).norm() < 1e-10);
        assert!((fam.phi[n].coeff(n - 1) + a).norm() < 1e-10);
        for k in 0..n.saturating_sub(1) {
            assert!(fam.phi[n].coeff(k).norm() < 1e-10);
        }
    }
}

// Zeros of the degree-5 polynomial of the |z-1|^2/(2 pi) weight, frozen from
// an independent high-precision quadrature oracle, sorted by (re, im).
const PHI5_ONE_ZEROS: [[f64; 2]; 5] = [
    [-0.670332047603096, 0.0],
    [-0.375695199225260, -0.570175161011412],
    [-0.375695199225260, 0.570175161011412],
    [0.294194556360141, -0.668367097443301],
    [0.294194556360141, 0.668367097443301],
];

#[test]
fn christoffel_one_degree_five_zeros() {
    let fam = christoffel_family_of(r(1.0), 5);
    let roots = fam.phi[5].roots().unwrap();
    assert_eq!(roots.len(), 5);
    for (root, want) in roots.iter().zip(PHI5_ONE_ZEROS.iter()) {
        assert!((root - c(want[0], want[1])).norm() < 1e-9);
    }
}

#[test]
fn kernel_transform_matches_direct_quadrature() {
    // Building the |z-gamma|^2 dnu family through the CD kernel of nu must
    // agree with integrating the transformed weight directly.
    let nu = lebesgue_norm_family(7);
    for gamma in [r(1.0), c(0.0, 1.0)] {
        let transformed = christoffel_family(&nu, gamma, 6).unwrap();
        let direct = christoffel_family_of(gamma, 6);
        for n in 0..=6 {
            for k in 0..=n {
                assert!(
                    (transformed.phi[n].coeff(k) - direct.phi[n].coeff(k)).norm() < 1e-10,
                    "gamma = {gamma}, n = {n}, k = {k}"
                );
            }
        }
        for n in 0..=6 {
            let rel = (transformed.norm_sq[n] - direct.norm_sq[n]).abs() / direct.norm_sq[n];
            assert!(rel < 1e-10);
        }
    }
}

#[test]
fn kernel_transform_checks_base_depth() {
    let nu = lebesgue_norm_family(4);
    assert!(matches!(
        christoffel_family(&nu, r(1.0), 4),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn orthogonality_residuals_by_preset() {
    let leb = lebesgue_norm_family(8);
    assert!(verify_orthogonality(&leb, None).unwrap() < 1e-12);

    let chr = christoffel_family_of(r(1.0), 8);
    assert!(verify_orthogonality(&chr, None).unwrap() < 1e-9);

    let rat = rational_family(8);
    assert!(verify_orthogonality(&rat, None).unwrap() < 1e-8);
}

#[test]
fn orthogonality_needs_a_measure() {
    let fam = family_from_alphas("detached", &[r(0.1)], 1.0).unwrap();
    assert!(matches!(
        verify_orthogonality(&fam, None),
        Err(Error::Precondition(_))
    ));
}

fn invariant_suite(fam: &OpucFamily) {
    let n_max = fam.n_max;
    // alpha_n = -conj(Phi_{n+1}(0)).
    for n in 0..n_max {
        let from_value = -fam.phi[n + 1].eval(r(0.0)).conj();
        assert!((fam.alpha[n] - from_value).norm() < 1e-12);
    }
    // Phi*_n(0) = 1 and |Phi*_n| = |Phi_n| on the circle.
    for n in 0..=n_max {
        assert!((fam.phi_star[n].eval(r(0.0)) - r(1.0)).norm() < 1e-10);
        for k in 0..32 {
            let z = Complex64::from_polar(1.0, 0.05 + 0.196 * k as f64);
            let lhs = fam.phi_star[n].eval(z).norm();
            let rhs = fam.phi[n].eval(z).norm();
            assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
        }
    }
    // Zeros stay inside the closed unit disk.
    for n in 1..=n_max {
        for root in fam.phi[n].roots().unwrap() {
            assert!(root.norm() < 1.0 + 1e-8, "zero {root} escaped the disk");
        }
    }
    // Growth bound on the circle: |Phi_{n+1}(z)| <= (1+|alpha_n|)|Phi_n(z)|.
    for n in 0..n_max {
        let cap = 1.0 + fam.alpha[n].norm();
        for k in 0..64 {
            let z = Complex64::from_polar(1.0, 0.02 + 0.0982 * k as f64);
            let lhs = fam.phi[n + 1].eval(z).norm();
            let rhs = cap * fam.phi[n].eval(z).norm();
            assert!(lhs <= rhs + 1e-10 * rhs.max(1.0));
        }
    }
    // Norm recursion against the quadrature norms.
    for n in 0..n_max {
        let predicted = fam.norm_sq[n] * (1.0 - fam.alpha[n].norm_sqr());
        let rel = (predicted - fam.norm_sq[n + 1]).abs() / fam.norm_sq[n + 1];
        assert!(rel < 1e-9, "norm recursion off by {rel:.3e} at n = {n}");
    }
    // Rebuilding from the extracted coefficients reproduces the family.
    let rebuilt = family_from_alphas("rebuilt", &fam.alpha, fam.m0()).unwrap();
    for n in 0..=n_max {
        for k in 0..=n {
            assert!((rebuilt.phi[n].coeff(k) - fam.phi[n].coeff(k)).norm() < 1e-8);
        }
        let rel = (rebuilt.norm_sq[n] - fam.norm_sq[n]).abs() / fam.norm_sq[n];
        assert!(rel < 1e-8);
    }
}

#[test]
fn recursion_invariants_hold_for_all_presets() {
    invariant_suite(&lebesgue_norm_family(8));
    invariant_suite(&christoffel_family_of(r(1.0), 8));
    invariant_suite(&christoffel_family_of(c(0.0, 1.0), 8));
    invariant_suite(&rational_family(8));
    let bs = MeasureSpec::BernsteinSzego { a: r(0.4) };
    invariant_suite(&family_from_measure(&bs, 8, None).unwrap());
}

#[test]
fn family_json_has_the_expected_shape() {
    let fam = christoffel_family_of(r(1.0), 3);
    let v = fam.to_json();
    assert!(v.get("spec").is_some());
    assert_eq!(v["alphas"].as_array().unwrap().len(), 3);
    assert_eq!(v["norm_sq"].as_array().unwrap().len(), 4);
    assert_eq!(v["phi"].as_array().unwrap().len(), 4);
    assert_eq!(v["spec"]["variant"], "christoffel-lebesgue");
}

#[test]
fn orthonormal_evals_scale_by_norms() {
    let fam = christoffel_family_of(r(1.0), 4);
    let z = c(0.3, 0.1);
    for n in 0..=4 {
        let want = fam.phi[n].eval(z) / fam.norm_sq[n].sqrt();
        assert!((fam.orthonormal_eval(n, z) - want).norm() < 1e-14);
        let want_star = fam.phi_star[n].eval(z) / fam.norm_sq[n].sqrt();
        assert!((fam.orthonormal_star_eval(n, z) - want_star).norm() < 1e-14);
    }
}
