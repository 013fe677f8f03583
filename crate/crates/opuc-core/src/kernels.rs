//! Christoffel-Darboux kernels for orthonormal polynomials, kernel-type
//! sums for monic ones, and numeric checks of the norm, kernel-gap, and
//! sub-reproducing inequalities that relate a base family to its
//! quasi-orthogonal companions.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::cpoly::CPoly;
use crate::marcellan::QuasiFamily;
use crate::szego::OpucFamily;
use crate::{Error, Result};

/// Relative pass tolerance for inequality slack: a report passes when
/// slack >= -PASS_REL_TOL * max(1, |rhs|). Negative slack beyond rounding
/// noise means the inequality genuinely failed.
pub const PASS_REL_TOL: f64 = 1e-9;

/// Node count for the explicit circle integrals in this module. Weights here
/// are smooth, so the trapezoid rule converges spectrally; 4096 nodes leave
/// the quadrature error far below the report tolerances at degrees <= 64.
const INTEGRAL_NODES: usize = 4096;

/// The Christoffel-Darboux formula divides by 1 - z*conj(w); below this the
/// formula is numerically meaningless and an error is returned instead.
const FORMULA_DENOM_TOL: f64 = 1e-12;

/// How a CD kernel value is computed: by the defining sum over orthonormal
/// polynomials, or by the closed 2-term quotient formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Sum,
    Formula,
}

/// One verified inequality: lhs <= rhs with slack = rhs - lhs.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub context: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

impl InequalityReport {
    pub fn new(context: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        InequalityReport {
            context: context.into(),
            lhs,
            rhs,
            slack,
            pass: slack >= -PASS_REL_TOL * rhs.abs().max(1.0),
        }
    }
}

/// A single kernel evaluation, the unit emitted by the CLI for kernel dumps.
#[derive(Debug, Clone, Serialize)]
pub struct KernelEval {
    pub n: usize,
    #[serde(with = "crate::complex_serde")]
    pub z: Complex64,
    #[serde(with = "crate::complex_serde")]
    pub w: Complex64,
    #[serde(with = "crate::complex_serde")]
    pub value: Complex64,
}

fn check_degree(n: usize, n_max: usize, what: &str) -> Result<()> {
    if n > n_max {
        return Err(Error::Precondition(format!(
            "{what} needs degree {n} but the family stops at {n_max}"
        )));
    }
    Ok(())
}

/// CD kernel of the orthonormal polynomials,
/// sum: Σ_{k<=n} conj(φₖ(w)) φₖ(z) with φₖ = Φₖ/‖Φₖ‖;
/// formula: (conj(φ*ₙ(w))φ*ₙ(z) − z·w̄·conj(φₙ(w))φₙ(z)) / (1 − z·w̄).
pub fn cd_kernel(
    fam: &OpucFamily,
    n: usize,
    z: Complex64,
    w: Complex64,
    method: Method,
) -> Result<Complex64> {
    check_degree(n, fam.n_max, "cd_kernel")?;
    match method {
        Method::Sum => {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..=n {
                acc += fam.phi[k].eval(z) * fam.phi[k].eval(w).conj() / fam.norm_sq[k];
            }
            Ok(acc)
        }
        Method::Formula => {
            let denom = Complex64::new(1.0, 0.0) - z * w.conj();
            if denom.norm() < FORMULA_DENOM_TOL {
                return Err(Error::Domain(format!(
                    "CD formula is singular at z*conj(w) = 1 (|1 - z*conj(w)| = {:.3e})",
                    denom.norm()
                )));
            }
            let pz = fam.phi[n].eval(z);
            let pw = fam.phi[n].eval(w);
            let sz = fam.phi_star[n].eval(z);
            let sw = fam.phi_star[n].eval(w);
            Ok((sw.conj() * sz - z * w.conj() * pw.conj() * pz) / denom / fam.norm_sq[n])
        }
    }
}

fn ktype_over(polys: &[CPoly], n: usize, z: Complex64, w: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for p in polys.iter().take(n + 1) {
        acc += p.eval(z) * p.eval(w).conj();
    }
    acc
}

/// Kernel-type sum over the monic polynomials: Σ_{j<=n} conj(Φⱼ(w)) Φⱼ(z).
pub fn kernel_type(fam: &OpucFamily, n: usize, z: Complex64, w: Complex64) -> Result<Complex64> {
    check_degree(n, fam.n_max, "kernel_type")?;
    Ok(ktype_over(&fam.phi, n, z, w))
}

/// Kernel-type sum over the quasi polynomials Φ̃ⱼ of a quasi family.
pub fn quasi_kernel_type(
    qf: &QuasiFamily,
    n: usize,
    z: Complex64,
    w: Complex64,
) -> Result<Complex64> {
    check_degree(n, qf.n_max(), "quasi_kernel_type")?;
    Ok(ktype_over(&qf.qphi, n, z, w))
}

/// Expands the quasi kernel-type sum in the base polynomials:
/// Σ conj(Φ̃ⱼ(w))Φ̃ⱼ(z) = S₁ − S₂ − S₃ + S₄ with
/// S₁ the base kernel-type sum, S₂ = Σ aⱼΦⱼ₋₁(z)conj(Φⱼ(w)),
/// S₃ = Σ āⱼΦⱼ(z)conj(Φⱼ₋₁(w)), S₄ = Σ |aⱼ|²Φⱼ₋₁(z)conj(Φⱼ₋₁(w)).
/// Returns (direct, expansion); the two agree to rounding.
pub fn quasi_kernel_expansion(
    qf: &QuasiFamily,
    n: usize,
    z: Complex64,
    w: Complex64,
) -> Result<(Complex64, Complex64)> {
    check_degree(n, qf.n_max(), "quasi_kernel_expansion")?;
    let direct = ktype_over(&qf.qphi, n, z, w);
    let phi = &qf.base.phi;
    let s1 = ktype_over(phi, n, z, w);
    let mut s2 = Complex64::new(0.0, 0.0);
    let mut s3 = Complex64::new(0.0, 0.0);
    let mut s4 = Complex64::new(0.0, 0.0);
    for j in 1..=n {
        let a = qf.a[j];
        let pj_z = phi[j].eval(z);
        let pj_w = phi[j].eval(w);
        let pm_z = phi[j - 1].eval(z);
        let pm_w = phi[j - 1].eval(w);
        s2 += a * pm_z * pj_w.conj();
        s3 += a.conj() * pj_z * pm_w.conj();
        s4 += a.norm_sqr() * pm_z * pm_w.conj();
    }
    Ok((direct, s1 - s2 - s3 + s4))
}

fn fmt_c(z: Complex64) -> String {
    format!("{:+.4}{:+.4}i", z.re, z.im)
}

/// Fixed deterministic 16-point evaluation grid mixing interior points and
/// points on the unit circle; shared by the verification suites.
pub fn eval_grid_16() -> Vec<Complex64> {
    vec![
        Complex64::new(0.3, 0.2),
        Complex64::new(-0.5, 0.1),
        Complex64::new(0.0, 0.7),
        Complex64::new(0.0, -0.8),
        Complex64::new(0.95, 0.0),
        Complex64::new(-0.95, 0.0),
        Complex64::new(0.6, 0.6),
        Complex64::new(-0.4, -0.4),
        Complex64::from_polar(1.0, 0.3),
        Complex64::from_polar(1.0, 1.1),
        Complex64::from_polar(1.0, 2.2),
        Complex64::from_polar(1.0, -2.7),
        Complex64::new(0.1, 0.0),
        Complex64::new(-0.2, 0.7),
        Complex64::new(0.5, -0.5),
        Complex64::new(0.0, 0.0),
    ]
}

/// Norm comparisons between a base family and its quasi companions at one
/// degree n >= 1, all integrals by quadrature:
/// 1. quasi-norm-upper:       ‖Φ̃ₙ‖²_μ  <= (1+|aₙ|²) m₀(μ)
/// 2. base-norm-lower-sqrt:   sqrt(m₀(μ̃)) Π_{j<=n}|aⱼ| <= ‖Φₙ‖_μ̃
/// 3. quasi-norm-tilde-upper: ‖Φ̃ₙ‖²_μ̃ <= 2 (1+|aₙ|)⁴ ‖Φₙ‖²_μ̃
///
/// The lower bound carries sqrt(m₀(μ̃)) because the recursion it comes from,
/// |aⱼ| <= ‖Φⱼ‖/‖Φⱼ₋₁‖, terminates at ‖Φ₀‖_μ̃ = sqrt(m₀(μ̃)); see
/// [`norm_lower_bound_literal`] for the unsquare-rooted comparison.
pub fn check_norm_inequalities(
    base: &OpucFamily,
    qf: &QuasiFamily,
    n: usize,
) -> Result<Vec<InequalityReport>> {
    if n == 0 {
        return Err(Error::Precondition(
            "norm inequalities are statements about n >= 1".into(),
        ));
    }
    check_degree(n, qf.n_max(), "check_norm_inequalities")?;
    let mu = base.spec.as_ref().ok_or_else(|| {
        Error::Precondition("check_norm_inequalities needs the base family's measure".into())
    })?;
    let tilde = qf.tilde_spec.as_ref().ok_or_else(|| {
        Error::Precondition("check_norm_inequalities needs a companion measure".into())
    })?;
    let tbl_mu = crate::measure::moments_auto(mu, n)?;
    let tbl_t = crate::measure::moments_auto(tilde, n)?;
    let m0 = tbl_mu.total_mass();
    let m0t = tbl_t.total_mass();
    let a_n = qf.a[n].norm();
    let a_prod: f64 = (1..=n).map(|j| qf.a[j].norm()).product();

    let quasi_mu = tbl_mu.norm_sq(&qf.qphi[n])?;
    let base_tilde = tbl_t.norm_sq(&base.phi[n])?.sqrt();
    let quasi_tilde = tbl_t.norm_sq(&qf.qphi[n])?;

    Ok(vec![
        InequalityReport::new(
            format!("quasi-norm-upper n={n}"),
            quasi_mu,
            (1.0 + a_n * a_n) * m0,
        ),
        InequalityReport::new(
            format!("base-norm-lower-sqrt n={n}"),
            m0t.sqrt() * a_prod,
            base_tilde,
        ),
        InequalityReport::new(
            format!("quasi-norm-tilde-upper n={n}"),
            quasi_tilde,
            2.0 * (1.0 + a_n).powi(4) * base_tilde * base_tilde,
        ),
    ])
}

/// The unsquare-rooted comparison m₀(μ̃)·Π_{j<=n}|aⱼ| vs ‖Φₙ‖_μ̃, reported
/// for information only: when m₀(μ̃) > 1 it can genuinely exceed the norm at
/// small n (the rational preset does so at n = 1), which is exactly why the
/// gated bound in [`check_norm_inequalities`] uses the square root.
pub fn norm_lower_bound_literal(
    base: &OpucFamily,
    qf: &QuasiFamily,
    n: usize,
) -> Result<InequalityReport> {
    if n == 0 {
        return Err(Error::Precondition(
            "norm inequalities are statements about n >= 1".into(),
        ));
    }
    check_degree(n, qf.n_max(), "norm_lower_bound_literal")?;
    let tilde = qf.tilde_spec.as_ref().ok_or_else(|| {
        Error::Precondition("norm_lower_bound_literal needs a companion measure".into())
    })?;
    let tbl_t = crate::measure::moments_auto(tilde, n)?;
    let a_prod: f64 = (1..=n).map(|j| qf.a[j].norm()).product();
    Ok(InequalityReport::new(
        format!("base-norm-lower-literal n={n}"),
        tbl_t.total_mass() * a_prod,
        tbl_t.norm_sq(&base.phi[n])?.sqrt(),
    ))
}

/// Σ_{j<=n} (1+|aⱼ|²) k̃ⱼ² with k̃ⱼ² = 1/‖Φ̃ⱼ‖²_μ̃ read off the companion
/// family's norms, a₀ := 0 and aⱼ = a[j-1] for j >= 1.
fn coefficient_sum(tilde_fam: &OpucFamily, a: &[Complex64], n: usize) -> f64 {
    (0..=n)
        .map(|j| {
            let aj = if j == 0 { 0.0 } else { a[j - 1].norm() };
            (1.0 + aj * aj) / tilde_fam.norm_sq[j]
        })
        .sum()
}

/// Gap bound between the CD kernels of a measure and its companion:
/// |𝕂ₙ(z,w,μ) − 𝕂ₙ(z,w,μ̃)|² <=
///   𝕂ₙ(w,w,μ)·[𝕂ₙ(z,z,μ) − 𝕂ₙ(z,z,μ̃)(2 − m₀(μ)Σⱼ(1+|aⱼ|²)k̃ⱼ²)].
/// `a` holds a₁.. (at least n entries); a₀ := 0. Returns the report and the
/// bracket factor 2 − m₀Σ… separately, since its sign is informative.
pub fn lubinsky_gap(
    mu_fam: &OpucFamily,
    tilde_fam: &OpucFamily,
    a: &[Complex64],
    n: usize,
    z: Complex64,
    w: Complex64,
) -> Result<(InequalityReport, f64)> {
    check_degree(n, mu_fam.n_max, "lubinsky_gap")?;
    check_degree(n, tilde_fam.n_max, "lubinsky_gap (companion)")?;
    if a.len() < n {
        return Err(Error::Precondition(format!(
            "lubinsky_gap needs a₁..a_{n}, got {} entries",
            a.len()
        )));
    }
    let k_mu = cd_kernel(mu_fam, n, z, w, Method::Sum)?;
    let k_t = cd_kernel(tilde_fam, n, z, w, Method::Sum)?;
    let lhs = (k_mu - k_t).norm_sqr();
    let s = mu_fam.m0() * coefficient_sum(tilde_fam, a, n);
    let bracket = 2.0 - s;
    let rhs = cd_kernel(mu_fam, n, w, w, Method::Sum)?.re
        * (cd_kernel(mu_fam, n, z, z, Method::Sum)?.re
            - cd_kernel(tilde_fam, n, z, z, Method::Sum)?.re * bracket);
    let report = InequalityReport::new(
        format!("lubinsky-gap n={n} z={} w={}", fmt_c(z), fmt_c(w)),
        lhs,
        rhs,
    );
    Ok((report, bracket))
}

/// The original two-measure kernel comparison for μ₁ <= μ₂:
/// |𝕂ₙ(z,w,μ₁) − 𝕂ₙ(z,w,μ₂)|² <= 𝕂ₙ(w,w,μ₁)(𝕂ₙ(z,z,μ₁) − 𝕂ₙ(z,z,μ₂)).
/// The ordering assumption is the caller's responsibility.
pub fn lubinsky_classical(
    fam1: &OpucFamily,
    fam2: &OpucFamily,
    n: usize,
    z: Complex64,
    w: Complex64,
) -> Result<InequalityReport> {
    check_degree(n, fam1.n_max, "lubinsky_classical")?;
    check_degree(n, fam2.n_max, "lubinsky_classical")?;
    let k1 = cd_kernel(fam1, n, z, w, Method::Sum)?;
    let k2 = cd_kernel(fam2, n, z, w, Method::Sum)?;
    let lhs = (k1 - k2).norm_sqr();
    let rhs = cd_kernel(fam1, n, w, w, Method::Sum)?.re
        * (cd_kernel(fam1, n, z, z, Method::Sum)?.re
            - cd_kernel(fam2, n, z, z, Method::Sum)?.re);
    Ok(InequalityReport::new(
        format!("lubinsky-classical n={n} z={} w={}", fmt_c(z), fmt_c(w)),
        lhs,
        rhs,
    ))
}

/// L² bound on the companion kernel against the base measure:
/// ∫|𝕂ₙ(z,s,μ̃)|² dμ(s) <= m₀(μ)·𝕂ₙ(z,z,μ̃)·Σⱼ(1+|aⱼ|²)k̃ⱼ².
/// The left side is integrated by quadrature over the base measure.
pub fn l2_kernel_bound(
    mu_fam: &OpucFamily,
    tilde_fam: &OpucFamily,
    a: &[Complex64],
    n: usize,
    z: Complex64,
) -> Result<InequalityReport> {
    check_degree(n, tilde_fam.n_max, "l2_kernel_bound")?;
    if a.len() < n {
        return Err(Error::Precondition(format!(
            "l2_kernel_bound needs a₁..a_{n}, got {} entries",
            a.len()
        )));
    }
    let mu = mu_fam.spec.as_ref().ok_or_else(|| {
        Error::Precondition("l2_kernel_bound needs the base family's measure".into())
    })?;
    let h = TAU / INTEGRAL_NODES as f64;
    let mut lhs = 0.0;
    for j in 0..INTEGRAL_NODES {
        let theta = h * j as f64;
        let s = Complex64::from_polar(1.0, theta);
        lhs += cd_kernel(tilde_fam, n, z, s, Method::Sum)?.norm_sqr() * mu.weight(theta);
    }
    lhs *= h;
    let rhs = mu_fam.m0()
        * cd_kernel(tilde_fam, n, z, z, Method::Sum)?.re
        * coefficient_sum(tilde_fam, a, n);
    Ok(InequalityReport::new(
        format!("l2-kernel-bound n={n} z={}", fmt_c(z)),
        lhs,
        rhs,
    ))
}

/// How close to real a value must be for the sub-reproducing preconditions.
const REALNESS_TOL: f64 = 1e-10;

/// Sub-reproducing property at n = fam.n_max:
/// Re ∫ conj(p(z)) 𝒦ₙ(z,w,μ) dμ(z) <= m₀(μ)·Re p(w),
/// valid when p = Σβⱼφⱼ has Re βⱼ >= 0 and every Φⱼ(w) is real and
/// nonnegative. Both preconditions are verified and violations name the
/// offending index. The left side reduces exactly to
/// Re Σⱼ conj(Φⱼ(w)) conj(βⱼ) ‖Φⱼ‖² by orthogonality.
pub fn subreproducing_check(fam: &OpucFamily, p: &CPoly, w: Complex64) -> Result<InequalityReport> {
    let n = fam.n_max;
    let deg = p.degree().unwrap_or(0);
    if deg > n {
        return Err(Error::Precondition(format!(
            "polynomial degree {deg} exceeds the family degree {n}"
        )));
    }

    // Expand p in the monic basis by back-substitution: the basis matrix is
    // unitriangular, so beta[j] is read off the z^j coefficient top-down.
    let mut work = vec![Complex64::new(0.0, 0.0); n + 1];
    for (k, c) in p.coeffs().iter().enumerate() {
        work[k] = *c;
    }
    let mut beta = vec![Complex64::new(0.0, 0.0); n + 1];
    for j in (0..=n).rev() {
        let b = work[j];
        beta[j] = b;
        if b.norm() > 0.0 {
            for (k, c) in fam.phi[j].coeffs().iter().enumerate() {
                work[k] -= b * c;
            }
        }
    }

    let scale = p.coeffs().iter().map(|c| c.norm()).fold(1.0, f64::max);
    for (j, b) in beta.iter().enumerate() {
        if b.re < -REALNESS_TOL * scale {
            return Err(Error::Precondition(format!(
                "expansion coefficient beta[{j}] has negative real part {:.3e}",
                b.re
            )));
        }
    }
    let mut values = Vec::with_capacity(n + 1);
    for (j, phi) in fam.phi.iter().enumerate() {
        let v = phi.eval(w);
        let bound = REALNESS_TOL * v.norm().max(1.0);
        if v.im.abs() > bound || v.re < -bound {
            return Err(Error::Precondition(format!(
                "phi[{j}] at w is not real and nonnegative: {}",
                fmt_c(v)
            )));
        }
        values.push(v);
    }

    let mut lhs = Complex64::new(0.0, 0.0);
    for j in 0..=n {
        lhs += values[j].conj() * beta[j].conj() * fam.norm_sq[j];
    }
    let rhs = fam.m0() * p.eval(w).re;
    Ok(InequalityReport::new(
        format!("sub-reproducing n={n} w={}", fmt_c(w)),
        lhs.re,
        rhs,
    ))
}

/// Integrated kernel-type bound:
/// ∫ 𝒦ₙ(z,η,μ) 𝒦ₙ(η,z,μ) dμ(η) <= m₀(μ)·𝒦ₙ(z,z,μ),
/// the left side by quadrature (the integrand is |𝒦ₙ(z,η)|² by
/// conjugate symmetry).
pub fn kernel_corollary_check(fam: &OpucFamily, n: usize, z: Complex64) -> Result<InequalityReport> {
    check_degree(n, fam.n_max, "kernel_corollary_check")?;
    let mu = fam.spec.as_ref().ok_or_else(|| {
        Error::Precondition("kernel_corollary_check needs the family's measure".into())
    })?;
    let h = TAU / INTEGRAL_NODES as f64;
    let mut lhs = 0.0;
    for j in 0..INTEGRAL_NODES {
        let theta = h * j as f64;
        let eta = Complex64::from_polar(1.0, theta);
        lhs += ktype_over(&fam.phi, n, z, eta).norm_sqr() * mu.weight(theta);
    }
    lhs *= h;
    let rhs = fam.m0() * ktype_over(&fam.phi, n, z, z).re;
    Ok(InequalityReport::new(
        format!("kernel-corollary n={n} z={}", fmt_c(z)),
        lhs,
        rhs,
    ))
}

/// |z| must sit on the unit circle within this for the diagonal gap bounds.
const CIRCLE_TOL: f64 = 1e-8;

/// Bounds on |𝒦ₙ(z,z,μ̃) − 𝒦ₙ(z,z,μ)| for |z| = 1 (kernel-type diagonals,
/// quasi vs base). First bound:
/// Σ_{j<=n} [(|αⱼ₋₁|+1)² + 2|aⱼ|²]·exp(2Σ_{k<=j-2}|αₖ|) with α₋₁ := 0 and
/// empty exponent sums zero. Second bound, returned only when every αₖ with
/// k < n is nonzero: M + 6Σ_{j=3..n} e^{2j−2}/|αⱼ₋₂|² with
/// M = 2e⁴(6 + Σ_{j<=2}|aⱼ|²). Terms are assembled in log space so that a
/// tiny αⱼ₋₂ overflows to an infinite (trivially passing) bound rather than
/// poisoning the sum.
pub fn diag_gap_bound(
    base: &OpucFamily,
    qf: &QuasiFamily,
    n: usize,
    z: Complex64,
) -> Result<(InequalityReport, Option<InequalityReport>)> {
    check_degree(n, qf.n_max(), "diag_gap_bound")?;
    if (z.norm() - 1.0).abs() > CIRCLE_TOL {
        return Err(Error::Domain(format!(
            "diag_gap_bound needs |z| = 1, got |z| = {:.6}",
            z.norm()
        )));
    }
    let lhs = (ktype_over(&qf.qphi, n, z, z).re - ktype_over(&base.phi, n, z, z).re).abs();

    let mut alpha_prefix = 0.0; // 2 * Σ_{k <= j-2} |α_k|
    let mut rhs1 = 0.0;
    for j in 0..=n {
        if j >= 2 {
            alpha_prefix += 2.0 * base.alpha[j - 2].norm();
        }
        let prev_alpha = if j >= 1 { base.alpha[j - 1].norm() } else { 0.0 };
        let prefactor = (prev_alpha + 1.0).powi(2) + 2.0 * qf.a[j].norm_sqr();
        rhs1 += (prefactor.ln() + alpha_prefix).exp();
    }
    let first = InequalityReport::new(format!("diag-gap-1 n={n} z={}", fmt_c(z)), lhs, rhs1);

    let all_nonzero = (0..n).all(|k| base.alpha[k].norm() > 1e-12);
    let second = if all_nonzero {
        let a_head: f64 = (0..=2.min(qf.n_max()))
            .map(|j| qf.a[j].norm_sqr())
            .sum();
        let m = 2.0 * 4.0_f64.exp() * (6.0 + a_head);
        let mut tail = 0.0;
        for j in 3..=n {
            let expo = (2 * j - 2) as f64 - 2.0 * base.alpha[j - 2].norm().ln();
            tail += expo.exp();
        }
        Some(InequalityReport::new(
            format!("diag-gap-2 n={n} z={}", fmt_c(z)),
            lhs,
            m + 6.0 * tail,
        ))
    } else {
        None
    };
    Ok((first, second))
}
