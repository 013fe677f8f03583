//! Order-one quasi-orthogonal companions Φ̃ₙ = Φₙ − aₙΦₙ₋₁, the coefficient
//! sequence rules that put a family in the Marcellán class, the 2×2 matrix
//! recurrence and its inversion, and verification against a companion
//! measure μ̃.

use num_complex::Complex64;
use serde::Serialize;

use crate::cpoly::CPoly;
use crate::measure::{self, MeasureSpec};
use crate::szego::{self, OpucFamily};
use crate::{Error, Result};

/// A Verblunsky coefficient below this is "zero" for the ratio rule.
const ALPHA_ZERO_TOL: f64 = 1e-12;

/// Remainder tolerance for the exact division in `reconstruct_phi`.
const RECONSTRUCT_REMAINDER_TOL: f64 = 1e-9;

/// Default verification tolerance; the integral check scales it by m₀(μ̃).
const DEFAULT_M2_TOL: f64 = 1e-8;

/// Deviation tolerance for the degree-2 CD identity check.
const CD2_TOL: f64 = 1e-9;

/// A base family with a coefficient sequence a₁..a_N and the quasi
/// polynomials Φ̃ₙ (Φ̃₀ = Φ₀ = 1, a₀ = 0 by convention).
///
/// Orthogonality with respect to a companion μ̃ is a property to be verified
/// ([`verify_m2`]), never assumed: arbitrary a-sequences are accepted.
#[derive(Debug, Clone)]
pub struct QuasiFamily {
    pub base: OpucFamily,
    /// a[n] is the coefficient aₙ; index 0 holds the a₀ = 0 sentinel.
    pub a: Vec<Complex64>,
    /// Φ̃ₙ for n = 0..=N.
    pub qphi: Vec<CPoly>,
    /// Φ̃*ₙ = reverse(Φ̃ₙ, n).
    pub qphi_star: Vec<CPoly>,
    /// Companion measure, when one is attached.
    pub tilde_spec: Option<MeasureSpec>,
    /// Verblunsky coefficients of the companion, when computed.
    pub tilde_alphas: Option<Vec<Complex64>>,
}

impl QuasiFamily {
    #[inline]
    pub fn n_max(&self) -> usize {
        self.base.n_max
    }
}

/// Builds Φ̃ₙ = Φₙ − aₙΦₙ₋₁ for n = 1..=N from a sequence a₁..a_N
/// (`a.len() == base.n_max`; entries may be zero).
pub fn quasi_family(base: &OpucFamily, a: &[Complex64]) -> Result<QuasiFamily> {
    if a.len() != base.n_max {
        return Err(Error::Precondition(format!(
            "a-sequence length {} must equal the family degree {}",
            a.len(),
            base.n_max
        )));
    }
    let mut a_full = Vec::with_capacity(base.n_max + 1);
    a_full.push(Complex64::new(0.0, 0.0));
    a_full.extend_from_slice(a);
    let mut qphi = vec![base.phi[0].clone()];
    let mut qphi_star = vec![base.phi_star[0].clone()];
    for (n, &a_n) in a_full.iter().enumerate().skip(1) {
        let q = base.phi[n].sub(&base.phi[n - 1].scale(a_n));
        qphi_star.push(q.reverse(n)?);
        qphi.push(q);
    }
    Ok(QuasiFamily {
        base: base.clone(),
        a: a_full,
        qphi,
        qphi_star,
        tilde_spec: None,
        tilde_alphas: None,
    })
}

/// Attaches a companion measure and its Verblunsky coefficients.
pub fn with_tilde(mut qf: QuasiFamily, tilde_spec: MeasureSpec) -> Result<QuasiFamily> {
    let fam = szego::family_from_measure(&tilde_spec, qf.n_max().max(1), None)?;
    qf.tilde_alphas = Some(fam.alpha);
    qf.tilde_spec = Some(tilde_spec);
    Ok(qf)
}

/// The a-sequence that makes the family's quasi polynomials orthogonal,
/// when the family is recognized.
///
/// The ratio rule aₙ₊₁ = ᾱₙ/ᾱₙ₋₁ (n ≥ 2) assumes the companion's
/// coefficients vanish from index 2 on; the first two terms need more:
/// a₁ = ᾱ̃₀ − ᾱ₀ and a₂ = (ᾱ₁ − ᾱ̃₁)/ᾱ₀. Recognized closed forms are used
/// directly; the rational preset seeds a₁, a₂ from its known companion;
/// otherwise the fallback takes α̃₀ = α̃₁ = 0, equivalent to extending the
/// ratio rule downward with ᾱ₋₁ = −1. Requires αₙ ≠ 0 for n < N.
pub fn marcellan_a_seq(base: &OpucFamily) -> Result<Vec<Complex64>> {
    for (n, al) in base.alpha.iter().enumerate() {
        if al.norm() <= ALPHA_ZERO_TOL {
            return Err(Error::ZeroAlpha(n));
        }
    }
    let n_max = base.n_max;
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let close = |x: Complex64, y: Complex64| (x - y).norm() < 1e-12;

    if let Some(MeasureSpec::ChristoffelLebesgue { gamma }) = base.spec {
        if close(gamma, one) {
            return Ok((1..=n_max)
                .map(|n| Complex64::new(n as f64 / (n as f64 + 1.0), 0.0))
                .collect());
        }
        if close(gamma, i) {
            return Ok((1..=n_max)
                .map(|n| i * (n as f64 / (n as f64 + 1.0)))
                .collect());
        }
    }

    // First two companion coefficients: zero in the fallback, measured from
    // the known companion for the rational family.
    let (t0, t1) = match &base.spec {
        Some(spec @ MeasureSpec::RationalMarcellan { .. }) => {
            let tilde = measure::companion_tilde(spec, &measure::ASeqHint::Marcellan)?;
            let fam = szego::family_from_measure(&tilde, 2, None)?;
            (fam.alpha[0], fam.alpha[1])
        }
        _ => (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
    };

    let mut a = Vec::with_capacity(n_max);
    a.push(t0.conj() - base.alpha[0].conj());
    if n_max >= 2 {
        a.push((base.alpha[1].conj() - t1.conj()) / base.alpha[0].conj());
    }
    for n in 2..n_max {
        a.push(base.alpha[n].conj() / base.alpha[n - 1].conj());
    }
    Ok(a)
}

/// Inverts the forward 2×2 system: recovers (Φₙ, Φ*ₙ) from
/// (Φ̃ₙ₊₁, Φ̃*ₙ₊₁, aₙ₊₁, αₙ) by exact division by the determinant polynomial
/// d(z) = (z − aₙ₊₁)(1 − āₙ₊₁z) − |αₙ|²z.
pub fn reconstruct_phi(
    qphi_next: &CPoly,
    qphi_star_next: &CPoly,
    a_next: Complex64,
    alpha_n: Complex64,
) -> Result<(CPoly, CPoly)> {
    let d = CPoly::new(vec![
        -a_next,
        Complex64::new(1.0 + a_next.norm_sqr() - alpha_n.norm_sqr(), 0.0),
        -a_next.conj(),
    ]);
    if d.is_zero() {
        return Err(Error::Inconsistent(
            "determinant polynomial is identically zero".into(),
        ));
    }
    let one_minus_az = CPoly::new(vec![Complex64::new(1.0, 0.0), -a_next.conj()]);
    let z_minus_a = CPoly::new(vec![-a_next, Complex64::new(1.0, 0.0)]);

    let divide = |numerator: CPoly, what: &str| -> Result<CPoly> {
        let (quot, rem) = numerator.divmod(&d)?;
        let scale = numerator
            .coeffs()
            .iter()
            .map(|c| c.norm())
            .fold(1.0, f64::max);
        let rem_norm = rem.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        if rem_norm > RECONSTRUCT_REMAINDER_TOL * scale {
            return Err(Error::Inconsistent(format!(
                "reconstruction division for {what} leaves remainder {rem_norm:.3e}"
            )));
        }
        Ok(quot)
    };

    let num_phi = one_minus_az
        .mul(qphi_next)
        .add(&qphi_star_next.scale(alpha_n.conj()));
    let num_star = qphi_next
        .mul_z()
        .scale(alpha_n)
        .add(&z_minus_a.mul(qphi_star_next));
    Ok((divide(num_phi, "phi")?, divide(num_star, "phi_star")?))
}

/// aₙ₊₁ = (Φ̃ₙ₊₁(0) + ᾱₙ) / ᾱₙ₋₁; requires αₙ₋₁ ≠ 0.
pub fn a_from_quasi(
    qphi_next_at_0: Complex64,
    alpha_n: Complex64,
    alpha_prev: Complex64,
) -> Result<Complex64> {
    if alpha_prev.norm() <= ALPHA_ZERO_TOL {
        return Err(Error::ZeroAlpha(0));
    }
    Ok((qphi_next_at_0 + alpha_n.conj()) / alpha_prev.conj())
}

/// αₙ = −(Φ̃*ₙ₊₁(1/āₙ₊₁) / Φₙ(1/āₙ₊₁)) · āₙ₊₁; requires aₙ₊₁ ≠ 0 and that
/// 1/āₙ₊₁ is not a zero of Φₙ.
pub fn alpha_from_corollary(qf: &QuasiFamily, n: usize) -> Result<Complex64> {
    if n + 1 > qf.n_max() {
        return Err(Error::Precondition(format!(
            "alpha_from_corollary needs qphi[{}], family built to {}",
            n + 1,
            qf.n_max()
        )));
    }
    let a_next = qf.a[n + 1];
    if a_next.norm() <= ALPHA_ZERO_TOL {
        return Err(Error::Precondition("a[n+1] must be nonzero".into()));
    }
    let zz = Complex64::new(1.0, 0.0) / a_next.conj();
    let denom = qf.base.phi[n].eval(zz);
    if denom.norm() < 1e-14 {
        return Err(Error::Inconsistent(format!(
            "phi[{n}] vanishes at 1/conj(a[n+1]); formula not evaluable"
        )));
    }
    Ok(-(qf.qphi_star[n + 1].eval(zz) / denom) * a_next.conj())
}

/// Metrics of a Marcellán-class verification run.
#[derive(Debug, Clone, Serialize)]
pub struct M2Report {
    /// Max over j ≠ k of |⟨Φ̃ⱼ,Φ̃ₖ⟩_μ̃| / (‖Φ̃ⱼ‖‖Φ̃ₖ‖).
    pub max_offdiag: f64,
    pub offdiag_pass: bool,
    /// minₙ |∫Φₙ dμ̃| over n ≤ N (base Φₙ, not Φ̃ₙ).
    pub min_phi_integral: f64,
    /// Threshold the integral must exceed: tol·m₀(μ̃).
    pub integral_threshold: f64,
    pub integral_pass: bool,
    /// Max deviation of the degree-2 CD identity over a 32-point disk grid,
    /// using the Φ̃ₖ orthonormalized against μ̃.
    pub cd2_max_dev: f64,
    pub cd2_pass: bool,
    /// Total mass of the companion.
    pub tilde_mass: f64,
}

impl M2Report {
    pub fn pass(&self) -> bool {
        self.offdiag_pass && self.integral_pass && self.cd2_pass
    }
}

/// Fixed deterministic grid: 16 interior points on a spiral plus 16 points on
/// the circle.
pub fn disk_grid_32() -> Vec<Complex64> {
    let mut grid = Vec::with_capacity(32);
    for k in 1..=16 {
        let r = 0.058 * k as f64;
        let angle = 0.37 + 0.71 * k as f64;
        grid.push(Complex64::from_polar(r, angle));
    }
    for k in 0..16 {
        grid.push(Complex64::from_polar(1.0, 0.2 + 0.39 * k as f64));
    }
    grid
}

/// Verifies membership evidence against the attached companion measure:
/// normalized Gram off-diagonals of {Φ̃ₙ}, the nonvanishing of ∫Φₙdμ̃, and
/// the degree-2 CD identity for the orthonormalized φ̃ₖ.
pub fn verify_m2(qf: &QuasiFamily, quad_n: Option<usize>, tol: Option<f64>) -> Result<M2Report> {
    let tilde = qf.tilde_spec.as_ref().ok_or_else(|| {
        Error::Precondition("verify_m2 needs a quasi family with a companion measure".into())
    })?;
    let tol = tol.unwrap_or(DEFAULT_M2_TOL);
    let n_max = qf.n_max();
    let kmax = n_max.max(2);
    let tbl = match quad_n {
        Some(n) => measure::moments(tilde, kmax, n)?,
        None => measure::moments_auto(tilde, kmax)?,
    };
    let m0 = tbl.total_mass();

    let norms: Vec<f64> = qf
        .qphi
        .iter()
        .map(|p| tbl.norm_sq(p))
        .collect::<Result<_>>()?;
    let mut max_offdiag = 0.0_f64;
    for j in 0..=n_max {
        for k in 0..j {
            let g = tbl.inner(&qf.qphi[j], &qf.qphi[k])?.norm();
            max_offdiag = max_offdiag.max(g / (norms[j] * norms[k]).sqrt());
        }
    }

    let one = CPoly::one();
    let mut min_phi_integral = f64::INFINITY;
    for n in 0..=n_max {
        min_phi_integral = min_phi_integral.min(tbl.inner(&qf.base.phi[n], &one)?.norm());
    }

    // Degree-2 CD identity |φ̃*₂|² − |φ̃₂|² = (1−|z|²)(|φ̃₀|² + |φ̃₁|²)
    // for the companion-orthonormalized polynomials.
    let mut cd2_max_dev = 0.0_f64;
    if n_max >= 2 {
        for z in disk_grid_32() {
            let v = |k: usize| qf.qphi[k].eval(z) / norms[k].sqrt();
            let vs = |k: usize| qf.qphi_star[k].eval(z) / norms[k].sqrt();
            let lhs = vs(2).norm_sqr() - v(2).norm_sqr();
            let rhs = (1.0 - z.norm_sqr()) * (v(0).norm_sqr() + v(1).norm_sqr());
            cd2_max_dev = cd2_max_dev.max((lhs - rhs).abs());
        }
    }

    let integral_threshold = tol * m0;
    Ok(M2Report {
        max_offdiag,
        offdiag_pass: max_offdiag < tol,
        min_phi_integral,
        integral_threshold,
        integral_pass: min_phi_integral > integral_threshold,
        cd2_max_dev,
        cd2_pass: cd2_max_dev < CD2_TOL,
        tilde_mass: m0,
    })
}
