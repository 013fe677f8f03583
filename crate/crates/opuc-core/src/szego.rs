//! OPUC families: the Szegő recursion, Verblunsky extraction from moments,
//! Christoffel-transform families, and orthogonality verification.

use num_complex::Complex64;

use crate::cpoly::CPoly;
use crate::measure::{self, MeasureSpec, MomentTable};
use crate::{Error, Result};

/// Extracted |alpha| at or above this is treated as an ill-conditioned measure.
const ALPHA_CONDITIONING_LIMIT: f64 = 1.0 - 1e-12;

/// Remainder tolerance for the exact kernel division in the Christoffel
/// transform, relative to the numerator's largest coefficient.
const CHRISTOFFEL_REMAINDER_TOL: f64 = 1e-9;

/// A measure together with its monic orthogonal polynomials Φ₀..Φ_N,
/// reversed polynomials Φ*ₙ, Verblunsky coefficients α₀..α_{N−1} and squared
/// norms ‖Φₙ‖²_μ.
///
/// Sign convention throughout: αₙ = −conj(Φₙ₊₁(0)); the recursion reads
/// Φₙ₊₁ = zΦₙ − ᾱₙΦ*ₙ. Norms are unnormalized: norm_sq[0] = m₀(μ) as stored
/// (2π for the plain arc-length measure, 1 for normalized ones).
#[derive(Debug, Clone)]
pub struct OpucFamily {
    /// Measure this family is orthogonal against, when one is attached.
    pub spec: Option<MeasureSpec>,
    /// Human-readable family name.
    pub label: String,
    /// Maximum degree N.
    pub n_max: usize,
    /// Monic Φₙ for n = 0..=N.
    pub phi: Vec<CPoly>,
    /// Φ*ₙ = reverse(Φₙ, n).
    pub phi_star: Vec<CPoly>,
    /// αₙ for n = 0..N.
    pub alpha: Vec<Complex64>,
    /// ‖Φₙ‖²_μ for n = 0..=N.
    pub norm_sq: Vec<f64>,
}

impl OpucFamily {
    /// Total mass m₀(μ) = ‖Φ₀‖².
    #[inline]
    pub fn m0(&self) -> f64 {
        self.norm_sq[0]
    }

    /// Orthonormal polynomial value φₙ(z) = Φₙ(z)/‖Φₙ‖.
    #[inline]
    pub fn orthonormal_eval(&self, n: usize, z: Complex64) -> Complex64 {
        self.phi[n].eval(z) / self.norm_sq[n].sqrt()
    }

    /// Orthonormal reversed value φ*ₙ(z).
    #[inline]
    pub fn orthonormal_star_eval(&self, n: usize, z: Complex64) -> Complex64 {
        self.phi_star[n].eval(z) / self.norm_sq[n].sqrt()
    }

    /// JSON form: {"spec":…, "alphas":[[re,im],…], "norm_sq":[…], "phi":[[[re,im],…],…]}.
    pub fn to_json(&self) -> serde_json::Value {
        let spec = match &self.spec {
            Some(s) => serde_json::to_value(s).unwrap_or(serde_json::Value::Null),
            None => serde_json::json!({ "label": self.label }),
        };
        serde_json::json!({
            "spec": spec,
            "alphas": self.alpha.iter().map(|a| [a.re, a.im]).collect::<Vec<_>>(),
            "norm_sq": self.norm_sq,
            "phi": self
                .phi
                .iter()
                .map(|p| p.coeffs().iter().map(|c| [c.re, c.im]).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

/// One Szegő step: (Φₙ, Φ*ₙ, αₙ) ↦ (Φₙ₊₁, Φ*ₙ₊₁) =
/// (zΦₙ − ᾱₙΦ*ₙ, Φ*ₙ − αₙzΦₙ). Requires |αₙ| < 1.
pub fn szego_step(
    phi_n: &CPoly,
    phi_star_n: &CPoly,
    alpha_n: Complex64,
) -> Result<(CPoly, CPoly)> {
    if alpha_n.norm() >= 1.0 {
        return Err(Error::AlphaOutOfRange { n: 0, modulus: alpha_n.norm() });
    }
    let z_phi = phi_n.mul_z();
    let next = z_phi.sub(&phi_star_n.scale(alpha_n.conj()));
    let next_star = phi_star_n.sub(&z_phi.scale(alpha_n));
    Ok((next, next_star))
}

/// Builds a family from explicit Verblunsky coefficients; norms follow the
/// recursion ‖Φₙ₊₁‖² = ‖Φₙ‖²(1 − |αₙ|²) from norm0 = m₀.
pub fn family_from_alphas(
    label: &str,
    alphas: &[Complex64],
    norm0: f64,
) -> Result<OpucFamily> {
    if !(norm0 > 0.0) {
        return Err(Error::InvalidMeasure(format!(
            "norm0 must be positive, got {norm0}"
        )));
    }
    let n_max = alphas.len();
    let mut phi = vec![CPoly::one()];
    let mut phi_star = vec![CPoly::one()];
    let mut norm_sq = vec![norm0];
    for (n, &a) in alphas.iter().enumerate() {
        if a.norm() >= 1.0 {
            return Err(Error::AlphaOutOfRange { n, modulus: a.norm() });
        }
        let (p, ps) = szego_step(&phi[n], &phi_star[n], a)?;
        phi.push(p);
        phi_star.push(ps);
        norm_sq.push(norm_sq[n] * (1.0 - a.norm_sqr()));
    }
    Ok(OpucFamily {
        spec: None,
        label: label.to_string(),
        n_max,
        phi,
        phi_star,
        alpha: alphas.to_vec(),
        norm_sq,
    })
}

/// Builds a family from a measure's moments: at each step the coefficient is
/// extracted as ᾱₙ = ⟨zΦₙ, Φ*ₙ⟩_μ / ‖Φₙ‖²_μ, then one Szegő step is applied.
/// Norms come from direct quadrature, not the recursion.
pub fn family_from_measure(
    spec: &MeasureSpec,
    n_max: usize,
    quad_n: Option<usize>,
) -> Result<OpucFamily> {
    if n_max < 1 {
        return Err(Error::Precondition("family_from_measure requires N >= 1".into()));
    }
    let kmax = n_max + 1;
    let tbl = match quad_n {
        Some(n) => measure::moments(spec, kmax, n)?,
        None => measure::moments_auto(spec, kmax)?,
    };
    family_from_moments(spec, &tbl, n_max)
}

/// Same as [`family_from_measure`] from an existing moment table.
pub fn family_from_moments(
    spec: &MeasureSpec,
    tbl: &MomentTable,
    n_max: usize,
) -> Result<OpucFamily> {
    let mut phi = vec![CPoly::one()];
    let mut phi_star = vec![CPoly::one()];
    let mut alpha = Vec::with_capacity(n_max);
    let mut norm_sq = vec![tbl.total_mass()];
    for n in 0..n_max {
        let z_phi = phi[n].mul_z();
        let alpha_conj = tbl.inner(&z_phi, &phi_star[n])? / norm_sq[n];
        let a = alpha_conj.conj();
        if a.norm() >= ALPHA_CONDITIONING_LIMIT {
            return Err(Error::IllConditioned { n, modulus: a.norm() });
        }
        let (p, ps) = szego_step(&phi[n], &phi_star[n], a)?;
        norm_sq.push(tbl.norm_sq(&p)?);
        phi.push(p);
        phi_star.push(ps);
        alpha.push(a);
    }
    Ok(OpucFamily {
        spec: Some(spec.clone()),
        label: spec.label(),
        n_max,
        phi,
        phi_star,
        alpha,
        norm_sq,
    })
}

/// Family for the Christoffel-transformed measure |z−γ|²dν, built from the
/// base family by the kernel formula
/// Φₙ(z;γ) = (Ψₙ₊₁(z) − (Ψₙ₊₁(γ)/Kₙ(γ,γ))·Kₙ(z,γ)) / (z−γ),
/// where Kₙ is the CD kernel of ν as a polynomial in z. The division must be
/// exact; its remainder is checked.
pub fn christoffel_family(nu: &OpucFamily, gamma: Complex64, n_max: usize) -> Result<OpucFamily> {
    if n_max + 1 > nu.n_max {
        return Err(Error::Precondition(format!(
            "christoffel_family to degree {n_max} needs the base family built to degree {}",
            n_max + 1
        )));
    }
    let divisor = CPoly::new(vec![-gamma, Complex64::new(1.0, 0.0)]);
    let mut phi = vec![CPoly::one()];
    // Running CD kernel of the base at w = γ, as a polynomial in z. The
    // degree-n quotient needs the kernel summed through index n, so the
    // constant term is seeded before the loop.
    let mut kernel = nu.phi[0].scale(nu.phi[0].eval(gamma).conj() / nu.norm_sq[0]);
    let mut kernel_at_gamma = nu.phi[0].eval(gamma).norm_sqr() / nu.norm_sq[0];
    for n in 1..=n_max {
        let contrib = nu.phi[n].scale(nu.phi[n].eval(gamma).conj() / nu.norm_sq[n]);
        kernel = kernel.add(&contrib);
        kernel_at_gamma += nu.phi[n].eval(gamma).norm_sqr() / nu.norm_sq[n];
        if !(kernel_at_gamma > 0.0) {
            return Err(Error::Precondition(format!(
                "CD kernel of the base vanishes at gamma for n = {n}"
            )));
        }
        let psi = &nu.phi[n + 1];
        let numerator = psi.sub(&kernel.scale(psi.eval(gamma) / kernel_at_gamma));
        let (quot, rem) = numerator.divmod(&divisor)?;
        let scale = numerator
            .coeffs()
            .iter()
            .map(|c| c.norm())
            .fold(1.0, f64::max);
        let rem_norm = rem.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        if rem_norm > CHRISTOFFEL_REMAINDER_TOL * scale {
            return Err(Error::Remainder {
                context: format!("christoffel kernel division at n = {n}"),
                residual: rem_norm,
            });
        }
        phi.push(quot);
    }

    let mut alpha = Vec::with_capacity(n_max);
    let mut phi_star = vec![CPoly::one()];
    for n in 0..n_max {
        let a = -phi[n + 1].eval(Complex64::new(0.0, 0.0)).conj();
        if a.norm() >= 1.0 {
            return Err(Error::AlphaOutOfRange { n, modulus: a.norm() });
        }
        alpha.push(a);
        phi_star.push(phi[n + 1].reverse(n + 1)?);
    }

    // m₀ of |z−γ|²dν from the base: (1+|γ|²)m₀(ν) − 2Re(γ̄·ᾱ₀(ν)·m₀(ν)),
    // using ∫z dν = ᾱ₀(ν)·m₀(ν) with the αₙ = −conj(Φₙ₊₁(0)) convention.
    let m0_nu = nu.m0();
    let mean = if nu.alpha.is_empty() {
        Complex64::new(0.0, 0.0)
    } else {
        nu.alpha[0].conj() * m0_nu
    };
    let norm0 = (1.0 + gamma.norm_sqr()) * m0_nu - 2.0 * (gamma.conj() * mean).re;
    if !(norm0 > 0.0) {
        return Err(Error::InvalidMeasure(format!(
            "transformed measure has nonpositive mass {norm0}"
        )));
    }
    let mut norm_sq = vec![norm0];
    for (n, a) in alpha.iter().enumerate() {
        norm_sq.push(norm_sq[n] * (1.0 - a.norm_sqr()));
    }

    let spec = match &nu.spec {
        Some(MeasureSpec::Lebesgue { normalized: true }) => {
            Some(MeasureSpec::ChristoffelLebesgue { gamma })
        }
        _ => None,
    };
    let label = format!("christoffel({}, gamma)", nu.label);
    Ok(OpucFamily { spec, label, n_max, phi, phi_star, alpha, norm_sq })
}

/// Max over j ≠ k ≤ N of |⟨Φⱼ,Φₖ⟩_μ| / (‖Φⱼ‖‖Φₖ‖), by quadrature against the
/// family's own measure.
pub fn verify_orthogonality(fam: &OpucFamily, quad_n: Option<usize>) -> Result<f64> {
    let spec = fam.spec.as_ref().ok_or_else(|| {
        Error::Precondition("verify_orthogonality needs a family with an attached measure".into())
    })?;
    let kmax = fam.n_max;
    let tbl = match quad_n {
        Some(n) => measure::moments(spec, kmax, n)?,
        None => measure::moments_auto(spec, kmax)?,
    };
    let norms: Vec<f64> = fam
        .phi
        .iter()
        .map(|p| tbl.norm_sq(p))
        .collect::<Result<_>>()?;
    let mut worst = 0.0_f64;
    for j in 0..=fam.n_max {
        for k in 0..j {
            let g = tbl.inner(&fam.phi[j], &fam.phi[k])?.norm();
            worst = worst.max(g / (norms[j] * norms[k]).sqrt());
        }
    }
    Ok(worst)
}
