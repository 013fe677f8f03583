//! Para-orthogonal polynomials (all zeros on the unit circle), their linear
//! combinations, the monic divided-difference family ℒₙ, the modified
//! kernel polynomials Rₙ built by a three-term recurrence, and the chain
//! sequence data (tₙ, cₙ, gₙ) attached to a quasi-orthogonal pair.

use num_complex::Complex64;

use crate::cpoly::CPoly;
use crate::kernels::{self, Method};
use crate::szego::OpucFamily;
use crate::{Error, Result};

/// |ζ| and computed zeros must sit on the unit circle within this.
const CIRCLE_TOL: f64 = 1e-8;

/// Relative remainder tolerance for the exact division by (z − ζ).
const DIVISION_REMAINDER_TOL: f64 = 1e-9;

/// Denominators smaller than this are treated as degenerate data.
const DEGENERATE_DENOM_TOL: f64 = 1e-14;

fn require_on_circle(zeta: Complex64, what: &str) -> Result<()> {
    if (zeta.norm() - 1.0).abs() > CIRCLE_TOL {
        return Err(Error::Domain(format!(
            "{what} needs |zeta| = 1, got |zeta| = {:.6}",
            zeta.norm()
        )));
    }
    Ok(())
}

/// Φₙ − (Φₙ(ζ)/Φ*ₙ(ζ))Φ*ₙ without the zero check; degree stays n because
/// the leading coefficient 1 − λ·conj(Φₙ(0)) cannot vanish for |λ| = 1 and
/// |Φₙ(0)| < 1.
fn popuc_poly(fam: &OpucFamily, n: usize, zeta: Complex64) -> Result<CPoly> {
    let denom = fam.phi_star[n].eval(zeta);
    if denom.norm() < DEGENERATE_DENOM_TOL {
        return Err(Error::Domain(format!(
            "phi_star[{n}] vanishes at zeta = {:.6}{:+.6}i",
            zeta.re, zeta.im
        )));
    }
    let lambda = fam.phi[n].eval(zeta) / denom;
    Ok(fam.phi[n].sub(&fam.phi_star[n].scale(lambda)))
}

/// Para-orthogonal polynomial Φᵖₙ(z;ζ) = Φₙ − (Φₙ(ζ)/Φ*ₙ(ζ))Φ*ₙ for ζ on
/// the unit circle. All its zeros lie on the circle; this is verified on
/// every call and a failure is reported as an inconsistency.
pub fn popuc(fam: &OpucFamily, n: usize, zeta: Complex64) -> Result<CPoly> {
    require_on_circle(zeta, "popuc")?;
    if n > fam.n_max || n == 0 {
        return Err(Error::Precondition(format!(
            "popuc needs 1 <= n <= {}, got {n}",
            fam.n_max
        )));
    }
    let p = popuc_poly(fam, n, zeta)?;
    let worst = p
        .roots()?
        .iter()
        .map(|r| (r.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    if worst > CIRCLE_TOL {
        return Err(Error::Inconsistent(format!(
            "para-orthogonal zeros left the unit circle by {worst:.3e}"
        )));
    }
    Ok(p)
}

/// The linear combination zⁿ − 1 − γ(z^{n−1} − 1). It always vanishes at
/// z = 1; for γ ∈ (0,1) the remaining zeros are strictly inside the disk,
/// for γ > 1 at most one zero lies outside the closed disk.
pub fn popuc_lc(n: usize, gamma: Complex64) -> CPoly {
    assert!(n >= 2, "popuc_lc needs n >= 2, got {n}");
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[0] = gamma - 1.0;
    coeffs[n - 1] = -gamma;
    coeffs[n] = Complex64::new(1.0, 0.0);
    CPoly::new(coeffs)
}

/// Monic degree-n polynomial ℒₙ(z;ζ) = (zΦₙ − ζ(Φₙ(ζ)/Φ*ₙ(ζ))Φ*ₙ)/(z−ζ);
/// the division is exact and the remainder is checked.
pub fn monic_l(fam: &OpucFamily, n: usize, zeta: Complex64) -> Result<CPoly> {
    require_on_circle(zeta, "monic_l")?;
    if n > fam.n_max {
        return Err(Error::Precondition(format!(
            "monic_l needs n <= {}, got {n}",
            fam.n_max
        )));
    }
    let denom = fam.phi_star[n].eval(zeta);
    if denom.norm() < DEGENERATE_DENOM_TOL {
        return Err(Error::Domain(format!(
            "phi_star[{n}] vanishes at zeta = {:.6}{:+.6}i",
            zeta.re, zeta.im
        )));
    }
    let lambda = fam.phi[n].eval(zeta) / denom;
    let numerator = fam.phi[n]
        .mul_z()
        .sub(&fam.phi_star[n].scale(zeta * lambda));
    let divisor = CPoly::new(vec![-zeta, Complex64::new(1.0, 0.0)]);
    let (quot, rem) = numerator.divmod(&divisor)?;
    let scale = numerator
        .coeffs()
        .iter()
        .map(|c| c.norm())
        .fold(1.0, f64::max);
    let rem_norm = rem.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    if rem_norm > DIVISION_REMAINDER_TOL * scale {
        return Err(Error::Remainder {
            context: format!("monic_l({n}) division by (z - zeta)"),
            residual: rem_norm,
        });
    }
    Ok(quot)
}

/// Chain-sequence data for a quasi-orthogonal pair.
///
/// All vectors are subscript-aligned: `t[n]`, `c[n]`, `g[n]` hold the values
/// with those subscripts, with unused low slots zeroed (t[0] and c[0] are
/// sentinels). Logical ranges: t[1..=N], c[1..=N+1], g[0..=N].
#[derive(Debug, Clone)]
pub struct ChainData {
    pub t: Vec<f64>,
    pub c: Vec<f64>,
    pub g: Vec<f64>,
    /// R₀..R_N from the three-term recurrence.
    pub r: Vec<CPoly>,
    /// The product τ₁·α̃₁ entering t₂, c₂, c₃, g₁.
    pub tau: Complex64,
    /// Set when any gₙ leaves (0,1), any cₙ is nonpositive, or a value is
    /// not finite; details in `violations`.
    pub degenerate: bool,
    pub violations: Vec<String>,
}

/// Builds the chain data of a quasi-orthogonal pair. The first two
/// companion coefficients come from the recurrence algebra,
/// α̃₀ = α₀ + ā₁ and α̃₁ = α₁ − ā₂α₀, and vanish from index 2 on; the
/// companion family is cross-checked against these and disagreements are
/// recorded as violations.
///
/// With τ₀ = 1, τ₁ = (1 − ᾱ̃₀)/(1 − α̃₀) and wₙ = τₙα̃ₙ:
///   t[n]   = −Im w[n−1] / (1 − Re w[n−1]),
///   g[n]   = ½|1 − w[n]|² / (1 − Re w[n]),
///   c[n]   = ¼(1 − |α̃ₙ₋₁|²)|1 − wₙ|² / ((1 − Re wₙ)(1 − Re wₙ₋₁)),
/// so c[n] = (1 − g[n−1])g[n] is an identity the data must satisfy rather
/// than the definition of c.
pub fn chain_data(
    base: &OpucFamily,
    a: &[Complex64],
    tilde_fam: &OpucFamily,
    n_chain: usize,
) -> Result<ChainData> {
    if base.alpha.len() < 2 || a.len() < 2 {
        return Err(Error::Precondition(
            "chain_data needs alpha_0, alpha_1 and a_1, a_2".into(),
        ));
    }
    let alpha0 = base.alpha[0];
    let alpha1 = base.alpha[1];
    let at0 = alpha0 + a[0].conj();
    let at1 = alpha1 - a[1].conj() * alpha0;

    let mut violations = Vec::new();
    if !tilde_fam.alpha.is_empty() && (tilde_fam.alpha[0] - at0).norm() > 1e-6 {
        violations.push(format!(
            "companion alpha[0] = {:.6e} disagrees with alpha_0 + conj(a_1) = {:.6e}",
            tilde_fam.alpha[0], at0
        ));
    }
    if tilde_fam.alpha.len() >= 2 && (tilde_fam.alpha[1] - at1).norm() > 1e-6 {
        violations.push(format!(
            "companion alpha[1] = {:.6e} disagrees with alpha_1 - conj(a_2) alpha_0 = {:.6e}",
            tilde_fam.alpha[1], at1
        ));
    }

    let tau1_denom = Complex64::new(1.0, 0.0) - at0;
    if tau1_denom.norm() < DEGENERATE_DENOM_TOL {
        return Err(Error::DegenerateData(
            "1 - alpha_0 - conj(a_1) = 0: the chain ratio is undefined".into(),
        ));
    }
    let tau1 = (Complex64::new(1.0, 0.0) - at0.conj()) / tau1_denom;

    // w_n = tau_n * alpha~_n; alpha~_n = 0 for n >= 2 kills the tail.
    let mut w = vec![Complex64::new(0.0, 0.0); n_chain + 2];
    w[0] = at0;
    if n_chain >= 1 {
        w[1] = tau1 * at1;
    }
    let tilde_alpha_sq = |n: usize| -> f64 {
        match n {
            0 => at0.norm_sqr(),
            1 => at1.norm_sqr(),
            _ => 0.0,
        }
    };

    let one_minus_re = |wn: Complex64| -> Result<f64> {
        let d = 1.0 - wn.re;
        if d.abs() < DEGENERATE_DENOM_TOL {
            return Err(Error::DegenerateData(format!(
                "1 - Re(w) vanishes at w = {:.6}{:+.6}i",
                wn.re, wn.im
            )));
        }
        Ok(d)
    };

    let mut t = vec![0.0; n_chain + 1];
    for n in 1..=n_chain {
        t[n] = -w[n - 1].im / one_minus_re(w[n - 1])?;
    }
    let mut g = vec![0.0; n_chain + 1];
    for n in 0..=n_chain {
        g[n] = 0.5 * (Complex64::new(1.0, 0.0) - w[n]).norm_sqr() / one_minus_re(w[n])?;
    }
    let mut c = vec![0.0; n_chain + 2];
    for n in 1..=n_chain + 1 {
        c[n] = 0.25 * (1.0 - tilde_alpha_sq(n - 1))
            * (Complex64::new(1.0, 0.0) - w[n]).norm_sqr()
            / (one_minus_re(w[n])? * one_minus_re(w[n - 1])?);
    }

    for (n, gv) in g.iter().enumerate() {
        if !gv.is_finite() || *gv <= 0.0 || *gv >= 1.0 {
            violations.push(format!("g[{n}] = {gv} outside (0, 1)"));
        }
    }
    for (n, cv) in c.iter().enumerate().skip(1) {
        if !cv.is_finite() || *cv <= 0.0 {
            violations.push(format!("c[{n}] = {cv} not positive"));
        }
    }
    let degenerate = violations
        .iter()
        .any(|v| v.starts_with("g[") || v.starts_with("c["));

    let r = r_polys(&t, &c, n_chain)?;
    Ok(ChainData {
        t,
        c,
        g,
        r,
        tau: if n_chain >= 1 { w[1] } else { tau1 * at1 },
        degenerate,
        violations,
    })
}

/// R₀..R_N from the three-term recurrence
/// R₀ = 1, R₁ = (1 + it₁)z + (1 − it₁),
/// Rₘ = ((1 + itₘ)z + (1 − itₘ))Rₘ₋₁ − 4c[m−1]·z·Rₘ₋₂ for m >= 2,
/// with t and c subscript-aligned (index 0 is a sentinel).
pub fn r_polys(t: &[f64], c: &[f64], n_max: usize) -> Result<Vec<CPoly>> {
    if n_max >= 1 && t.len() < n_max + 1 {
        return Err(Error::Precondition(format!(
            "r_polys needs t[1..={n_max}], got {} entries",
            t.len()
        )));
    }
    if n_max >= 2 && c.len() < n_max {
        return Err(Error::Precondition(format!(
            "r_polys needs c[1..={}], got {} entries",
            n_max - 1,
            c.len()
        )));
    }
    let mut r = vec![CPoly::one()];
    if n_max == 0 {
        return Ok(r);
    }
    let linear = |tm: f64| {
        CPoly::new(vec![Complex64::new(1.0, -tm), Complex64::new(1.0, tm)])
    };
    r.push(linear(t[1]));
    for m in 2..=n_max {
        let next = linear(t[m])
            .mul(&r[m - 1])
            .sub(&r[m - 2].mul_z().scale(Complex64::new(4.0 * c[m - 1], 0.0)));
        r.push(next);
    }
    Ok(r)
}

/// The product 𝒯ₙ₋₁ = Π_{j<n} (1 − ratio·α̃ⱼ) / (1 − Re(ratio·α̃ⱼ)) with the
/// ratio held fixed across factors.
pub fn scaling_t(tilde_fam: &OpucFamily, n: usize, ratio: Complex64) -> Result<Complex64> {
    if n > tilde_fam.alpha.len() {
        return Err(Error::Precondition(format!(
            "scaling_t needs alpha[0..{n}], family provides {}",
            tilde_fam.alpha.len()
        )));
    }
    let mut prod = Complex64::new(1.0, 0.0);
    for j in 0..n {
        let x = ratio * tilde_fam.alpha[j];
        let denom = 1.0 - x.re;
        if denom.abs() < DEGENERATE_DENOM_TOL {
            return Err(Error::DegenerateData(format!(
                "scaling factor j = {j} has zero denominator 1 - Re(ratio alpha)"
            )));
        }
        prod *= (Complex64::new(1.0, 0.0) - x) / denom;
    }
    Ok(prod)
}

/// Outcome of the dual construction of the Rₙ.
#[derive(Debug, Clone)]
pub struct RConsistencyReport {
    /// Max coefficient deviation between Rₙ from the recurrence and
    /// 𝒯ₙ₋₁·ℒₙ(z;1) over n <= N.
    pub max_dev: f64,
    pub degenerate: bool,
    pub violations: Vec<String>,
}

/// Builds Rₙ two ways, from the chain recurrence and as 𝒯ₙ₋₁·ℒₙ(z;1) with
/// ℒ from the companion family, and reports the worst coefficient gap. The
/// scaling is accumulated factor by factor, each factor using its own ratio
/// Φ̃ⱼ(1)/Φ̃*ⱼ(1), which is what makes the two constructions agree.
pub fn verify_r_consistency(
    base: &OpucFamily,
    a: &[Complex64],
    tilde_fam: &OpucFamily,
    n_chain: usize,
) -> Result<RConsistencyReport> {
    if n_chain > tilde_fam.n_max {
        return Err(Error::Precondition(format!(
            "verify_r_consistency needs the companion family up to degree {n_chain}"
        )));
    }
    let chain = chain_data(base, a, tilde_fam, n_chain)?;

    let mut scaling = Complex64::new(1.0, 0.0);
    let mut max_dev = 0.0_f64;
    for n in 0..=n_chain {
        let l_n = if n == 0 {
            CPoly::one()
        } else {
            monic_l(tilde_fam, n, Complex64::new(1.0, 0.0))?
        };
        let dev = chain.r[n]
            .sub(&l_n.scale(scaling))
            .coeffs()
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max);
        max_dev = max_dev.max(dev);
        if n < n_chain {
            let star_at_1 = tilde_fam.phi_star[n].eval(Complex64::new(1.0, 0.0));
            if star_at_1.norm() < DEGENERATE_DENOM_TOL {
                return Err(Error::DegenerateData(format!(
                    "companion phi_star[{n}](1) = 0: the scaling ratio is undefined"
                )));
            }
            let ratio = tilde_fam.phi[n].eval(Complex64::new(1.0, 0.0)) / star_at_1;
            let x = ratio * tilde_fam.alpha[n];
            let denom = 1.0 - x.re;
            if denom.abs() < DEGENERATE_DENOM_TOL {
                return Err(Error::DegenerateData(format!(
                    "scaling factor {n} has zero denominator 1 - Re(ratio alpha)"
                )));
            }
            scaling *= (Complex64::new(1.0, 0.0) - x) / denom;
        }
    }
    Ok(RConsistencyReport {
        max_dev,
        degenerate: chain.degenerate,
        violations: chain.violations,
    })
}

/// Checks the kernel identity
/// 𝕂ₙ(z,ζ) = conj(Φₙ₊₁(ζ))·Φᵖₙ₊₁(z;ζ) / (‖Φₙ₊₁‖²·ζ̄·(z−ζ))
/// over the shared 16-point grid (points within 10⁻³ of ζ are skipped) and
/// returns the max relative deviation.
pub fn popuc_kernel_identity(fam: &OpucFamily, n: usize, zeta: Complex64) -> Result<f64> {
    require_on_circle(zeta, "popuc_kernel_identity")?;
    if n + 1 > fam.n_max {
        return Err(Error::Precondition(format!(
            "popuc_kernel_identity needs degree {} but the family stops at {}",
            n + 1,
            fam.n_max
        )));
    }
    let pp = popuc_poly(fam, n + 1, zeta)?;
    let front = fam.phi[n + 1].eval(zeta).conj() / (fam.norm_sq[n + 1] * zeta.conj());
    let mut max_dev = 0.0_f64;
    for z in kernels::eval_grid_16() {
        if (z - zeta).norm() < 1e-3 {
            continue;
        }
        let lhs = kernels::cd_kernel(fam, n, z, zeta, Method::Sum)?;
        let rhs = front * pp.eval(z) / (z - zeta);
        max_dev = max_dev.max((lhs - rhs).norm() / lhs.norm().max(1.0));
    }
    Ok(max_dev)
}
