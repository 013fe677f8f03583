//! Unit-circle measures dμ = w(θ)dθ, their trigonometric moments by the
//! uniform trapezoid rule, and polynomial inner products over the moments.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cpoly::CPoly;
use crate::{Error, Result};

/// Default trapezoid node count; spectrally exact for the built-in weights.
pub const DEFAULT_QUAD_N: usize = 1 << 12;

/// Node count used when a pole parameter sits within 0.1 of the circle.
pub const ESCALATED_QUAD_N: usize = 1 << 16;

/// Pole modulus beyond which quadrature escalates.
const POLE_ESCALATION_THRESHOLD: f64 = 0.9;

/// Weight callback for [`MeasureSpec::Custom`]; must be reentrant.
pub type WeightFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Declarative positive measure on the unit circle, dμ = w(θ)dθ on [0, 2π).
///
/// `|dz|` measures are w = 1 conventions; normalized ones carry the 1/(2π).
#[derive(Clone)]
pub enum MeasureSpec {
    /// w = 1 (the arc-length measure |dz|), or w = 1/(2π) when normalized.
    Lebesgue { normalized: bool },
    /// w(θ) = 1/|e^{iθ} − a|², |a| < 1.
    BernsteinSzego { a: Complex64 },
    /// w(θ) = |e^{iθ} − γ|²/(2π).
    ChristoffelLebesgue { gamma: Complex64 },
    /// w(θ) = K·|e^{iθ} − β̄|² / (|e^{iθ} − χ₁|²·|e^{iθ} − χ₂|²),
    /// K > 0, 0 < |β| ≤ 1, |χᵢ| < 1.
    RationalMarcellan {
        k: f64,
        beta: Complex64,
        chi1: Complex64,
        chi2: Complex64,
    },
    /// w(θ) = K / (|e^{iθ} − χ₁|²·|e^{iθ} − χ₂|²).
    TildeRational {
        k: f64,
        chi1: Complex64,
        chi2: Complex64,
    },
    /// Arbitrary nonnegative weight; the callback must be reentrant.
    Custom { label: String, weight: WeightFn },
}

impl std::fmt::Debug for MeasureSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MeasureSpec::Lebesgue { normalized } => {
                f.debug_struct("Lebesgue").field("normalized", normalized).finish()
            }
            MeasureSpec::BernsteinSzego { a } => {
                f.debug_struct("BernsteinSzego").field("a", a).finish()
            }
            MeasureSpec::ChristoffelLebesgue { gamma } => {
                f.debug_struct("ChristoffelLebesgue").field("gamma", gamma).finish()
            }
            MeasureSpec::RationalMarcellan { k, beta, chi1, chi2 } => f
                .debug_struct("RationalMarcellan")
                .field("k", k)
                .field("beta", beta)
                .field("chi1", chi1)
                .field("chi2", chi2)
                .finish(),
            MeasureSpec::TildeRational { k, chi1, chi2 } => f
                .debug_struct("TildeRational")
                .field("k", k)
                .field("chi1", chi1)
                .field("chi2", chi2)
                .finish(),
            MeasureSpec::Custom { label, .. } => {
                f.debug_struct("Custom").field("label", label).finish()
            }
        }
    }
}

impl MeasureSpec {
    /// Validates the parameter domain constraints of the variant.
    pub fn validate(&self) -> Result<()> {
        let inside = |c: &Complex64, name: &str| {
            if c.norm() < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidMeasure(format!(
                    "{name} must satisfy |{name}| < 1, got modulus {}",
                    c.norm()
                )))
            }
        };
        match self {
            MeasureSpec::Lebesgue { .. } | MeasureSpec::Custom { .. } => Ok(()),
            MeasureSpec::BernsteinSzego { a } => inside(a, "a"),
            MeasureSpec::ChristoffelLebesgue { .. } => Ok(()),
            MeasureSpec::RationalMarcellan { k, beta, chi1, chi2 } => {
                if !(*k > 0.0) {
                    return Err(Error::InvalidMeasure(format!("K must be positive, got {k}")));
                }
                let bn = beta.norm();
                if !(bn > 0.0 && bn <= 1.0) {
                    return Err(Error::InvalidMeasure(format!(
                        "beta must satisfy 0 < |beta| <= 1, got modulus {bn}"
                    )));
                }
                inside(chi1, "chi1")?;
                inside(chi2, "chi2")
            }
            MeasureSpec::TildeRational { k, chi1, chi2 } => {
                if !(*k > 0.0) {
                    return Err(Error::InvalidMeasure(format!("K must be positive, got {k}")));
                }
                inside(chi1, "chi1")?;
                inside(chi2, "chi2")
            }
        }
    }

    /// Weight value w(θ).
    pub fn weight(&self, theta: f64) -> f64 {
        let e = Complex64::from_polar(1.0, theta);
        match self {
            MeasureSpec::Lebesgue { normalized } => {
                if *normalized {
                    1.0 / TAU
                } else {
                    1.0
                }
            }
            MeasureSpec::BernsteinSzego { a } => 1.0 / (e - a).norm_sqr(),
            MeasureSpec::ChristoffelLebesgue { gamma } => (e - gamma).norm_sqr() / TAU,
            MeasureSpec::RationalMarcellan { k, beta, chi1, chi2 } => {
                k * (e - beta.conj()).norm_sqr()
                    / ((e - chi1).norm_sqr() * (e - chi2).norm_sqr())
            }
            MeasureSpec::TildeRational { k, chi1, chi2 } => {
                k / ((e - chi1).norm_sqr() * (e - chi2).norm_sqr())
            }
            MeasureSpec::Custom { weight, .. } => weight(theta),
        }
    }

    /// Quadrature node count: 2^12, escalated to 2^16 when a pole parameter
    /// (a, χᵢ) has modulus above 0.9 so the weight peaks near the circle.
    pub fn default_quad_n(&self) -> usize {
        let near = |c: &Complex64| c.norm() > POLE_ESCALATION_THRESHOLD;
        let escalate = match self {
            MeasureSpec::BernsteinSzego { a } => near(a),
            MeasureSpec::RationalMarcellan { chi1, chi2, .. }
            | MeasureSpec::TildeRational { chi1, chi2, .. } => near(chi1) || near(chi2),
            _ => false,
        };
        if escalate {
            ESCALATED_QUAD_N
        } else {
            DEFAULT_QUAD_N
        }
    }

    /// Short name used in labels and CLI output.
    pub fn label(&self) -> String {
        match self {
            MeasureSpec::Lebesgue { normalized: true } => "lebesgue-norm".into(),
            MeasureSpec::Lebesgue { normalized: false } => "lebesgue".into(),
            MeasureSpec::BernsteinSzego { .. } => "bernstein-szego".into(),
            MeasureSpec::ChristoffelLebesgue { .. } => "christoffel-lebesgue".into(),
            MeasureSpec::RationalMarcellan { .. } => "rational-marcellan".into(),
            MeasureSpec::TildeRational { .. } => "tilde-rational".into(),
            MeasureSpec::Custom { label, .. } => label.clone(),
        }
    }
}

/// Serializable shape of [`MeasureSpec`]; complex parameters are [re, im].
#[derive(Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
enum SpecRepr {
    Lebesgue {
        normalized: bool,
    },
    BernsteinSzego {
        a: [f64; 2],
    },
    ChristoffelLebesgue {
        gamma: [f64; 2],
    },
    RationalMarcellan {
        k: f64,
        beta: [f64; 2],
        chi1: [f64; 2],
        chi2: [f64; 2],
    },
    TildeRational {
        k: f64,
        chi1: [f64; 2],
        chi2: [f64; 2],
    },
    Custom {
        label: String,
    },
}

fn pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

fn unpair(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl Serialize for MeasureSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            MeasureSpec::Lebesgue { normalized } => SpecRepr::Lebesgue { normalized: *normalized },
            MeasureSpec::BernsteinSzego { a } => SpecRepr::BernsteinSzego { a: pair(*a) },
            MeasureSpec::ChristoffelLebesgue { gamma } => {
                SpecRepr::ChristoffelLebesgue { gamma: pair(*gamma) }
            }
            MeasureSpec::RationalMarcellan { k, beta, chi1, chi2 } => SpecRepr::RationalMarcellan {
                k: *k,
                beta: pair(*beta),
                chi1: pair(*chi1),
                chi2: pair(*chi2),
            },
            MeasureSpec::TildeRational { k, chi1, chi2 } => SpecRepr::TildeRational {
                k: *k,
                chi1: pair(*chi1),
                chi2: pair(*chi2),
            },
            MeasureSpec::Custom { label, .. } => SpecRepr::Custom { label: label.clone() },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MeasureSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SpecRepr::deserialize(d)?;
        Ok(match repr {
            SpecRepr::Lebesgue { normalized } => MeasureSpec::Lebesgue { normalized },
            SpecRepr::BernsteinSzego { a } => MeasureSpec::BernsteinSzego { a: unpair(a) },
            SpecRepr::ChristoffelLebesgue { gamma } => {
                MeasureSpec::ChristoffelLebesgue { gamma: unpair(gamma) }
            }
            SpecRepr::RationalMarcellan { k, beta, chi1, chi2 } => MeasureSpec::RationalMarcellan {
                k,
                beta: unpair(beta),
                chi1: unpair(chi1),
                chi2: unpair(chi2),
            },
            SpecRepr::TildeRational { k, chi1, chi2 } => MeasureSpec::TildeRational {
                k,
                chi1: unpair(chi1),
                chi2: unpair(chi2),
            },
            SpecRepr::Custom { label } => {
                // A weight callback cannot round-trip through JSON; refusing
                // beats silently substituting a unit weight.
                return Err(serde::de::Error::custom(format!(
                    "custom measure '{label}' cannot be deserialized: weight callback not representable"
                )));
            }
        })
    }
}

/// Trigonometric moments m_k = ∫ e^{−ikθ} w(θ) dθ for |k| ≤ kmax.
///
/// Only k ≥ 0 is stored; m_{−k} = conj(m_k) holds exactly by construction.
#[derive(Debug, Clone)]
pub struct MomentTable {
    kmax: usize,
    quad_n: usize,
    m: Vec<Complex64>,
}

impl MomentTable {
    #[inline]
    pub fn kmax(&self) -> usize {
        self.kmax
    }

    #[inline]
    pub fn quad_n(&self) -> usize {
        self.quad_n
    }

    /// m_k for any |k| ≤ kmax; negative indices use Hermitian symmetry.
    pub fn moment(&self, k: i64) -> Result<Complex64> {
        let idx = k.unsigned_abs() as usize;
        if idx > self.kmax {
            return Err(Error::MomentRange { kmax: self.kmax, need: idx });
        }
        Ok(if k >= 0 { self.m[idx] } else { self.m[idx].conj() })
    }

    /// Total mass m₀ of the measure.
    pub fn total_mass(&self) -> f64 {
        self.m[0].re
    }

    /// ⟨p, q⟩_μ = Σ_{j,k} p_j · conj(q_k) · m_{k−j}.
    pub fn inner(&self, p: &CPoly, q: &CPoly) -> Result<Complex64> {
        let need = p.degree().unwrap_or(0).max(q.degree().unwrap_or(0));
        if need > self.kmax {
            return Err(Error::MomentRange { kmax: self.kmax, need });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &pj) in p.coeffs().iter().enumerate() {
            for (k, &qk) in q.coeffs().iter().enumerate() {
                acc += pj * qk.conj() * self.moment(k as i64 - j as i64)?;
            }
        }
        Ok(acc)
    }

    /// Squared norm ‖p‖²_μ (real part of ⟨p, p⟩).
    pub fn norm_sq(&self, p: &CPoly) -> Result<f64> {
        Ok(self.inner(p, p)?.re)
    }
}

/// Computes the moment table by the quad_n-point uniform trapezoid rule.
///
/// Requires quad_n ≥ 4·kmax and quad_n a power of two. The weight is checked
/// for nonnegativity and finiteness at every node.
pub fn moments(spec: &MeasureSpec, kmax: usize, quad_n: usize) -> Result<MomentTable> {
    spec.validate()?;
    if !quad_n.is_power_of_two() {
        return Err(Error::InvalidMeasure(format!(
            "quadrature node count must be a power of two, got {quad_n}"
        )));
    }
    if quad_n < 4 * kmax.max(1) {
        return Err(Error::InvalidMeasure(format!(
            "quadrature node count {quad_n} is below 4·kmax = {}",
            4 * kmax
        )));
    }
    let h = TAU / quad_n as f64;
    let mut w = Vec::with_capacity(quad_n);
    for j in 0..quad_n {
        let theta = h * j as f64;
        let wj = spec.weight(theta);
        if !wj.is_finite() || wj < 0.0 {
            return Err(Error::InvalidMeasure(format!(
                "weight at theta = {theta:.6} is {wj} (must be finite and nonnegative)"
            )));
        }
        w.push(wj);
    }
    let mut m = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &wj) in w.iter().enumerate() {
            let theta = h * j as f64;
            acc += Complex64::from_polar(wj, -(k as f64) * theta);
        }
        m.push(acc * h);
    }
    if !(m[0].re > 0.0) {
        return Err(Error::InvalidMeasure(format!(
            "total mass must be positive, got {}",
            m[0].re
        )));
    }
    m[0] = Complex64::new(m[0].re, 0.0);
    Ok(MomentTable { kmax, quad_n, m })
}

/// Moments at the measure's own default quadrature size.
pub fn moments_auto(spec: &MeasureSpec, kmax: usize) -> Result<MomentTable> {
    let n = spec.default_quad_n().max((4 * kmax.max(1)).next_power_of_two());
    moments(spec, kmax, n)
}

/// Description of an a-sequence rule, used to resolve companion measures.
#[derive(Debug, Clone, PartialEq)]
pub enum ASeqHint {
    /// aₙ ≡ c.
    Constant(Complex64),
    /// aₙ = (n/(n+1))·factor.
    RatioTimes(Complex64),
    /// a-sequence from the family's own ratio rule.
    Marcellan,
}

/// Resolves the companion measure μ̃ for a (measure, a-rule) pair.
///
/// The companion depends on the chosen aₙ sequence, which the measure alone
/// does not determine; hence the hint.
pub fn companion_tilde(spec: &MeasureSpec, hint: &ASeqHint) -> Result<MeasureSpec> {
    let close = |x: Complex64, y: Complex64| (x - y).norm() < 1e-12;
    match (spec, hint) {
        (MeasureSpec::Lebesgue { .. }, ASeqHint::Constant(a)) if a.norm() < 1.0 => {
            Ok(MeasureSpec::BernsteinSzego { a: *a })
        }
        (MeasureSpec::ChristoffelLebesgue { gamma }, ASeqHint::RatioTimes(f))
            if close(*f, *gamma)
                && (close(*gamma, Complex64::new(1.0, 0.0))
                    || close(*gamma, Complex64::new(0.0, 1.0))) =>
        {
            Ok(MeasureSpec::Lebesgue { normalized: true })
        }
        (MeasureSpec::ChristoffelLebesgue { gamma }, ASeqHint::Marcellan)
            if close(*gamma, Complex64::new(1.0, 0.0))
                || close(*gamma, Complex64::new(0.0, 1.0)) =>
        {
            Ok(MeasureSpec::Lebesgue { normalized: true })
        }
        (MeasureSpec::RationalMarcellan { k, chi1, chi2, .. }, ASeqHint::Marcellan) => {
            Ok(MeasureSpec::TildeRational { k: *k, chi1: *chi1, chi2: *chi2 })
        }
        (MeasureSpec::BernsteinSzego { a }, ASeqHint::Constant(c)) if close(*c, -a.conj()) => {
            Ok(MeasureSpec::TildeRational { k: 1.0, chi1: *a, chi2: -a.conj() })
        }
        _ => Err(Error::NoCompanion(format!(
            "no companion known for {} with hint {hint:?}",
            spec.label()
        ))),
    }
}

