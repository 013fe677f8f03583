//! Dense complex polynomials in ascending coefficient order, plus the
//! simultaneous-iteration root finder used by every zero table.

use num_complex::Complex64;

use crate::{Error, Result};

/// Maximum Aberth-Ehrlich sweeps before the residual contract decides.
const MAX_ROOT_ITERATIONS: usize = 500;

/// Stop sweeping once the largest Newton correction falls below this.
const CORRECTION_TOL: f64 = 1e-13;

/// A returned root r must satisfy |p(r)| / (1 + |lead|·max(1,|r|)^deg) below
/// this bound; clustered roots stall the correction criterion near sqrt(eps)
/// while their residuals keep certifying, so the residual is the contract.
const RESIDUAL_TOL: f64 = 1e-10;

/// Low-order coefficients below this fraction of the largest coefficient are
/// treated as exact zeros before iterating, yielding exact roots at z = 0.
/// Coefficient noise of ~1 ulp on a z^5 cluster otherwise splatters the five
/// roots to |z| ~ 7e-4; a genuine root of magnitude 1e-3 keeps |c0| five
/// orders of magnitude above this threshold, so nothing real is absorbed.
const ZERO_COEFF_REL_TOL: f64 = 1e-13;

/// Irrational rotation (radians) applied to the initial root guesses so they
/// never align with symmetric zero configurations.
const GUESS_ROTATION: f64 = std::f64::consts::SQRT_2;

/// Dense polynomial with complex coefficients, `coeffs[k]` multiplying z^k.
///
/// The zero polynomial is the empty coefficient list; otherwise the last
/// coefficient is nonzero (trailing exact zeros are trimmed by every
/// constructor and arithmetic operation). Values are immutable.
#[derive(Debug, Clone, PartialEq)]
pub struct CPoly {
    coeffs: Vec<Complex64>,
}

impl CPoly {
    /// Builds a polynomial, trimming trailing coefficients that are exactly zero.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            coeffs.pop();
        }
        CPoly { coeffs }
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        CPoly { coeffs: Vec::new() }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        CPoly {
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// The monomial z^k.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        CPoly { coeffs }
    }

    /// Builds from real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of z^k, zero beyond the stored range.
    #[inline]
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation; the zero polynomial evaluates to 0.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// The reversed polynomial at degree `n`: coefficient k of the result is
    /// conj(coeffs[n−k]), i.e. z^n · conj(p(1/z̄)). Requires deg(p) ≤ n.
    pub fn reverse(&self, n: usize) -> Result<CPoly> {
        if let Some(d) = self.degree() {
            if d > n {
                return Err(Error::InvalidDegree {
                    got: d,
                    requirement: format!("reverse at degree {n} needs deg <= {n}"),
                });
            }
        }
        let coeffs = (0..=n).map(|k| self.coeff(n - k).conj()).collect();
        Ok(CPoly::new(coeffs))
    }

    pub fn derivative(&self) -> CPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        CPoly::new(coeffs)
    }

    pub fn add(&self, other: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        CPoly::new(coeffs)
    }

    pub fn sub(&self, other: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        CPoly::new(coeffs)
    }

    pub fn scale(&self, c: Complex64) -> CPoly {
        CPoly::new(self.coeffs.iter().map(|&x| x * c).collect())
    }

    /// Multiplication by z (coefficient shift).
    pub fn mul_z(&self) -> CPoly {
        if self.is_zero() {
            return CPoly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(&self.coeffs);
        CPoly::new(coeffs)
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        if self.is_zero() || other.is_zero() {
            return CPoly::zero();
        }
        let mut coeffs =
            vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (j, &a) in self.coeffs.iter().enumerate() {
            for (k, &b) in other.coeffs.iter().enumerate() {
                coeffs[j + k] += a * b;
            }
        }
        CPoly::new(coeffs)
    }

    /// Euclidean division: returns (quotient, remainder) with
    /// p = q·quot + rem and deg(rem) < deg(q).
    pub fn divmod(&self, q: &CPoly) -> Result<(CPoly, CPoly)> {
        let qd = q.degree().ok_or(Error::ZeroDivisor)?;
        let qlead = q.coeffs[qd];
        let mut rem = self.coeffs.clone();
        if rem.len() <= qd {
            return Ok((CPoly::zero(), self.clone()));
        }
        let qn = rem.len() - qd - 1;
        let mut quot = vec![Complex64::new(0.0, 0.0); qn + 1];
        for j in (0..=qn).rev() {
            let f = rem[j + qd] / qlead;
            quot[j] = f;
            for (k, &qc) in q.coeffs.iter().enumerate() {
                rem[j + k] -= f * qc;
            }
        }
        rem.truncate(qd);
        Ok((CPoly::new(quot), CPoly::new(rem)))
    }

    /// All `deg(p)` roots, with multiplicity, sorted by (re, im) ascending.
    ///
    /// Low-order coefficients below `1e-13·max|c|` are factored out first and
    /// reported as exact zeros; the rest go through Aberth-Ehrlich
    /// simultaneous iteration. Every returned root satisfies the normalized
    /// residual bound `|p(r)| / (1 + |lead|·max(1,|r|)^deg) < 1e-10`, else a
    /// `NonConvergence` error carries the best iterates and their residuals.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let deg = self.degree().unwrap_or(0);
        if deg < 1 {
            return Err(Error::InvalidDegree {
                got: deg,
                requirement: "roots requires degree >= 1".into(),
            });
        }
        let max_mag = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cutoff = ZERO_COEFF_REL_TOL * max_mag;
        let at_origin = self
            .coeffs
            .iter()
            .take_while(|c| c.norm() < cutoff)
            .count()
            .min(deg);
        let mut roots = vec![Complex64::new(0.0, 0.0); at_origin];

        let reduced: Vec<Complex64> = self.coeffs[at_origin..].to_vec();
        let m = reduced.len() - 1;
        if m > 0 {
            let lead = reduced[m];
            let monic: Vec<Complex64> = reduced.iter().map(|&c| c / lead).collect();
            roots.extend(aberth(&monic)?);
        }

        // Residual certification against the original polynomial.
        let lead_norm = self.coeffs[deg].norm();
        let mut failures: Vec<(Complex64, f64)> = Vec::new();
        for &r in &roots {
            let scale = 1.0 + lead_norm * r.norm().max(1.0).powi(deg as i32);
            let res = self.eval(r).norm() / scale;
            if !(res < RESIDUAL_TOL) {
                failures.push((r, res));
            }
        }
        if !failures.is_empty() {
            let worst = failures.iter().map(|f| f.1).fold(0.0, f64::max);
            return Err(Error::NonConvergence {
                iterations: MAX_ROOT_ITERATIONS,
                residual: worst,
                best: roots
                    .iter()
                    .map(|&r| {
                        let scale = 1.0 + lead_norm * r.norm().max(1.0).powi(deg as i32);
                        (r, self.eval(r).norm() / scale)
                    })
                    .collect(),
            });
        }

        sort_roots(&mut roots);
        Ok(roots)
    }
}

/// Deterministic total order on certified roots: real part, then imaginary.
///
/// Parts are quantized at 10⁻⁹ before comparison so that a conjugate pair
/// whose real parts differ by rounding noise keeps the imaginary-part
/// tie-break, independent of the last few bits of the computation.
pub fn sort_roots(roots: &mut [Complex64]) {
    let q = |x: f64| (x * 1e9).round();
    roots.sort_by(|a, b| {
        q(a.re)
            .partial_cmp(&q(b.re))
            .unwrap()
            .then(q(a.im).partial_cmp(&q(b.im)).unwrap())
    });
}

/// Aberth-Ehrlich simultaneous iteration on a monic coefficient vector with
/// nonzero constant term. Guesses start on a circle of radius
/// 1 + max|c_k| rotated by a fixed irrational angle.
fn aberth(monic: &[Complex64]) -> Result<Vec<Complex64>> {
    let m = monic.len() - 1;
    let radius = 1.0 + monic[..m].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / m as f64 + GUESS_ROTATION;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    let eval_both = |x: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in monic.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };

    for _ in 0..MAX_ROOT_ITERATIONS {
        let mut max_correction = 0.0_f64;
        for i in 0..m {
            let (p, dp) = eval_both(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 0.0 {
                p / dp
            } else {
                // Derivative vanished at the iterate; nudge off the stationary point.
                Complex64::new(1e-6, 1e-6)
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..m {
                if j != i {
                    repulsion += 1.0 / (z[i] - z[j]);
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let w = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            z[i] -= w;
            max_correction = max_correction.max(w.norm());
        }
        if max_correction < CORRECTION_TOL {
            break;
        }
    }
    Ok(z)
}
