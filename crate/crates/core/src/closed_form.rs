//! Explicit Sinkhorn limits.
//!
//! For a positive `2 x 2` matrix `(a b; c d)` the limit is `(alpha beta; beta alpha)`
//! with `alpha = sqrt(ad) / (sqrt(ad) + sqrt(bc))`, reached as `X A Y` for
//! `X = diag(sqrt(cd), sqrt(ab))` and `Y = diag(1/(a sqrt(cd) + c sqrt(ab)), 1/(b sqrt(cd) + d sqrt(ab)))`.
//! The limit is rational exactly when `ad/bc` is the square of a rational.
//!
//! The bordered family is the all-ones `n x n` matrix with `K` in the corner.
//! Its limit is `D A D` with `D = diag(x1, x2, ..., x2)` and has the shape
//! `(alpha beta..; beta gamma..; ..)` where `alpha` is the root in `(0, 1)` of
//! `(K-1) a^2 - (2K+n-2) a + K = 0`.

use num_traits::{One, Signed};

use crate::error::{Result, ScalingError};
use crate::exact::{self, Rational};
use crate::matrix::{DiagonalScaling, PositiveMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct Limit2x2 {
    pub alpha: f64,
    pub beta: f64,
    pub left: DiagonalScaling<f64>,
    pub right: DiagonalScaling<f64>,
    /// Set when the inputs were exact rationals.
    pub is_rational: Option<bool>,
}

impl Limit2x2 {
    pub fn limit_matrix(&self) -> PositiveMatrix<f64> {
        two_by_two(self.alpha, self.beta)
    }
}

fn two_by_two<S: crate::scalar::Scalar>(alpha: S, beta: S) -> PositiveMatrix<S> {
    PositiveMatrix::from_row_major(2, 2, vec![alpha.clone(), beta.clone(), beta, alpha])
        .expect("alpha and beta are positive")
}

fn require_positive(values: &[f64], what: &'static str) -> Result<()> {
    if values.iter().all(|x| *x > 0.0 && x.is_finite()) {
        Ok(())
    } else {
        Err(ScalingError::NotPositive(what))
    }
}

pub fn limit_2x2(a: f64, b: f64, c: f64, d: f64) -> Result<Limit2x2> {
    require_positive(&[a, b, c, d], "every 2x2 entry")?;
    let (sad, sbc) = ((a * d).sqrt(), (b * c).sqrt());
    let (scd, sab) = ((c * d).sqrt(), (a * b).sqrt());
    let left = DiagonalScaling::new(vec![scd, sab])?;
    let right = DiagonalScaling::new(vec![1.0 / (a * scd + c * sab), 1.0 / (b * scd + d * sab)])?;
    Ok(Limit2x2 {
        alpha: sad / (sad + sbc),
        beta: sbc / (sad + sbc),
        left,
        right,
        is_rational: None,
    })
}

/// Floating-point limit of an exact matrix, tagged with its rationality.
pub fn limit_2x2_of_exact(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Result<Limit2x2> {
    let rational = matches!(limit_2x2_exact(a, b, c, d)?, ExactLimit2x2::Rational { .. });
    let f = |x: &Rational| crate::scalar::Scalar::to_f64(x);
    let mut out = limit_2x2(f(a), f(b), f(c), f(d))?;
    out.is_rational = Some(rational);
    Ok(out)
}

/// Exact limit entries when `ad/bc` is a rational square.
///
/// The scalings `X`, `Y` are not returned: `sqrt(cd)` and `sqrt(ab)` are
/// usually irrational even when `alpha` is rational.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactLimit2x2 {
    Rational {
        /// `ad / bc`.
        ratio: Rational,
        /// `sqrt(ad / bc)`.
        root: Rational,
        alpha: Rational,
        beta: Rational,
    },
    Irrational {
        ratio: Rational,
    },
}

impl ExactLimit2x2 {
    pub fn ratio(&self) -> &Rational {
        match self {
            ExactLimit2x2::Rational { ratio, .. } | ExactLimit2x2::Irrational { ratio } => ratio,
        }
    }

    pub fn limit_matrix(&self) -> Option<PositiveMatrix<Rational>> {
        match self {
            ExactLimit2x2::Rational { alpha, beta, .. } => Some(two_by_two(alpha.clone(), beta.clone())),
            ExactLimit2x2::Irrational { .. } => None,
        }
    }
}

pub fn limit_2x2_exact(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Result<ExactLimit2x2> {
    if ![a, b, c, d].iter().all(|x| x.is_positive()) {
        return Err(ScalingError::NotPositive("every 2x2 entry"));
    }
    let ratio = (a * d) / (b * c);
    Ok(match exact::rational_sqrt(&ratio)? {
        Some(root) => {
            let denom = &root + Rational::one();
            ExactLimit2x2::Rational {
                alpha: &root / &denom,
                beta: Rational::one() / &denom,
                root,
                ratio,
            }
        }
        None => ExactLimit2x2::Irrational { ratio },
    })
}

/// Limit of the symmetric matrix `(a b; b d)` as `D A D`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricLimit2x2 {
    pub alpha: f64,
    pub beta: f64,
    /// `D = lambda * diag(sqrt(bd), sqrt(ab))`.
    pub scaler: DiagonalScaling<f64>,
    /// `(abd + b^2 sqrt(ad))^(-1/2)`.
    pub lambda: f64,
}

impl SymmetricLimit2x2 {
    pub fn limit_matrix(&self) -> PositiveMatrix<f64> {
        two_by_two(self.alpha, self.beta)
    }
}

pub fn limit_2x2_symmetric(a: f64, b: f64, d: f64) -> Result<SymmetricLimit2x2> {
    require_positive(&[a, b, d], "every symmetric 2x2 entry")?;
    let sad = (a * d).sqrt();
    let lambda = 1.0 / (a * b * d + b * b * sad).sqrt();
    let scaler = DiagonalScaling::new(vec![lambda * (b * d).sqrt(), lambda * (a * b).sqrt()])?;
    Ok(SymmetricLimit2x2 {
        alpha: sad / (sad + b),
        beta: b / (sad + b),
        scaler,
        lambda,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BorderedLimit {
    pub n: usize,
    pub k: f64,
    /// Corner entry of the limit.
    pub alpha: f64,
    /// Border entries.
    pub beta: f64,
    /// Interior entries.
    pub gamma: f64,
    pub x1: f64,
    /// Shared value of `x2 = ... = xn`.
    pub x2: f64,
}

impl BorderedLimit {
    pub fn scaler(&self) -> DiagonalScaling<f64> {
        let mut diag = vec![self.x2; self.n];
        diag[0] = self.x1;
        DiagonalScaling::new(diag).expect("x1, x2 are positive")
    }

    pub fn limit_matrix(&self) -> PositiveMatrix<f64> {
        bordered_shape(self.n, self.alpha, self.beta, self.gamma)
    }

    /// `(K-1) alpha^2 - (2K+n-2) alpha + K`.
    pub fn quadratic_residual(&self) -> f64 {
        let (k, n) = (self.k, self.n as f64);
        (k - 1.0) * self.alpha * self.alpha - (2.0 * k + n - 2.0) * self.alpha + k
    }
}

fn bordered_shape<S: crate::scalar::Scalar>(
    n: usize,
    corner: S,
    border: S,
    interior: S,
) -> PositiveMatrix<S> {
    let data = (0..n * n)
        .map(|idx| match (idx / n, idx % n) {
            (0, 0) => corner.clone(),
            (0, _) | (_, 0) => border.clone(),
            _ => interior.clone(),
        })
        .collect();
    PositiveMatrix::from_row_major(n, n, data).expect("bordered entries are positive")
}

/// The all-ones `n x n` matrix with `K` at `(1,1)`.
pub fn bordered_matrix(n: usize, k: f64) -> Result<PositiveMatrix<f64>> {
    if n < 1 {
        return Err(ScalingError::Empty);
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(ScalingError::NotPositive("K"));
    }
    Ok(bordered_shape(n, k, 1.0, 1.0))
}

pub fn bordered_limit(n: usize, k: f64) -> Result<BorderedLimit> {
    if n < 3 {
        return Err(ScalingError::InvalidConfig(format!(
            "bordered family needs n >= 3, got {n}"
        )));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(ScalingError::NotPositive("K"));
    }
    let nf = n as f64;
    if k == 1.0 {
        let flat = 1.0 / nf;
        return Ok(BorderedLimit {
            n,
            k,
            alpha: flat,
            beta: flat,
            gamma: flat,
            x1: flat.sqrt(),
            x2: flat.sqrt(),
        });
    }
    let alpha = {
        // Smaller root of the quadratic, written as 2K / (larger root's
        // numerator) so it stays accurate as K approaches 1.
        let disc = (4.0 * (nf - 1.0) * k + (nf - 2.0) * (nf - 2.0)).sqrt();
        2.0 * k / (2.0 * (k - 1.0) + nf + disc)
    };
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(ScalingError::Internal(format!(
            "bordered root alpha = {alpha} outside (0, 1) for n = {n}, K = {k}"
        )));
    }
    let beta = (1.0 - alpha) / (nf - 1.0);
    let gamma = (nf - 2.0 + alpha) / ((nf - 1.0) * (nf - 1.0));
    Ok(BorderedLimit {
        n,
        k,
        alpha,
        beta,
        gamma,
        x1: (alpha / k).sqrt(),
        x2: gamma.sqrt(),
    })
}

/// Exact bordered limit for `n = 3` and triangular `K = (k^2 + k) / 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularBorderedLimit {
    pub k: u64,
    pub big_k: u64,
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
}

impl TriangularBorderedLimit {
    pub fn limit_matrix(&self) -> PositiveMatrix<Rational> {
        bordered_shape(3, self.alpha.clone(), self.beta.clone(), self.gamma.clone())
    }
}

pub fn bordered_limit_triangular(k: u64) -> Result<TriangularBorderedLimit> {
    if k < 2 {
        return Err(ScalingError::InvalidConfig(
            "k = 1 gives K = 1, the flat matrix with limit 1/3 everywhere; use k >= 2".into(),
        ));
    }
    let k = i64::try_from(k).map_err(|_| ScalingError::InvalidConfig("k too large".into()))?;
    let denom = k * k + k - 2;
    Ok(TriangularBorderedLimit {
        k: k as u64,
        big_k: exact::triangular(k as u64),
        alpha: exact::ratio(k * k - k, denom),
        beta: exact::ratio(k - 1, denom),
        gamma: exact::ratio(k * k - 1, 2 * denom),
    })
}
