//! Complex polynomial and rational-function arithmetic in the shifted
//! coordinate `x_eps = x + i*eps`.
//!
//! Everything downstream (potential construction, superpotential algebra,
//! gauge factors) is built on these two types. Values are immutable after
//! construction and all operations are pure.

use num_complex::Complex64;
use thiserror::Error;

/// Hard cap on polynomial degree; rejects pathological growth early.
pub const DEGREE_CAP: usize = 64;

/// Relative truncation threshold used inside the approximate Euclidean gcd.
pub const GCD_TRUNCATION: f64 = 1e-12;

/// Relative tolerance below which a denominator value counts as a pole.
pub const POLE_TOL: f64 = 1e-12;

/// Relative coefficient tolerance for rational-expression equality.
pub const EQ_TOL: f64 = 1e-10;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("denominator vanishes at x = {x} (|den| = {denom_mag:.3e})")]
    PoleAtPoint { x: f64, denom_mag: f64 },
    #[error("polynomial degree {degree} exceeds cap {DEGREE_CAP}")]
    DegreeCapExceeded { degree: usize },
    #[error("non-finite coefficient")]
    NonFiniteCoefficient,
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("operands carry different shifts ({left} vs {right})")]
    ShiftMismatch { left: f64, right: f64 },
    #[error("{value} is not a non-negative half-integer")]
    NotHalfInteger { value: f64 },
}

/// Non-negative half-integer (spin-like label), stored exactly as `2j`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt {
    twice: u32,
}

impl HalfInt {
    pub fn from_twice(twice: u32) -> Self {
        HalfInt { twice }
    }

    /// Accepts values like 0.0, 0.5, 1.0, ... (2j must be integral).
    pub fn try_from_f64(value: f64) -> Result<Self, AlgebraError> {
        let doubled = 2.0 * value;
        if !value.is_finite() || value < 0.0 || (doubled - doubled.round()).abs() > 1e-9 {
            return Err(AlgebraError::NotHalfInteger { value });
        }
        Ok(HalfInt {
            twice: doubled.round() as u32,
        })
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// Dimension of the associated polynomial module, `2j + 1`.
    pub fn dim(self) -> usize {
        self.twice as usize + 1
    }
}

impl std::fmt::Display for HalfInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Dense complex polynomial in the shifted variable, low degree first.
///
/// The `shift` records which line `x + i*shift` the variable lives on; the
/// coefficients themselves are taken in the abstract variable, so the same
/// value can be evaluated on any contour via [`ShiftedPolynomial::eval`].
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftedPolynomial {
    coeffs: Vec<Complex64>,
    shift: f64,
}

impl ShiftedPolynomial {
    pub fn new(coeffs: Vec<Complex64>, shift: f64) -> Result<Self, AlgebraError> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) || !shift.is_finite() {
            return Err(AlgebraError::NonFiniteCoefficient);
        }
        let mut p = ShiftedPolynomial { coeffs, shift };
        p.trim();
        if p.degree() > DEGREE_CAP {
            return Err(AlgebraError::DegreeCapExceeded { degree: p.degree() });
        }
        Ok(p)
    }

    pub fn from_real(coeffs: &[f64], shift: f64) -> Result<Self, AlgebraError> {
        Self::new(
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
            shift,
        )
    }

    pub fn zero(shift: f64) -> Self {
        ShiftedPolynomial {
            coeffs: vec![],
            shift,
        }
    }

    pub fn constant(c: Complex64, shift: f64) -> Self {
        let mut p = ShiftedPolynomial {
            coeffs: vec![c],
            shift,
        };
        p.trim();
        p
    }

    pub fn one(shift: f64) -> Self {
        Self::constant(Complex64::new(1.0, 0.0), shift)
    }

    /// The variable itself, `x_eps`.
    pub fn variable(shift: f64) -> Self {
        ShiftedPolynomial {
            coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            shift,
        }
    }

    /// `c * x_eps^k`.
    pub fn monomial(c: Complex64, k: usize, shift: f64) -> Self {
        assert!(k <= DEGREE_CAP, "monomial degree {k} exceeds cap");
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        let mut p = ShiftedPolynomial { coeffs, shift };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while let Some(last) = self.coeffs.last() {
            if last.norm() == 0.0 {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    /// Drops leading coefficients smaller than `tol` relative to the largest
    /// coefficient magnitude.
    pub fn trim_relative(&self, tol: f64) -> Self {
        let scale = self.max_coeff_mag();
        if scale == 0.0 {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        while let Some(last) = coeffs.last() {
            if last.norm() <= tol * scale {
                coeffs.pop();
            } else {
                break;
            }
        }
        ShiftedPolynomial {
            coeffs,
            shift: self.shift,
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs
            .last()
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn max_coeff_mag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation at an arbitrary complex point of the abstract variable.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Evaluation as a function of the plain coordinate: `p(x + i*shift)`.
    pub fn eval_at(&self, x: f64) -> Complex64 {
        self.eval(Complex64::new(x, self.shift))
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.shift);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as f64)
            .collect();
        let mut p = ShiftedPolynomial {
            coeffs,
            shift: self.shift,
        };
        p.trim();
        p
    }

    /// Termwise antiderivative with zero integration constant.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / (k + 1) as f64);
        }
        let mut p = ShiftedPolynomial {
            coeffs,
            shift: self.shift,
        };
        p.trim();
        p
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut p = ShiftedPolynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            shift: self.shift,
        };
        p.trim();
        p
    }

    pub fn monic(&self) -> Self {
        let lead = self.leading();
        if lead.norm() == 0.0 {
            return self.clone();
        }
        self.scale(lead.inv())
    }

    /// Substitutes `t -> t + delta`, i.e. returns `r` with `r(t) = p(t + delta)`.
    fn shift_variable(&self, delta: Complex64) -> Self {
        let mut result = vec![Complex64::new(0.0, 0.0); self.coeffs.len().max(1)];
        // power = (t + delta)^k, built incrementally
        let mut power = vec![Complex64::new(1.0, 0.0)];
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                let mut next = vec![Complex64::new(0.0, 0.0); power.len() + 1];
                for (m, p) in power.iter().enumerate() {
                    next[m] += p * delta;
                    next[m + 1] += p;
                }
                power = next;
            }
            for (m, p) in power.iter().enumerate() {
                result[m] += c * p;
            }
        }
        let mut p = ShiftedPolynomial {
            coeffs: result,
            shift: self.shift,
        };
        p.trim();
        p
    }

    /// Expands the shifted variable out: returns the plain-`x` polynomial
    /// equal to `p(x + i*shift)` pointwise (shift 0 on the result).
    pub fn to_plain(&self) -> Self {
        let mut p = self.shift_variable(Complex64::new(0.0, self.shift));
        p.shift = 0.0;
        p
    }

    /// Inverse of [`ShiftedPolynomial::to_plain`]: given `p` in the plain
    /// coordinate, returns `q` with `q(x_eps) == p(x)` identically.
    pub fn recompose_shift(plain: &ShiftedPolynomial, eps: f64) -> Self {
        let mut q = plain.shift_variable(Complex64::new(0.0, -eps));
        q.shift = eps;
        q
    }

    /// Long division `self = q * div + r`; `div` must be nonzero.
    pub fn divmod(&self, div: &ShiftedPolynomial) -> (Self, Self) {
        assert!(!div.is_zero(), "division by the zero polynomial");
        self.check_shift(div);
        if self.is_zero() || self.degree() < div.degree() {
            return (Self::zero(self.shift), self.clone());
        }
        let lead = div.leading();
        let mut rem = self.coeffs.clone();
        let dn = div.degree();
        let qn = self.degree() - dn;
        let mut quot = vec![Complex64::new(0.0, 0.0); qn + 1];
        for k in (0..=qn).rev() {
            let factor = rem[k + dn] / lead;
            quot[k] = factor;
            for (m, d) in div.coeffs.iter().enumerate() {
                rem[k + m] -= factor * d;
            }
            rem[k + dn] = Complex64::new(0.0, 0.0);
        }
        let mut q = ShiftedPolynomial {
            coeffs: quot,
            shift: self.shift,
        };
        q.trim();
        let mut r = ShiftedPolynomial {
            coeffs: rem,
            shift: self.shift,
        };
        r.trim();
        (q, r)
    }

    pub fn approx_eq(&self, other: &ShiftedPolynomial, tol: f64) -> bool {
        let scale = self.max_coeff_mag().max(other.max_coeff_mag()).max(1e-300);
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|k| (self.coeff(k) - other.coeff(k)).norm() <= tol * scale)
    }

    fn check_shift(&self, other: &ShiftedPolynomial) {
        assert!(
            self.shift == other.shift || self.is_zero() || other.is_zero(),
            "shift mismatch: {} vs {}",
            self.shift,
            other.shift
        );
    }

    fn joined_shift(&self, other: &ShiftedPolynomial) -> f64 {
        if self.is_zero() && !other.is_zero() {
            other.shift
        } else {
            self.shift
        }
    }
}

impl std::ops::Add for &ShiftedPolynomial {
    type Output = ShiftedPolynomial;
    fn add(self, rhs: &ShiftedPolynomial) -> ShiftedPolynomial {
        self.check_shift(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        let mut p = ShiftedPolynomial {
            coeffs,
            shift: self.joined_shift(rhs),
        };
        p.trim();
        p
    }
}

impl std::ops::Sub for &ShiftedPolynomial {
    type Output = ShiftedPolynomial;
    fn sub(self, rhs: &ShiftedPolynomial) -> ShiftedPolynomial {
        self.check_shift(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        let mut p = ShiftedPolynomial {
            coeffs,
            shift: self.joined_shift(rhs),
        };
        p.trim();
        p
    }
}

impl std::ops::Mul for &ShiftedPolynomial {
    type Output = ShiftedPolynomial;
    fn mul(self, rhs: &ShiftedPolynomial) -> ShiftedPolynomial {
        self.check_shift(rhs);
        if self.is_zero() || rhs.is_zero() {
            return ShiftedPolynomial::zero(self.joined_shift(rhs));
        }
        let deg = self.degree() + rhs.degree();
        assert!(
            deg <= DEGREE_CAP,
            "product degree {deg} exceeds cap {DEGREE_CAP}"
        );
        let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut p = ShiftedPolynomial {
            coeffs,
            shift: self.joined_shift(rhs),
        };
        p.trim();
        p
    }
}

impl std::ops::Neg for &ShiftedPolynomial {
    type Output = ShiftedPolynomial;
    fn neg(self) -> ShiftedPolynomial {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Approximate Euclidean gcd with relative remainder truncation.
///
/// Returns a monic polynomial. The truncation threshold is taken relative to
/// the largest coefficient magnitude of the current remainder, which keeps
/// near-cancellations from masquerading as genuine common factors.
pub fn poly_gcd(a: &ShiftedPolynomial, b: &ShiftedPolynomial) -> ShiftedPolynomial {
    let shift = a.joined_shift(b);
    let mut x = a.trim_relative(GCD_TRUNCATION);
    let mut y = b.trim_relative(GCD_TRUNCATION);
    if x.degree() < y.degree() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_zero() {
        let ym = y.monic();
        let (_, r) = x.divmod(&ym);
        // A remainder that is negligible relative to the dividend is noise
        // left over from an exact division; treat it as zero.
        let r = if r.max_coeff_mag() <= GCD_TRUNCATION * x.max_coeff_mag() {
            ShiftedPolynomial::zero(shift)
        } else {
            r.trim_relative(GCD_TRUNCATION)
        };
        x = ym;
        y = r;
    }
    if x.is_zero() {
        ShiftedPolynomial::one(shift)
    } else {
        x.monic()
    }
}

/// Normalized ratio of two shifted polynomials with matching shift.
///
/// Invariants: monic denominator, trivial gcd (up to the module tolerances),
/// canonical `0/1` for the zero expression.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalExpression {
    num: ShiftedPolynomial,
    den: ShiftedPolynomial,
}

impl RationalExpression {
    pub fn new(
        num: ShiftedPolynomial,
        den: ShiftedPolynomial,
    ) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        if !num.is_zero() && !den.is_zero() && num.shift() != den.shift() {
            return Err(AlgebraError::ShiftMismatch {
                left: num.shift(),
                right: den.shift(),
            });
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: ShiftedPolynomial) -> Self {
        let shift = p.shift();
        Self::normalized(p, ShiftedPolynomial::one(shift))
    }

    pub fn zero(shift: f64) -> Self {
        RationalExpression {
            num: ShiftedPolynomial::zero(shift),
            den: ShiftedPolynomial::one(shift),
        }
    }

    pub fn constant(c: Complex64, shift: f64) -> Self {
        Self::from_poly(ShiftedPolynomial::constant(c, shift))
    }

    fn normalized(num: ShiftedPolynomial, den: ShiftedPolynomial) -> Self {
        let shift = num.joined_shift(&den);
        if num.is_zero() {
            return Self::zero(shift);
        }
        let g = poly_gcd(&num, &den);
        let (num, den) = if g.degree() > 0 {
            (num.divmod(&g).0, den.divmod(&g).0)
        } else {
            (num, den)
        };
        let den = den.trim_relative(GCD_TRUNCATION);
        let num = num.trim_relative(GCD_TRUNCATION);
        let lead = den.leading();
        let num = num.scale(lead.inv());
        let den = den.scale(lead.inv());
        RationalExpression { num, den }
    }

    /// Re-runs the normalization pipeline (idempotent on normalized values).
    pub fn normalize(&self) -> Self {
        Self::normalized(self.num.clone(), self.den.clone())
    }

    pub fn num(&self) -> &ShiftedPolynomial {
        &self.num
    }

    pub fn den(&self) -> &ShiftedPolynomial {
        &self.den
    }

    pub fn shift(&self) -> f64 {
        self.num.joined_shift(&self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Evaluates at an arbitrary point of the abstract variable, reporting a
    /// pole when the denominator drops below the relative tolerance.
    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64, AlgebraError> {
        let d = self.den.eval(z);
        let scale = self.den.max_coeff_mag().max(1e-300);
        if d.norm() < POLE_TOL * scale {
            return Err(AlgebraError::PoleAtPoint {
                x: z.re,
                denom_mag: d.norm(),
            });
        }
        Ok(self.num.eval(z) / d)
    }

    /// Evaluates as a function of the plain coordinate, `x_eps = x + i*shift`.
    pub fn evaluate(&self, x: f64) -> Result<Complex64, AlgebraError> {
        self.eval_complex(Complex64::new(x, self.shift()))
    }

    /// Quotient-rule derivative, renormalized.
    pub fn differentiate(&self) -> Self {
        let dn = self.num.derivative();
        let dd = self.den.derivative();
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        let den = &self.den * &self.den;
        Self::normalized(num, den)
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree() == 0 && self.den.degree() == 0
    }

    pub fn constant_value(&self) -> Option<Complex64> {
        if self.is_zero() {
            Some(Complex64::new(0.0, 0.0))
        } else if self.is_constant() {
            Some(self.num.coeff(0) / self.den.coeff(0))
        } else {
            None
        }
    }

    /// Coefficient-level equality after normalization, relative tolerance.
    pub fn approx_eq(&self, other: &RationalExpression, tol: f64) -> bool {
        let a = self.normalize();
        let b = other.normalize();
        a.num.approx_eq(&b.num, tol) && a.den.approx_eq(&b.den, tol)
    }
}

impl std::ops::Add for &RationalExpression {
    type Output = RationalExpression;
    fn add(self, rhs: &RationalExpression) -> RationalExpression {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        RationalExpression::normalized(num, den)
    }
}

impl std::ops::Sub for &RationalExpression {
    type Output = RationalExpression;
    fn sub(self, rhs: &RationalExpression) -> RationalExpression {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        RationalExpression::normalized(num, den)
    }
}

impl std::ops::Mul for &RationalExpression {
    type Output = RationalExpression;
    fn mul(self, rhs: &RationalExpression) -> RationalExpression {
        let num = &self.num * &rhs.num;
        let den = &self.den * &rhs.den;
        RationalExpression::normalized(num, den)
    }
}

impl std::ops::Div for &RationalExpression {
    type Output = RationalExpression;
    fn div(self, rhs: &RationalExpression) -> RationalExpression {
        assert!(!rhs.is_zero(), "division by zero rational expression");
        let num = &self.num * &rhs.den;
        let den = &self.den * &rhs.num;
        RationalExpression::normalized(num, den)
    }
}

impl std::ops::Neg for &RationalExpression {
    type Output = RationalExpression;
    fn neg(self) -> RationalExpression {
        RationalExpression {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(coeffs: &[(f64, f64)], shift: f64) -> ShiftedPolynomial {
        ShiftedPolynomial::new(coeffs.iter().map(|&(r, i)| c(r, i)).collect(), shift).unwrap()
    }

    /// Independent binomial-expansion oracle: expands p(x + i*eps) in plain x
    /// without going through shift_variable.
    fn expand_oracle(p: &ShiftedPolynomial, eps: f64) -> Vec<Complex64> {
        let mut out = vec![c(0.0, 0.0); p.coeffs().len().max(1)];
        for (k, &ck) in p.coeffs().iter().enumerate() {
            // (x + i eps)^k = sum_m C(k,m) x^m (i eps)^{k-m}
            let mut binom = 1.0;
            for m in (0..=k).rev() {
                let pow = c(0.0, eps).powu((k - m) as u32);
                out[m] += ck * pow * binom;
                if m > 0 {
                    binom = binom * m as f64 / (k - m + 1) as f64;
                }
            }
        }
        out
    }

    #[test]
    fn evaluate_square_of_pure_shift() {
        // (x_eps)^2 at x = 0, eps = 1: (i)^2 = -1
        let e = RationalExpression::from_poly(poly(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)], 1.0));
        let v = e.evaluate(0.0).unwrap();
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn evaluate_reports_pole() {
        let e = RationalExpression::new(
            ShiftedPolynomial::one(0.0),
            ShiftedPolynomial::variable(0.0),
        )
        .unwrap();
        match e.evaluate(0.0) {
            Err(AlgebraError::PoleAtPoint { .. }) => {}
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn evaluate_inverse_square_barrier() {
        // 2 / x_eps^2 at eps = 1, x = 1: 2/(1+i)^2 = -i
        let e = RationalExpression::new(
            ShiftedPolynomial::constant(c(2.0, 0.0), 1.0),
            poly(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)], 1.0),
        )
        .unwrap();
        let v = e.evaluate(1.0).unwrap();
        assert!((v - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn differentiate_power_rule() {
        let e = RationalExpression::from_poly(ShiftedPolynomial::monomial(c(1.0, 0.0), 3, 0.5));
        let d = e.differentiate();
        let expected =
            RationalExpression::from_poly(ShiftedPolynomial::monomial(c(3.0, 0.0), 2, 0.5));
        assert!(d.approx_eq(&expected, 1e-14));
    }

    #[test]
    fn differentiate_inverse() {
        let e = RationalExpression::new(
            ShiftedPolynomial::one(0.0),
            ShiftedPolynomial::variable(0.0),
        )
        .unwrap();
        let d = e.differentiate();
        let expected = RationalExpression::new(
            ShiftedPolynomial::constant(c(-1.0, 0.0), 0.0),
            ShiftedPolynomial::monomial(c(1.0, 0.0), 2, 0.0),
        )
        .unwrap();
        assert!(d.approx_eq(&expected, 1e-14));
    }

    #[test]
    fn differentiate_constant_is_zero() {
        let e = RationalExpression::constant(c(5.0, 0.0), 0.0);
        assert!(e.differentiate().is_zero());
    }

    #[test]
    fn normalize_cancels_common_factor() {
        // (x^2 - 1)/(x - 1) -> x + 1
        let num = poly(&[(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)], 0.0);
        let den = poly(&[(-1.0, 0.0), (1.0, 0.0)], 0.0);
        let e = RationalExpression::new(num, den).unwrap();
        let expected = RationalExpression::from_poly(poly(&[(1.0, 0.0), (1.0, 0.0)], 0.0));
        assert!(e.approx_eq(&expected, 1e-12));
        assert_eq!(e.den().degree(), 0);
    }

    #[test]
    fn normalize_makes_denominator_monic() {
        // (2x)/2 -> x
        let e = RationalExpression::new(
            poly(&[(0.0, 0.0), (2.0, 0.0)], 0.0),
            poly(&[(2.0, 0.0)], 0.0),
        )
        .unwrap();
        assert_eq!(e.den().coeffs(), &[c(1.0, 0.0)]);
        assert_eq!(e.num().coeffs(), &[c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn normalize_idempotent_on_normal_input() {
        let e = RationalExpression::new(
            poly(&[(1.0, 2.0), (0.0, 0.0), (3.0, 0.0)], 0.0),
            poly(&[(1.0, 0.0), (1.0, 0.0)], 0.0),
        )
        .unwrap();
        let again = e.normalize();
        assert_eq!(e, again);
    }

    #[test]
    fn recompose_shift_simple_square() {
        // p = x^2 + 2ix - 1 with eps = 1 -> x_eps^2
        let p = poly(&[(-1.0, 0.0), (0.0, 2.0), (1.0, 0.0)], 0.0);
        let q = ShiftedPolynomial::recompose_shift(&p, 1.0);
        let expected = ShiftedPolynomial::monomial(c(1.0, 0.0), 2, 1.0);
        assert!(q.approx_eq(&expected, 1e-14));
    }

    #[test]
    fn recompose_shift_identity_at_zero_eps() {
        let p = ShiftedPolynomial::variable(0.0);
        let q = ShiftedPolynomial::recompose_shift(&p, 0.0);
        assert!(q.approx_eq(&ShiftedPolynomial::variable(0.0), 1e-15));
    }

    #[test]
    fn recompose_shift_quartic_binomial_oracle() {
        // x^4 + 4ix^3 - 6x^2 - 4ix + 1 with eps = 1 must recompose to x_eps^4;
        // the plain-x input is frozen from the binomial oracle.
        let target = ShiftedPolynomial::monomial(c(1.0, 0.0), 4, 1.0);
        let plain = expand_oracle(&target, 1.0);
        assert!((plain[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((plain[1] - c(0.0, -4.0)).norm() < 1e-15);
        assert!((plain[2] - c(-6.0, 0.0)).norm() < 1e-15);
        assert!((plain[3] - c(0.0, 4.0)).norm() < 1e-15);
        let p = poly(&[(1.0, 0.0), (0.0, -4.0), (-6.0, 0.0), (0.0, 4.0), (1.0, 0.0)], 0.0);
        let q = ShiftedPolynomial::recompose_shift(&p, 1.0);
        assert!(q.approx_eq(&target, 1e-13));
    }

    #[test]
    fn to_plain_matches_binomial_oracle() {
        let p = poly(&[(0.5, -1.0), (2.0, 0.25), (0.0, 1.0), (1.5, 0.0)], 0.7);
        let plain = p.to_plain();
        let oracle = expand_oracle(&p, 0.7);
        for (k, expect) in oracle.iter().enumerate() {
            assert!((plain.coeff(k) - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn half_int_parsing() {
        assert_eq!(HalfInt::try_from_f64(0.5).unwrap().twice(), 1);
        assert_eq!(HalfInt::try_from_f64(3.0).unwrap().dim(), 7);
        assert!(HalfInt::try_from_f64(0.3).is_err());
        assert!(HalfInt::try_from_f64(-0.5).is_err());
        assert_eq!(HalfInt::from_twice(3).to_string(), "3/2");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn recompose_round_trip(
            coeffs in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..11),
            eps in -2.0f64..2.0,
        ) {
            let p = poly(&coeffs.iter().map(|&(r, i)| (r, i)).collect::<Vec<_>>(), 0.0);
            let q = ShiftedPolynomial::recompose_shift(&p, eps);
            let back = q.to_plain();
            // relative to the intermediate coefficient scale: the binomial
            // recomposition amplifies degree-10 inputs by up to ~2^10 C(10,5)
            let scale = q.max_coeff_mag().max(p.max_coeff_mag()).max(1e-300);
            for k in 0..p.coeffs().len().max(back.coeffs().len()) {
                prop_assert!((back.coeff(k) - p.coeff(k)).norm() <= 1e-12 * scale);
            }
        }

        #[test]
        fn product_rule_holds(
            a in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..5),
            b in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..5),
            d in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..4),
        ) {
            let shift = 0.0;
            let f = RationalExpression::new(
                poly(&a, shift),
                &poly(&d, shift) + &ShiftedPolynomial::monomial(c(5.0, 0.0), d.len(), shift),
            ).unwrap();
            let g = RationalExpression::from_poly(poly(&b, shift));
            let fg = &f * &g;
            let lhs = fg.differentiate();
            let rhs = &(&f.differentiate() * &g) + &(&f * &g.differentiate());
            prop_assert!(lhs.approx_eq(&rhs, 1e-8));
        }

        #[test]
        fn normalize_idempotent_and_value_preserving(
            a in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..6),
            b in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..5),
            g in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..4),
        ) {
            let shift = 0.0;
            let gf = &poly(&g, shift) + &ShiftedPolynomial::monomial(c(3.0, 0.0), g.len(), shift);
            let num = &poly(&a, shift) * &gf;
            let den = &(&poly(&b, shift) + &ShiftedPolynomial::monomial(c(4.0, 0.0), b.len(), shift)) * &gf;
            let raw = RationalExpression { num, den };
            let normalized = raw.normalize();
            prop_assert_eq!(normalized.normalize(), normalized.clone());
            // evaluation preserved at non-pole points
            for k in 0..20 {
                let x = -3.0 + 6.0 * (k as f64) / 19.0 + 0.0137;
                if let (Ok(u), Ok(v)) = (raw.eval_complex(c(x, 0.33)), normalized.eval_complex(c(x, 0.33))) {
                    if u.norm() > 1e-8 {
                        prop_assert!((u - v).norm() <= 1e-10 * u.norm().max(1.0));
                    }
                }
            }
        }

        #[test]
        fn derivative_matches_finite_differences(
            a in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 2..6),
            b in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..4),
        ) {
            let f = RationalExpression::new(
                poly(&a, 0.4),
                &poly(&b, 0.4) + &ShiftedPolynomial::monomial(c(4.0, 0.0), b.len(), 0.4),
            ).unwrap();
            let df = f.differentiate();
            let h = 1e-5;
            for k in 0..7 {
                let x = -2.0 + 4.0 * (k as f64) / 6.0 + 0.0211;
                let (fp, fm) = match (f.evaluate(x + h), f.evaluate(x - h)) {
                    (Ok(p), Ok(m)) => (p, m),
                    _ => continue,
                };
                let Ok(exact) = df.evaluate(x) else { continue };
                let approx = (fp - fm) / (2.0 * h);
                if exact.norm() > 1e-3 {
                    prop_assert!((approx - exact).norm() <= 1e-6 * exact.norm().max(1.0));
                }
            }
        }
    }
}
