//! Configurable-precision real and complex scalars.
//!
//! `Real` wraps an arbitrary-precision binary float together with the
//! precision (in bits) it was produced at. Every arithmetic operation
//! rounds to the larger of the operand precisions, so the precision of
//! an input propagates through all derived quantities. The minimum
//! supported precision is 53 bits; the backing library rounds the
//! working precision up to its word size, which only tightens the
//! roundoff bound `u <= 2^(1-p)`.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

/// Minimum precision in bits accepted anywhere in this crate.
pub const MIN_PRECISION: u32 = 53;

const RM: RoundingMode = RoundingMode::ToEven;

/// Arbitrary-precision real scalar carrying its working precision.
#[derive(Clone, Debug)]
pub struct Real {
    x: BigFloat,
    prec: u32,
}

impl Real {
    pub fn from_f64(v: f64, prec: u32) -> Self {
        let prec = prec.max(MIN_PRECISION);
        Real {
            x: BigFloat::from_f64(v, prec as usize),
            prec,
        }
    }

    /// Exact conversion; `i64` always fits in a 64-bit mantissa word.
    pub fn from_i64(v: i64, prec: u32) -> Self {
        let prec = prec.max(MIN_PRECISION);
        let neg = v < 0;
        let mag = v.unsigned_abs();
        let mut x = BigFloat::from_word(mag, prec as usize);
        if neg {
            x.inv_sign();
        }
        Real { x, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Real::from_i64(0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Real::from_i64(1, prec)
    }

    pub fn pi(prec: u32) -> Self {
        let prec = prec.max(MIN_PRECISION);
        let mut cc = consts();
        Real {
            x: cc.pi(prec as usize, RM),
            prec,
        }
    }

    /// `2^e` computed exactly (binary powers are representable).
    pub fn two_pow(e: i32, prec: u32) -> Self {
        let base = if e >= 0 { 2.0 } else { 0.5 };
        let r = Real::from_f64(base, prec);
        let p = r.x.powi(e.unsigned_abs() as usize, prec.max(MIN_PRECISION) as usize, RM);
        Real { x: p, prec: prec.max(MIN_PRECISION) }
    }

    /// Unit roundoff bound `2^(1-p)` at this value's precision.
    pub fn unit_roundoff(prec: u32) -> Self {
        Real::two_pow(1 - prec.max(MIN_PRECISION) as i32, prec)
    }

    /// Parse a decimal string (plain or scientific notation).
    pub fn parse(s: &str, prec: u32) -> Option<Self> {
        let prec = prec.max(MIN_PRECISION);
        let mut cc = consts();
        let x = BigFloat::parse(s, Radix::Dec, prec as usize, RM, &mut cc);
        if x.is_nan() && !s.trim().eq_ignore_ascii_case("nan") {
            return None;
        }
        Some(Real { x, prec })
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    fn join(&self, rhs: &Real) -> u32 {
        self.prec.max(rhs.prec)
    }

    pub fn add(&self, rhs: &Real) -> Real {
        let p = self.join(rhs);
        Real { x: self.x.add(&rhs.x, p as usize, RM), prec: p }
    }

    pub fn sub(&self, rhs: &Real) -> Real {
        let p = self.join(rhs);
        Real { x: self.x.sub(&rhs.x, p as usize, RM), prec: p }
    }

    pub fn mul(&self, rhs: &Real) -> Real {
        let p = self.join(rhs);
        Real { x: self.x.mul(&rhs.x, p as usize, RM), prec: p }
    }

    pub fn div(&self, rhs: &Real) -> Real {
        let p = self.join(rhs);
        Real { x: self.x.div(&rhs.x, p as usize, RM), prec: p }
    }

    pub fn recip(&self) -> Real {
        Real { x: self.x.reciprocal(self.prec as usize, RM), prec: self.prec }
    }

    pub fn neg(&self) -> Real {
        Real { x: self.x.neg(), prec: self.prec }
    }

    pub fn abs(&self) -> Real {
        Real { x: self.x.abs(), prec: self.prec }
    }

    pub fn sqrt(&self) -> Real {
        Real { x: self.x.sqrt(self.prec as usize, RM), prec: self.prec }
    }

    pub fn mul_i64(&self, k: i64) -> Real {
        self.mul(&Real::from_i64(k, self.prec))
    }

    pub fn div_i64(&self, k: i64) -> Real {
        self.div(&Real::from_i64(k, self.prec))
    }

    pub fn sin(&self) -> Real {
        let mut cc = consts();
        Real { x: self.x.sin(self.prec as usize, RM, &mut cc), prec: self.prec }
    }

    pub fn cos(&self) -> Real {
        let mut cc = consts();
        Real { x: self.x.cos(self.prec as usize, RM, &mut cc), prec: self.prec }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.x.is_negative() && !self.x.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.x.is_positive() && !self.x.is_zero()
    }

    pub fn max(&self, rhs: &Real) -> Real {
        if self >= rhs { self.clone() } else { rhs.clone() }
    }

    /// Nearest `f64`; values outside the `f64` range saturate.
    pub fn to_f64(&self) -> f64 {
        // The Display form is decimal scientific notation, which f64's
        // parser rounds correctly.
        format!("{}", self.x).parse::<f64>().unwrap_or(f64::NAN)
    }

    /// Decimal scientific-notation string with the digit count native to
    /// the stored precision.
    pub fn to_sci_string(&self) -> String {
        format!("{}", self.x)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        matches!(self.x.cmp(&other.x), Some(0))
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.x.cmp(&other.x).map(|s| s.cmp(&0))
    }
}

impl std::fmt::Display for Real {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.x)
    }
}

fn consts() -> Consts {
    Consts::new().expect("constants cache allocation")
}

/// Complex scalar over [`Real`].
#[derive(Clone, Debug)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::new(Real::zero(prec), Real::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Complex::new(Real::one(prec), Real::zero(prec))
    }

    pub fn from_re(re: Real) -> Self {
        let prec = re.precision();
        Complex::new(re, Real::zero(prec))
    }

    pub fn from_im(im: Real) -> Self {
        let prec = im.precision();
        Complex::new(Real::zero(prec), im)
    }

    pub fn precision(&self) -> u32 {
        self.re.precision().max(self.im.precision())
    }

    pub fn add(&self, rhs: &Complex) -> Complex {
        Complex::new(self.re.add(&rhs.re), self.im.add(&rhs.im))
    }

    pub fn sub(&self, rhs: &Complex) -> Complex {
        Complex::new(self.re.sub(&rhs.re), self.im.sub(&rhs.im))
    }

    pub fn mul(&self, rhs: &Complex) -> Complex {
        let re = self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im));
        let im = self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re));
        Complex::new(re, im)
    }

    pub fn div(&self, rhs: &Complex) -> Complex {
        let den = rhs.norm_sqr();
        let num = self.mul(&rhs.conj());
        Complex::new(num.re.div(&den), num.im.div(&den))
    }

    pub fn recip(&self) -> Complex {
        // Axis values invert componentwise; this keeps purely real or
        // purely imaginary chains free of spurious roundoff from the
        // generic conjugate formula.
        if self.im.is_zero() {
            return Complex::new(self.re.recip(), self.im.clone());
        }
        if self.re.is_zero() {
            return Complex::new(self.re.clone(), self.im.recip().neg());
        }
        Complex::one(self.precision()).div(self)
    }

    pub fn neg(&self) -> Complex {
        Complex::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Complex {
        Complex::new(self.re.clone(), self.im.neg())
    }

    pub fn scale(&self, s: &Real) -> Complex {
        Complex::new(self.re.mul(s), self.im.mul(s))
    }

    pub fn norm_sqr(&self) -> Real {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl std::fmt::Display for Complex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.re, self.im)
    }
}

/// `(cos, sin)` of `2*pi*t/n` for `t = 0..n`, the primitive roots table a
/// circulant transform of size `n` indexes by `(j*m) mod n`.
pub fn unit_circle(n: usize, prec: u32) -> Vec<(Real, Real)> {
    let prec = prec.max(MIN_PRECISION);
    let two_pi = Real::pi(prec).mul_i64(2);
    (0..n)
        .map(|t| {
            let angle = two_pi.mul_i64(t as i64).div_i64(n as i64);
            (angle.cos(), angle.sin())
        })
        .collect()
}

/// `(cos, sin)` of `l*pi/d` for `l = 1..=count`.
pub fn half_turn_angles(count: usize, d: i64, prec: u32) -> Vec<(Real, Real)> {
    let prec = prec.max(MIN_PRECISION);
    let pi = Real::pi(prec);
    (1..=count)
        .map(|l| {
            let angle = pi.mul_i64(l as i64).div_i64(d);
            (angle.cos(), angle.sin())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_round_trip() {
        let a = Real::from_f64(1.5, 53);
        let b = Real::from_f64(0.25, 53);
        assert_eq!(a.add(&b).to_f64(), 1.75);
        assert_eq!(a.sub(&b).to_f64(), 1.25);
        assert_eq!(a.mul(&b).to_f64(), 0.375);
        assert_eq!(a.div(&b).to_f64(), 6.0);
        assert_eq!(a.neg().to_f64(), -1.5);
    }

    #[test]
    fn precision_joins_upward() {
        let a = Real::from_f64(1.0, 53);
        let b = Real::from_f64(1.0, 200);
        assert_eq!(a.add(&b).precision(), 200);
    }

    #[test]
    fn integer_conversion_is_exact() {
        let v = Real::from_i64(-123456789012345, 53);
        assert_eq!(v.to_f64(), -123456789012345.0);
    }

    #[test]
    fn pi_matches_f64() {
        let pi = Real::pi(53);
        assert!((pi.to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn two_pow_handles_deep_exponents() {
        let tiny = Real::two_pow(-199, 200);
        // 2^-199 underflows nothing at 200 bits and is exactly representable.
        assert!(tiny.is_positive());
        let doubled = tiny.mul(&Real::two_pow(199, 200));
        assert_eq!(doubled.to_f64(), 1.0);
    }

    #[test]
    fn parse_scientific() {
        let t = Real::parse("1e-30", 200).unwrap();
        assert!((t.to_f64() - 1e-30).abs() < 1e-45);
        assert!(Real::parse("not a number", 53).is_none());
    }

    #[test]
    fn complex_division() {
        let p = 53;
        let a = Complex::new(Real::from_f64(1.0, p), Real::from_f64(2.0, p));
        let b = Complex::new(Real::from_f64(3.0, p), Real::from_f64(-1.0, p));
        let q = a.div(&b);
        // (1+2i)/(3-i) = (1+7i)/10
        assert!((q.re.to_f64() - 0.1).abs() < 1e-15);
        assert!((q.im.to_f64() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn unit_circle_closes() {
        let table = unit_circle(8, 53);
        assert!((table[2].0.to_f64()).abs() < 1e-15); // cos(pi/2)
        assert!((table[2].1.to_f64() - 1.0).abs() < 1e-15); // sin(pi/2)
        assert!((table[4].0.to_f64() + 1.0).abs() < 1e-15); // cos(pi)
    }
}
