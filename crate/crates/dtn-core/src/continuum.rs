//! Fourier-multiplier model of the boundary map on the unit circle.
//!
//! On trigonometric polynomials the map multiplies mode `l` by `l`, so
//! its square multiplies by `l^2` — the same action as minus the second
//! derivative in the angular variable. The discrete bridge normalizes the
//! cycle spectrum by the grid spacing `h = 2 pi / n`, under which
//! `sqrt(L)/h` has eigenvalue `(n/pi) sin(pi m / n)` at mode `m`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Truncated trigonometric series `a_0 + sum_l a_l cos(l t) + b_l sin(l t)`.
///
/// `cosine` holds `a_0..a_M`; `sine` holds `b_1..b_M`.
#[derive(Clone, Debug)]
pub struct FourierFunction {
    cosine: Vec<Real>,
    sine: Vec<Real>,
}

impl FourierFunction {
    pub fn new(cosine: Vec<Real>, sine: Vec<Real>) -> Result<Self> {
        if cosine.is_empty() {
            return Err(Error::InvalidSize { n: 0, min: 1 });
        }
        if sine.len() + 1 != cosine.len() {
            return Err(Error::SizeMismatch { left: cosine.len(), right: sine.len() + 1 });
        }
        Ok(FourierFunction { cosine, sine })
    }

    /// Mode cutoff `M`.
    pub fn cutoff(&self) -> usize {
        self.cosine.len() - 1
    }

    pub fn cosine_coeffs(&self) -> &[Real] {
        &self.cosine
    }

    pub fn sine_coeffs(&self) -> &[Real] {
        &self.sine
    }

    pub fn precision(&self) -> u32 {
        self.cosine
            .iter()
            .chain(self.sine.iter())
            .map(Real::precision)
            .max()
            .unwrap_or(crate::scalar::MIN_PRECISION)
    }

    pub fn eval(&self, theta: &Real) -> Real {
        let prec = self.precision().max(theta.precision());
        let mut acc = self.cosine[0].clone();
        for l in 1..=self.cutoff() {
            let arg = theta.mul_i64(l as i64);
            acc = acc.add(&self.cosine[l].mul(&arg.cos()));
            acc = acc.add(&self.sine[l - 1].mul(&arg.sin()));
        }
        acc.add(&Real::zero(prec))
    }

    /// Multiply mode `l` by the supplied integer weight `w(l)`; the
    /// constant term maps to zero whenever `w(0) == 0`.
    fn mode_scaled(&self, weight: impl Fn(usize) -> i64) -> FourierFunction {
        let cosine = self
            .cosine
            .iter()
            .enumerate()
            .map(|(l, a)| a.mul_i64(weight(l)))
            .collect();
        let sine = self
            .sine
            .iter()
            .enumerate()
            .map(|(i, b)| b.mul_i64(weight(i + 1)))
            .collect();
        FourierFunction { cosine, sine }
    }

    /// Largest absolute coefficient difference against `rhs`.
    pub fn max_coeff_diff(&self, rhs: &FourierFunction) -> Result<Real> {
        if self.cutoff() != rhs.cutoff() {
            return Err(Error::SizeMismatch { left: self.cutoff(), right: rhs.cutoff() });
        }
        let prec = self.precision().max(rhs.precision());
        let mut acc = Real::zero(prec);
        for (a, b) in self.cosine.iter().zip(&rhs.cosine) {
            acc = acc.max(&a.sub(b).abs());
        }
        for (a, b) in self.sine.iter().zip(&rhs.sine) {
            acc = acc.max(&a.sub(b).abs());
        }
        Ok(acc)
    }
}

/// The boundary map: mode `l` is multiplied by `l`.
pub fn dtn_continuous(f: &FourierFunction) -> FourierFunction {
    f.mode_scaled(|l| l as i64)
}

/// Minus the second angular derivative: mode `l` is multiplied by `l^2`.
pub fn minus_second_derivative(f: &FourierFunction) -> FourierFunction {
    f.mode_scaled(|l| (l * l) as i64)
}

/// Max coefficient difference between applying the boundary map twice
/// and minus the second derivative. Identically zero in exact
/// arithmetic.
pub fn verify_continuum_identity(f: &FourierFunction) -> Result<Real> {
    let twice = dtn_continuous(&dtn_continuous(f));
    let second = minus_second_derivative(f);
    twice.max_coeff_diff(&second)
}

/// Discrete-to-continuous comparison at mode `m`: the normalized discrete
/// eigenvalue `(n/pi) sin(pi m / n)` (the cycle square-root spectrum
/// divided by the grid spacing `h = 2 pi / n`) and its relative error
/// against the continuous eigenvalue `m`.
pub fn discrete_vs_continuous(n: usize, m: usize, prec: u32) -> Result<(Real, Real)> {
    if m < 1 || 2 * m >= n {
        return Err(Error::ModeOutOfRange { m, n });
    }
    let pi = Real::pi(prec);
    let angle = pi.mul_i64(m as i64).div_i64(n as i64);
    let normalized = angle.sin().mul_i64(n as i64).div(&pi);
    let m_real = Real::from_i64(m as i64, prec);
    let rel_error = normalized.sub(&m_real).abs().div(&m_real);
    Ok((normalized, rel_error))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 53;

    fn single_sine(mode: usize, amp: f64, cutoff: usize) -> FourierFunction {
        let cosine = vec![Real::zero(P); cutoff + 1];
        let mut sine = vec![Real::zero(P); cutoff];
        sine[mode - 1] = Real::from_f64(amp, P);
        FourierFunction::new(cosine, sine).unwrap()
    }

    #[test]
    fn map_scales_single_mode() {
        let f = single_sine(3, 1.0, 4);
        let g = dtn_continuous(&f);
        assert_eq!(g.sine_coeffs()[2].to_f64(), 3.0);
        assert_eq!(g.sine_coeffs()[0].to_f64(), 0.0);
    }

    #[test]
    fn map_kills_constants() {
        let f = FourierFunction::new(vec![Real::one(P)], vec![]).unwrap();
        let g = dtn_continuous(&f);
        assert_eq!(g.cosine_coeffs()[0].to_f64(), 0.0);
    }

    #[test]
    fn map_is_linear_over_modes() {
        // 2 cos(t) + 5 sin(4t) -> 2 cos(t) + 20 sin(4t)
        let mut cosine = vec![Real::zero(P); 5];
        cosine[1] = Real::from_i64(2, P);
        let mut sine = vec![Real::zero(P); 4];
        sine[3] = Real::from_i64(5, P);
        let f = FourierFunction::new(cosine, sine).unwrap();
        let g = dtn_continuous(&f);
        assert_eq!(g.cosine_coeffs()[1].to_f64(), 2.0);
        assert_eq!(g.sine_coeffs()[3].to_f64(), 20.0);
    }

    #[test]
    fn second_derivative_scales_by_mode_squared() {
        let f = single_sine(3, 1.0, 3);
        let g = minus_second_derivative(&f);
        assert_eq!(g.sine_coeffs()[2].to_f64(), 9.0);

        // cos(2t) - sin(5t) -> 4 cos(2t) - 25 sin(5t)
        let mut cosine = vec![Real::zero(P); 6];
        cosine[2] = Real::one(P);
        let mut sine = vec![Real::zero(P); 5];
        sine[4] = Real::from_i64(-1, P);
        let f = FourierFunction::new(cosine, sine).unwrap();
        let g = minus_second_derivative(&f);
        assert_eq!(g.cosine_coeffs()[2].to_f64(), 4.0);
        assert_eq!(g.sine_coeffs()[4].to_f64(), -25.0);
    }

    #[test]
    fn identity_is_exact_on_basis_functions() {
        let f = single_sine(1, 1.0, 1);
        assert!(verify_continuum_identity(&f).unwrap().is_zero());
        let f = single_sine(7, -2.5, 9);
        assert!(verify_continuum_identity(&f).unwrap().is_zero());
    }

    #[test]
    fn pointwise_samples_match_coefficients() {
        // f(t) = 1 + 2 cos(t) + 3 sin(2t) at 64 equispaced angles.
        let mut cosine = vec![Real::zero(P); 3];
        cosine[0] = Real::one(P);
        cosine[1] = Real::from_i64(2, P);
        let mut sine = vec![Real::zero(P); 2];
        sine[1] = Real::from_i64(3, P);
        let f = FourierFunction::new(cosine, sine).unwrap();
        for i in 0..64 {
            let theta = Real::pi(P).mul_i64(2 * i).div_i64(64);
            let t = theta.to_f64();
            let expect = 1.0 + 2.0 * t.cos() + 3.0 * (2.0 * t).sin();
            assert!((f.eval(&theta).to_f64() - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn bridge_matches_frozen_values() {
        // (101/pi) sin(3 pi / 101) and the n^-2 error law.
        let (norm, rel) = discrete_vs_continuous(101, 3, P).unwrap();
        assert!((norm.to_f64() - 2.9956480847819245).abs() < 1e-12);
        assert!((rel.to_f64() - 1.4506384060251796e-3).abs() < 1e-12);

        let (_, rel_fine) = discrete_vs_continuous(1001, 3, P).unwrap();
        assert!((rel_fine.to_f64() - 1.4774776653857007e-5).abs() < 1e-12);
    }

    #[test]
    fn bridge_rejects_high_modes() {
        assert!(matches!(
            discrete_vs_continuous(10, 5, P),
            Err(Error::ModeOutOfRange { .. })
        ));
        assert!(matches!(
            discrete_vs_continuous(10, 0, P),
            Err(Error::ModeOutOfRange { .. })
        ));
    }

    #[test]
    fn high_modes_fall_below_the_line() {
        // Near m = n/2 the sine saturates and the normalized value sits
        // visibly below m.
        let (norm, _) = discrete_vs_continuous(100, 49, P).unwrap();
        assert!(norm.to_f64() < 49.0 * 0.7);
    }
}
