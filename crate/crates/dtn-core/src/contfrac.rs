//! The layered continued fraction `beta(lambda)` and its unit-value
//! identity at the imaginary evaluation points.
//!
//! With `theta = pi/(2k+1)` the coefficients are `c_l = -i cot(l theta)`
//! (equivalently `(w^l + w^{-l}) / (w^l - w^{-l})` for `w = e^{i theta}`)
//! and the evaluation points are `lambda_l = 2 i sin(l theta)`. The
//! fraction is stored innermost-first: `c[0]` is the deepest floor, so
//! evaluation runs bottom-up as `t <- c_1 lambda`, then
//! `t <- c_j lambda + 1/t`.
//!
//! Besides the direct sweep `|beta(lambda_l) - 1|`, the module builds the
//! rational form `beta = p/q` with single-parity polynomials, gathers
//! grid evidence that the zeros and poles of the fraction all lie on a
//! single line, and recovers the coefficients independently from the
//! unit-value interpolation conditions.

use crate::error::{Error, Result};
use crate::par;
use crate::scalar::{half_turn_angles, Complex, Real, MIN_PRECISION};

/// Ordered continued-fraction coefficients, innermost (deepest) first.
#[derive(Clone, Debug)]
pub struct ContFracCoeffs {
    c: Vec<Complex>,
}

impl ContFracCoeffs {
    pub fn from_values(c: Vec<Complex>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::InvalidSize { n: 0, min: 1 });
        }
        Ok(ContFracCoeffs { c })
    }

    pub fn k(&self) -> usize {
        self.c.len()
    }

    /// Coefficients `c_1..c_k`, innermost first.
    pub fn coeffs(&self) -> &[Complex] {
        &self.c
    }

    pub fn precision(&self) -> u32 {
        self.c.iter().map(Complex::precision).max().unwrap_or(MIN_PRECISION)
    }
}

/// The evaluation points `lambda_l = 2 i sin(l pi / (2k+1))`, `l = 1..=k`.
#[derive(Clone, Debug)]
pub struct LambdaPoints {
    lambda: Vec<Complex>,
}

impl LambdaPoints {
    pub fn k(&self) -> usize {
        self.lambda.len()
    }

    pub fn points(&self) -> &[Complex] {
        &self.lambda
    }
}

/// Conjectured coefficients `c_l = -i cot(l pi / (2k+1))`, purely
/// imaginary by construction.
pub fn conjecture_coeffs(k: usize, prec: u32) -> Result<ContFracCoeffs> {
    if k < 1 {
        return Err(Error::InvalidSize { n: k, min: 1 });
    }
    let angles = half_turn_angles(k, 2 * k as i64 + 1, prec);
    let c = angles
        .iter()
        .map(|(cos, sin)| Complex::from_im(cos.div(sin).neg()))
        .collect();
    ContFracCoeffs::from_values(c)
}

/// Evaluation points `lambda_l = 2 i sin(l pi / (2k+1))`.
pub fn lambda_points(k: usize, prec: u32) -> Result<LambdaPoints> {
    if k < 1 {
        return Err(Error::InvalidSize { n: k, min: 1 });
    }
    let angles = half_turn_angles(k, 2 * k as i64 + 1, prec);
    let lambda = angles
        .iter()
        .map(|(_, sin)| Complex::from_im(sin.mul_i64(2)))
        .collect();
    Ok(LambdaPoints { lambda })
}

/// Bottom-up evaluation of the continued fraction at `lambda`.
///
/// An intermediate value below `2^(10-p) max(1, |c_j lambda|)` in
/// magnitude would be inverted into catastrophic amplification, so it is
/// reported as a pole at that floor instead.
pub fn eval_beta(coeffs: &ContFracCoeffs, lambda: &Complex) -> Result<Complex> {
    let prec = coeffs.precision().max(lambda.precision());
    let one = Real::one(prec);
    let guard = Real::two_pow(10 - prec as i32, prec);
    let mut t = coeffs.c[0].mul(lambda);
    for (j, c) in coeffs.c.iter().enumerate().skip(1) {
        let term = c.mul(lambda);
        let floor_scale = term.abs().max(&one);
        if t.abs() < guard.mul(&floor_scale) {
            return Err(Error::PoleEncountered { floor: j + 1 });
        }
        t = term.add(&t.recip());
    }
    Ok(t)
}

/// The real numbers `2 cot(j theta) sin(l theta)`, `j = 1..=k`, innermost
/// first: the values of `c_j lambda_l`, which are real because both
/// factors are purely imaginary.
pub fn real_terms(k: usize, l: usize, prec: u32) -> Result<Vec<Real>> {
    if k < 1 {
        return Err(Error::InvalidSize { n: k, min: 1 });
    }
    if l < 1 || l > k {
        return Err(Error::ModeOutOfRange { m: l, n: k });
    }
    let angles = half_turn_angles(k, 2 * k as i64 + 1, prec);
    let sin_l = angles[l - 1].1.clone();
    Ok(angles
        .iter()
        .map(|(cos, sin)| {
            let cot = cos.div(sin);
            cot.mul(&sin_l).mul_i64(2)
        })
        .collect())
}

/// Real-arithmetic twin of [`eval_beta`] over precomputed floor terms.
pub fn eval_real_fraction(terms: &[Real]) -> Result<Real> {
    if terms.is_empty() {
        return Err(Error::InvalidSize { n: 0, min: 1 });
    }
    let prec = terms.iter().map(Real::precision).max().unwrap_or(MIN_PRECISION);
    let one = Real::one(prec);
    let guard = Real::two_pow(10 - prec as i32, prec);
    let mut t = terms[0].clone();
    for (j, term) in terms.iter().enumerate().skip(1) {
        let floor_scale = term.abs().max(&one);
        if t.abs() < guard.mul(&floor_scale) {
            return Err(Error::PoleEncountered { floor: j + 1 });
        }
        t = term.add(&t.recip());
    }
    Ok(t)
}

/// Residual of the unit-value identity at one evaluation point.
#[derive(Clone, Debug)]
pub struct PointCheck {
    pub l: usize,
    pub residual: Option<Real>,
    pub pole_floor: Option<usize>,
    pub pass: bool,
}

/// Sweep report for `|beta(lambda_l) - 1|` over `l = 1..=k`.
#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub k: usize,
    pub precision_bits: u32,
    pub tol: Real,
    pub points: Vec<PointCheck>,
    pub max_residual: Real,
    pub pass: bool,
}

/// Evaluates the fraction at every `lambda_l` and compares against 1.
/// The per-point sweep is data parallel.
pub fn verify_conjecture(k: usize, prec: u32, tol: &Real) -> Result<ConjectureReport> {
    let coeffs = conjecture_coeffs(k, prec)?;
    let lams = lambda_points(k, prec)?;
    let one = Complex::one(prec);

    let points: Vec<PointCheck> = par::map_range(k, |i| {
        match eval_beta(&coeffs, &lams.points()[i]) {
            Ok(value) => {
                let residual = value.sub(&one).abs();
                let pass = residual <= *tol;
                PointCheck { l: i + 1, residual: Some(residual), pole_floor: None, pass }
            }
            Err(Error::PoleEncountered { floor }) => PointCheck {
                l: i + 1,
                residual: None,
                pole_floor: Some(floor),
                pass: false,
            },
            Err(_) => PointCheck { l: i + 1, residual: None, pole_floor: None, pass: false },
        }
    });

    let max_residual = points
        .iter()
        .filter_map(|p| p.residual.as_ref())
        .fold(Real::zero(prec), |acc, r| acc.max(r));
    let pass = points.iter().all(|p| p.pass);
    Ok(ConjectureReport { k, precision_bits: prec, tol: tol.clone(), points, max_residual, pass })
}

/// Parity of a single-parity polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Polynomial with coefficients on every other power only:
/// `coeffs[i]` multiplies `lambda^(2i)` (even) or `lambda^(2i+1)` (odd).
#[derive(Clone, Debug)]
pub struct ParityPoly {
    parity: Parity,
    coeffs: Vec<Complex>,
}

impl ParityPoly {
    pub fn even(coeffs: Vec<Complex>) -> Self {
        ParityPoly { parity: Parity::Even, coeffs }
    }

    pub fn odd(coeffs: Vec<Complex>) -> Self {
        ParityPoly { parity: Parity::Odd, coeffs }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    /// Structural degree: the power of the last stored slot.
    pub fn degree(&self) -> usize {
        let top = self.coeffs.len().saturating_sub(1);
        2 * top + usize::from(self.parity == Parity::Odd)
    }

    pub fn lead(&self) -> &Complex {
        self.coeffs.last().expect("parity polynomial is never empty")
    }

    fn power_of(&self, slot: usize) -> usize {
        2 * slot + usize::from(self.parity == Parity::Odd)
    }

    /// Multiply by `lambda`: parity flips; odd slots shift up one index.
    pub fn mul_lambda(&self) -> ParityPoly {
        let prec = self.precision();
        match self.parity {
            Parity::Even => ParityPoly::odd(self.coeffs.clone()),
            Parity::Odd => {
                let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
                coeffs.push(Complex::zero(prec));
                coeffs.extend(self.coeffs.iter().cloned());
                ParityPoly::even(coeffs)
            }
        }
    }

    pub fn scale(&self, s: &Complex) -> ParityPoly {
        ParityPoly {
            parity: self.parity,
            coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect(),
        }
    }

    /// Sum of two same-parity polynomials; the shorter one is padded.
    pub fn add(&self, rhs: &ParityPoly) -> Result<ParityPoly> {
        if self.parity != rhs.parity {
            return Err(Error::SizeMismatch { left: self.degree(), right: rhs.degree() });
        }
        let prec = self.precision().max(rhs.precision());
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Complex::zero(prec);
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = rhs.coeffs.get(i).unwrap_or(&zero);
                a.add(b)
            })
            .collect();
        Ok(ParityPoly { parity: self.parity, coeffs })
    }

    pub fn sub(&self, rhs: &ParityPoly) -> Result<ParityPoly> {
        self.add(&rhs.scale(&Complex::from_re(Real::from_i64(-1, rhs.precision()))))
    }

    pub fn precision(&self) -> u32 {
        self.coeffs.iter().map(Complex::precision).max().unwrap_or(MIN_PRECISION)
    }

    /// Horner evaluation in `lambda^2`, times `lambda` for odd parity.
    pub fn eval(&self, lambda: &Complex) -> Complex {
        let prec = self.precision().max(lambda.precision());
        let sq = lambda.mul(lambda);
        let mut acc = Complex::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&sq).add(c);
        }
        if self.parity == Parity::Odd {
            acc = acc.mul(lambda);
        }
        acc
    }
}

/// Rational form `beta = num/den` built from single-parity polynomials.
/// The numerator has the parity of `k` and degree `k`; the denominator
/// has the opposite parity and degree `k - 1`, making the ratio odd.
#[derive(Clone, Debug)]
pub struct OddEvenRational {
    num: ParityPoly,
    den: ParityPoly,
}

impl OddEvenRational {
    pub fn new(num: ParityPoly, den: ParityPoly) -> Result<Self> {
        if num.parity() == den.parity() {
            return Err(Error::UnsupportedParameter(
                "numerator and denominator must have opposite parity".into(),
            ));
        }
        Ok(OddEvenRational { num, den })
    }

    pub fn num(&self) -> &ParityPoly {
        &self.num
    }

    pub fn den(&self) -> &ParityPoly {
        &self.den
    }

    pub fn eval(&self, lambda: &Complex) -> Complex {
        self.num.eval(lambda).div(&self.den.eval(lambda))
    }
}

/// Accumulates the fraction into polynomial form bottom-up:
/// `(p, q) <- (c_1 lambda, 1)`, then `(p, q) <- (c_j lambda p + q, p)`.
pub fn beta_rational(coeffs: &ContFracCoeffs) -> Result<OddEvenRational> {
    let prec = coeffs.precision();
    for (j, c) in coeffs.coeffs().iter().enumerate() {
        if c.is_zero() {
            return Err(Error::DegenerateFraction { index: j + 1 });
        }
    }
    let mut num = ParityPoly::odd(vec![coeffs.coeffs()[0].clone()]);
    let mut den = ParityPoly::even(vec![Complex::one(prec)]);
    for c in coeffs.coeffs().iter().skip(1) {
        let next = num.mul_lambda().scale(c).add(&den)?;
        den = num;
        num = next;
    }
    OddEvenRational::new(num, den)
}

/// Line-check report: sign changes of `num` and `den` along the imaginary
/// axis versus their degrees.
#[derive(Clone, Debug)]
pub struct LineCheckReport {
    pub grid_size: usize,
    pub num_degree: usize,
    pub den_degree: usize,
    pub num_sign_changes: usize,
    pub den_sign_changes: usize,
    pub pass: bool,
}

/// Samples real `lambda = y` on a symmetric grid over `[-3, 3]` and
/// counts sign changes of the numerator and denominator divided by
/// `i^parity`. When the coefficient of `lambda^t` lies in `i^t R` (which
/// holds for any fraction with purely imaginary coefficients), those
/// quotients are real-valued on the real axis, and sign-change counts
/// equal to the degrees are grid evidence that every root is real and
/// the zeros and poles interlace on one line. Midpoint sampling keeps
/// `y = 0` off the grid.
pub fn line_check(r: &OddEvenRational, grid_size: usize) -> Result<LineCheckReport> {
    if grid_size < 64 {
        return Err(Error::InvalidSize { n: grid_size, min: 64 });
    }
    let prec = r.num.precision().max(r.den.precision());
    let span = Real::from_i64(6, prec);
    let start = Real::from_i64(-3, prec);

    let sign_changes = |poly: &ParityPoly| -> usize {
        let values = par::map_range(grid_size, |i| {
            let y = start.add(
                &span
                    .mul(&Real::from_f64(i as f64 + 0.5, prec))
                    .div_i64(grid_size as i64),
            );
            let value = poly.eval(&Complex::from_re(y));
            // value / i^parity, up to a constant real factor that cannot
            // affect sign-change counts.
            match poly.parity() {
                Parity::Even => value.re,
                Parity::Odd => value.im,
            }
        });
        let mut changes = 0;
        let mut last: Option<bool> = None;
        for v in values {
            if v.is_zero() {
                continue;
            }
            let positive = v.is_positive();
            if let Some(prev) = last {
                if prev != positive {
                    changes += 1;
                }
            }
            last = Some(positive);
        }
        changes
    };

    let num_sign_changes = sign_changes(&r.num);
    let den_sign_changes = sign_changes(&r.den);
    let num_degree = r.num.degree();
    let den_degree = r.den.degree();
    Ok(LineCheckReport {
        grid_size,
        num_degree,
        den_degree,
        num_sign_changes,
        den_sign_changes,
        pass: num_sign_changes == num_degree && den_sign_changes == den_degree,
    })
}

/// Recovers `c_1..c_k` from the unit-value conditions alone.
///
/// The ansatz is one odd and one even single-parity polynomial with the
/// degree-`k` slot normalized to 1; the conditions
/// `odd(lambda_l) = even(lambda_l)` at the `k` evaluation points give a
/// square linear system. The solved rational function is then expanded
/// back into `c_k lambda + 1/(...)` form by repeated leading-coefficient
/// division, which checks the structural degree at every floor.
pub fn recover_coeffs(k: usize, prec: u32) -> Result<ContFracCoeffs> {
    if k < 1 {
        return Err(Error::InvalidSize { n: k, min: 1 });
    }
    let lams = lambda_points(k, prec)?;

    // Unknown layout: odd slots (degrees 1, 3, ...) then even slots
    // (degrees 0, 2, ...), with the degree-k slot removed (normalized).
    let odd_count = k.div_ceil(2);
    let even_count = k / 2 + 1;
    let lead_is_odd = k % 2 == 1;

    let mut matrix: Vec<Vec<Complex>> = Vec::with_capacity(k);
    let mut rhs: Vec<Complex> = Vec::with_capacity(k);
    for l in 0..k {
        let lambda = &lams.points()[l];
        // powers[t] = lambda^t for t = 0..=k
        let mut powers = Vec::with_capacity(k + 1);
        powers.push(Complex::one(prec));
        for t in 1..=k {
            powers.push(powers[t - 1].mul(lambda));
        }
        let mut row = Vec::with_capacity(k);
        for i in 0..odd_count {
            let deg = 2 * i + 1;
            if lead_is_odd && deg == k {
                continue;
            }
            row.push(powers[deg].clone());
        }
        for i in 0..even_count {
            let deg = 2 * i;
            if !lead_is_odd && deg == k {
                continue;
            }
            row.push(powers[deg].neg());
        }
        debug_assert_eq!(row.len(), k);
        matrix.push(row);
        // Move the normalized leading term to the right-hand side. It
        // enters the odd side with +1 (k odd) or the even side with -1
        // (k even).
        rhs.push(if lead_is_odd { powers[k].neg() } else { powers[k].clone() });
    }

    let solution = solve_dense_complex(matrix, rhs, prec)?;

    let one = Complex::one(prec);
    let mut odd_coeffs = Vec::with_capacity(odd_count);
    let mut even_coeffs = Vec::with_capacity(even_count);
    let mut cursor = solution.into_iter();
    for i in 0..odd_count {
        if lead_is_odd && 2 * i + 1 == k {
            odd_coeffs.push(one.clone());
        } else {
            odd_coeffs.push(cursor.next().expect("solution length"));
        }
    }
    for i in 0..even_count {
        if !lead_is_odd && 2 * i == k {
            even_coeffs.push(one.clone());
        } else {
            even_coeffs.push(cursor.next().expect("solution length"));
        }
    }

    let odd_poly = ParityPoly::odd(odd_coeffs);
    let even_poly = ParityPoly::even(even_coeffs);
    let (num, den) = if lead_is_odd { (odd_poly, even_poly) } else { (even_poly, odd_poly) };
    expand_to_coeffs(num, den, k, prec)
}

/// Expands `num/den` (degrees `k`, `k-1`) into continued-fraction
/// coefficients by repeated division, outermost floor first.
fn expand_to_coeffs(
    mut num: ParityPoly,
    mut den: ParityPoly,
    k: usize,
    prec: u32,
) -> Result<ContFracCoeffs> {
    let guard = Real::two_pow(20 - prec as i32, prec);
    let mut reversed = Vec::with_capacity(k);
    for j in (1..=k).rev() {
        if num.degree() != den.degree() + 1 {
            return Err(Error::ExpansionFailure {
                floor: j,
                reason: format!(
                    "degree mismatch: numerator {} vs denominator {}",
                    num.degree(),
                    den.degree()
                ),
            });
        }
        let den_scale = den
            .coeffs()
            .iter()
            .fold(Real::zero(prec), |acc, c| acc.max(&c.abs()));
        if den.lead().abs() < guard.mul(&den_scale) || den_scale.is_zero() {
            return Err(Error::ExpansionFailure {
                floor: j,
                reason: "denominator leading coefficient vanished".into(),
            });
        }
        let c = num.lead().div(den.lead());
        // Remainder r = num - c lambda den; the top slot cancels by the
        // choice of c, so it is dropped structurally.
        let mut r = num.sub(&den.mul_lambda().scale(&c))?;
        r.coeffs.truncate(num.coeffs.len() - 1);
        reversed.push(c);
        num = den;
        den = r;
    }
    reversed.reverse();
    ContFracCoeffs::from_values(reversed)
}

/// Gaussian elimination with partial pivoting over complex scalars.
fn solve_dense_complex(
    mut a: Vec<Vec<Complex>>,
    mut rhs: Vec<Complex>,
    prec: u32,
) -> Result<Vec<Complex>> {
    let n = a.len();
    let scale = a
        .iter()
        .flatten()
        .fold(Real::zero(prec), |acc, c| acc.max(&c.abs()))
        .max(&Real::one(prec));
    let floor = Real::two_pow(20 - prec as i32, prec).mul(&scale);

    for col in 0..n {
        let (pivot_row, pivot_mag) = (col..n)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap_or(std::cmp::Ordering::Equal))
            .expect("nonempty pivot range");
        if pivot_mag < floor {
            return Err(Error::RecoverySingular { pivot: col });
        }
        a.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].div(&a[col][col]);
            for c in col..n {
                let delta = factor.mul(&a[col][c]);
                a[r][c] = a[r][c].sub(&delta);
            }
            let delta = factor.mul(&rhs[col]);
            rhs[r] = rhs[r].sub(&delta);
        }
    }

    let mut x = vec![Complex::zero(prec); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row].clone();
        for c in (row + 1)..n {
            acc = acc.sub(&a[row][c].mul(&x[c]));
        }
        x[row] = acc.div(&a[row][row]);
    }
    Ok(x)
}
