//! Circulant matrix algebra at configurable precision.
//!
//! A circulant matrix is stored as its first row only: `M(i, j) =
//! row[(j - i) mod n]`. Products, sums, transposes, and spectra all act on
//! that row; the dense expansion is produced on demand. Spectral
//! transforms use direct summation over a precomputed table of the `n`-th
//! roots of unity, which keeps every intermediate at the working
//! precision.

use crate::error::{Error, Result};
use crate::par;
use crate::scalar::{unit_circle, Complex, Real};

/// Minimum matrix size; a cycle needs at least three vertices.
pub const MIN_SIZE: usize = 3;

/// Circulant matrix of order `n`, stored as its first row.
#[derive(Clone, Debug)]
pub struct Circulant {
    row: Vec<Real>,
}

impl Circulant {
    pub fn from_row(row: Vec<Real>) -> Result<Self> {
        if row.len() < MIN_SIZE {
            return Err(Error::InvalidSize { n: row.len(), min: MIN_SIZE });
        }
        Ok(Circulant { row })
    }

    pub fn n(&self) -> usize {
        self.row.len()
    }

    pub fn row(&self) -> &[Real] {
        &self.row
    }

    pub fn precision(&self) -> u32 {
        self.row.iter().map(Real::precision).max().unwrap_or(53)
    }

    pub fn entry(&self, i: usize, j: usize) -> &Real {
        let n = self.n();
        &self.row[((j % n) + n - (i % n)) % n]
    }

    pub fn to_dense(&self) -> Vec<Vec<Real>> {
        let n = self.n();
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }

    /// Transpose: row reversal `row'[t] = row[(n - t) mod n]`.
    pub fn transpose(&self) -> Circulant {
        let n = self.n();
        let row = (0..n).map(|t| self.row[(n - t) % n].clone()).collect();
        Circulant { row }
    }

    pub fn matvec(&self, v: &[Real]) -> Result<Vec<Real>> {
        let n = self.n();
        if v.len() != n {
            return Err(Error::SizeMismatch { left: n, right: v.len() });
        }
        let p = self.precision();
        Ok(par::map_range(n, |i| {
            let mut acc = Real::zero(p);
            for (j, vj) in v.iter().enumerate() {
                acc = acc.add(&self.row[(j + n - i) % n].mul(vj));
            }
            acc
        }))
    }

    /// Circulant product: circular convolution of the first rows.
    pub fn mul(&self, rhs: &Circulant) -> Result<Circulant> {
        let n = self.check_same_size(rhs)?;
        let p = self.precision().max(rhs.precision());
        let row = par::map_range(n, |t| {
            let mut acc = Real::zero(p);
            for s in 0..n {
                acc = acc.add(&self.row[s].mul(&rhs.row[(t + n - s) % n]));
            }
            acc
        });
        Ok(Circulant { row })
    }

    pub fn add(&self, rhs: &Circulant) -> Result<Circulant> {
        let n = self.check_same_size(rhs)?;
        let row = (0..n).map(|t| self.row[t].add(&rhs.row[t])).collect();
        Ok(Circulant { row })
    }

    pub fn sub(&self, rhs: &Circulant) -> Result<Circulant> {
        let n = self.check_same_size(rhs)?;
        let row = (0..n).map(|t| self.row[t].sub(&rhs.row[t])).collect();
        Ok(Circulant { row })
    }

    pub fn scale(&self, s: &Real) -> Circulant {
        Circulant { row: self.row.iter().map(|x| x.mul(s)).collect() }
    }

    /// Largest absolute entry. For a circulant this is a max over the row.
    pub fn max_norm(&self) -> Real {
        let p = self.precision();
        self.row
            .iter()
            .fold(Real::zero(p), |acc, x| acc.max(&x.abs()))
    }

    /// Eigenvalues `mu_m = sum_j row[j] e^{2 pi i j m / n}` for `m = 0..n`.
    pub fn spectrum(&self) -> Vec<Complex> {
        let n = self.n();
        let p = self.precision();
        let roots = unit_circle(n, p);
        par::map_range(n, |m| {
            let mut re = Real::zero(p);
            let mut im = Real::zero(p);
            for (j, rj) in self.row.iter().enumerate() {
                let (c, s) = &roots[(j * m) % n];
                re = re.add(&rj.mul(c));
                im = im.add(&rj.mul(s));
            }
            Complex::new(re, im)
        })
    }

    fn check_same_size(&self, rhs: &Circulant) -> Result<usize> {
        if self.n() != rhs.n() {
            return Err(Error::SizeMismatch { left: self.n(), right: rhs.n() });
        }
        Ok(self.n())
    }
}

/// Symmetric circulant: `row[j] = row[(n - j) mod n]`, so the dense
/// expansion is symmetric and all eigenvalues are real.
#[derive(Clone, Debug)]
pub struct SymCirculant {
    inner: Circulant,
}

impl SymCirculant {
    /// Validates the palindromic row structure exactly.
    pub fn from_row(row: Vec<Real>) -> Result<Self> {
        let c = Circulant::from_row(row)?;
        let n = c.n();
        for j in 1..=(n / 2) {
            if c.row[j] != c.row[n - j] {
                return Err(Error::UnsupportedParameter(format!(
                    "row is not symmetric at offset {j}"
                )));
            }
        }
        Ok(SymCirculant { inner: c })
    }

    /// Builds the row from the half `row[0..=n/2]` by mirroring, so the
    /// symmetry invariant holds by construction.
    pub fn from_half_row(n: usize, half: Vec<Real>) -> Result<Self> {
        if n < MIN_SIZE {
            return Err(Error::InvalidSize { n, min: MIN_SIZE });
        }
        if half.len() != n / 2 + 1 {
            return Err(Error::SizeMismatch { left: half.len(), right: n / 2 + 1 });
        }
        let mut row = half;
        for j in (n / 2 + 1)..n {
            row.push(row[n - j].clone());
        }
        Ok(SymCirculant { inner: Circulant { row } })
    }

    pub fn scaled_identity(n: usize, value: i64, prec: u32) -> Result<Self> {
        if n < MIN_SIZE {
            return Err(Error::InvalidSize { n, min: MIN_SIZE });
        }
        let mut row = vec![Real::zero(prec); n];
        row[0] = Real::from_i64(value, prec);
        Ok(SymCirculant { inner: Circulant { row } })
    }

    pub fn n(&self) -> usize {
        self.inner.n()
    }

    pub fn row(&self) -> &[Real] {
        self.inner.row()
    }

    pub fn precision(&self) -> u32 {
        self.inner.precision()
    }

    pub fn as_circulant(&self) -> &Circulant {
        &self.inner
    }

    pub fn to_dense(&self) -> Vec<Vec<Real>> {
        self.inner.to_dense()
    }

    pub fn max_norm(&self) -> Real {
        self.inner.max_norm()
    }

    pub fn row_sum(&self) -> Real {
        let p = self.precision();
        self.inner.row.iter().fold(Real::zero(p), |acc, x| acc.add(x))
    }

    pub fn add(&self, rhs: &SymCirculant) -> Result<SymCirculant> {
        Ok(SymCirculant { inner: self.inner.add(&rhs.inner)? })
    }

    pub fn sub(&self, rhs: &SymCirculant) -> Result<SymCirculant> {
        Ok(SymCirculant { inner: self.inner.sub(&rhs.inner)? })
    }

    /// Product of two symmetric circulants (they commute, and the result
    /// is symmetric). Computed on the half row and mirrored so the
    /// symmetry invariant holds bit-for-bit.
    pub fn mul_sym(&self, rhs: &SymCirculant) -> Result<SymCirculant> {
        let n = self.inner.check_same_size(&rhs.inner)?;
        let p = self.precision().max(rhs.precision());
        let a = &self.inner.row;
        let b = &rhs.inner.row;
        let half = par::map_range(n / 2 + 1, |t| {
            let mut acc = Real::zero(p);
            for s in 0..n {
                acc = acc.add(&a[s].mul(&b[(t + n - s) % n]));
            }
            acc
        });
        SymCirculant::from_half_row(n, half)
    }

    /// Real eigenvalues `mu_m = sum_j row[j] cos(2 pi j m / n)`; the sine
    /// parts cancel pairwise for a symmetric row, so none are computed.
    pub fn spectrum_real(&self) -> Vec<Real> {
        let n = self.n();
        let p = self.precision();
        let roots = unit_circle(n, p);
        par::map_range(n, |m| {
            let mut acc = Real::zero(p);
            for (j, rj) in self.inner.row.iter().enumerate() {
                acc = acc.add(&rj.mul(&roots[(j * m) % n].0));
            }
            acc
        })
    }

    /// Synthesis: the symmetric circulant whose eigenvalue at mode `m` is
    /// `values[m]`. The caller supplies a spectrum with `values[m] =
    /// values[n - m]` (up to roundoff); the row is computed on the half
    /// range and mirrored.
    pub fn from_spectrum(values: &[Real]) -> Result<Self> {
        let n = values.len();
        if n < MIN_SIZE {
            return Err(Error::InvalidSize { n, min: MIN_SIZE });
        }
        let p = values.iter().map(Real::precision).max().unwrap_or(53);
        let roots = unit_circle(n, p);
        let half = par::map_range(n / 2 + 1, |j| {
            let mut acc = Real::zero(p);
            for (m, v) in values.iter().enumerate() {
                acc = acc.add(&v.mul(&roots[(j * m) % n].0));
            }
            acc.div_i64(n as i64)
        });
        SymCirculant::from_half_row(n, half)
    }

    /// Principal square root of a positive-semidefinite symmetric
    /// circulant. Eigenvalues in `[-tol_psd, 0)` are clamped to zero with
    /// `tol_psd = 64 n 2^(1-p) max_norm`; anything lower is an error.
    pub fn sqrt_psd(&self) -> Result<SymCirculant> {
        let n = self.n();
        let p = self.precision();
        let tol = Real::unit_roundoff(p)
            .mul_i64(64 * n as i64)
            .mul(&self.max_norm());
        let neg_tol = tol.neg();
        let mut spec = self.spectrum_real();
        for (m, mu) in spec.iter_mut().enumerate() {
            if *mu < neg_tol {
                return Err(Error::NotPositiveSemidefinite {
                    mode: m,
                    value: mu.to_f64(),
                    tol: tol.to_f64(),
                });
            }
            if mu.is_negative() {
                *mu = Real::zero(p);
            }
            *mu = mu.sqrt();
        }
        SymCirculant::from_spectrum(&spec)
    }

    /// Inverse via per-mode reciprocals of the spectrum. Symbols with
    /// magnitude below `2^(10-p)` relative to the largest symbol signal a
    /// singular elimination step.
    pub fn invert_spectral(&self) -> Result<SymCirculant> {
        let p = self.precision();
        let spec = self.spectrum_real();
        let scale = spec
            .iter()
            .fold(Real::zero(p), |acc, x| acc.max(&x.abs()))
            .max(&Real::one(p));
        let floor = Real::two_pow(10 - p as i32, p).mul(&scale);
        let mut inv = Vec::with_capacity(spec.len());
        for (m, mu) in spec.iter().enumerate() {
            if mu.abs() < floor {
                return Err(Error::EliminationSingularity { mode: m });
            }
            inv.push(mu.recip());
        }
        SymCirculant::from_spectrum(&inv)
    }
}

/// The `n x n` minus discrete Laplacian of the cycle: first row
/// `[2, -1, 0, ..., 0, -1]`.
pub fn minus_laplacian(n: usize, prec: u32) -> Result<SymCirculant> {
    if n < MIN_SIZE {
        return Err(Error::InvalidSize { n, min: MIN_SIZE });
    }
    let mut row = vec![Real::zero(prec); n];
    row[0] = Real::from_i64(2, prec);
    row[1] = Real::from_i64(-1, prec);
    row[n - 1] = Real::from_i64(-1, prec);
    SymCirculant::from_row(row)
}

/// The inter-layer coupling block of the cylinder graph: first row
/// `[-1, -1, 0, ..., 0]`.
pub fn adjacency_b(n: usize, prec: u32) -> Result<Circulant> {
    if n < MIN_SIZE {
        return Err(Error::InvalidSize { n, min: MIN_SIZE });
    }
    let mut row = vec![Real::zero(prec); n];
    row[0] = Real::from_i64(-1, prec);
    row[1] = Real::from_i64(-1, prec);
    Circulant::from_row(row)
}

/// Integer circulant for exact identity checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntCirculant {
    row: Vec<i64>,
}

impl IntCirculant {
    pub fn from_row(row: Vec<i64>) -> Result<Self> {
        if row.len() < MIN_SIZE {
            return Err(Error::InvalidSize { n: row.len(), min: MIN_SIZE });
        }
        Ok(IntCirculant { row })
    }

    pub fn row(&self) -> &[i64] {
        &self.row
    }

    pub fn transpose(&self) -> IntCirculant {
        let n = self.row.len();
        IntCirculant { row: (0..n).map(|t| self.row[(n - t) % n]).collect() }
    }

    pub fn mul(&self, rhs: &IntCirculant) -> Result<IntCirculant> {
        let n = self.row.len();
        if n != rhs.row.len() {
            return Err(Error::SizeMismatch { left: n, right: rhs.row.len() });
        }
        let row = (0..n)
            .map(|t| (0..n).map(|s| self.row[s] * rhs.row[(t + n - s) % n]).sum())
            .collect();
        Ok(IntCirculant { row })
    }

    pub fn sub(&self, rhs: &IntCirculant) -> Result<IntCirculant> {
        let n = self.row.len();
        if n != rhs.row.len() {
            return Err(Error::SizeMismatch { left: n, right: rhs.row.len() });
        }
        let row = (0..n).map(|t| self.row[t] - rhs.row[t]).collect();
        Ok(IntCirculant { row })
    }
}

/// Exact integer check of `4I - B B^T = L`. Returns `true` when the two
/// first rows coincide entry by entry in `i64` arithmetic.
pub fn check_bbt_identity(n: usize) -> Result<bool> {
    if n < MIN_SIZE {
        return Err(Error::InvalidSize { n, min: MIN_SIZE });
    }
    let mut b = vec![0i64; n];
    b[0] = -1;
    b[1] = -1;
    let b = IntCirculant::from_row(b)?;
    let bbt = b.mul(&b.transpose())?;

    let mut four_i = vec![0i64; n];
    four_i[0] = 4;
    let lhs = IntCirculant::from_row(four_i)?.sub(&bbt)?;

    let mut l = vec![0i64; n];
    l[0] = 2;
    l[1] = -1;
    l[n - 1] = -1;
    Ok(lhs == IntCirculant::from_row(l)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 53;

    fn row_f64(c: &Circulant) -> Vec<f64> {
        c.row().iter().map(Real::to_f64).collect()
    }

    #[test]
    fn minus_laplacian_rows() {
        let l4 = minus_laplacian(4, P).unwrap();
        assert_eq!(
            l4.row().iter().map(Real::to_f64).collect::<Vec<_>>(),
            vec![2.0, -1.0, 0.0, -1.0]
        );
        let l3 = minus_laplacian(3, P).unwrap();
        assert_eq!(
            l3.row().iter().map(Real::to_f64).collect::<Vec<_>>(),
            vec![2.0, -1.0, -1.0]
        );
        assert!(matches!(
            minus_laplacian(2, P),
            Err(Error::InvalidSize { n: 2, min: 3 })
        ));
    }

    #[test]
    fn laplacian_dense_row_sums_vanish() {
        let l7 = minus_laplacian(7, P).unwrap();
        for row in l7.to_dense() {
            let sum: f64 = row.iter().map(Real::to_f64).sum();
            assert_eq!(sum, 0.0);
        }
    }

    #[test]
    fn adjacency_dense_matches_hand_expansion() {
        let b = adjacency_b(3, P).unwrap();
        let dense: Vec<Vec<f64>> = b
            .to_dense()
            .iter()
            .map(|r| r.iter().map(Real::to_f64).collect())
            .collect();
        assert_eq!(
            dense,
            vec![
                vec![-1.0, -1.0, 0.0],
                vec![0.0, -1.0, -1.0],
                vec![-1.0, 0.0, -1.0],
            ]
        );
        assert!(matches!(
            adjacency_b(2, P),
            Err(Error::InvalidSize { n: 2, min: 3 })
        ));
    }

    #[test]
    fn adjacency_times_ones() {
        let b = adjacency_b(3, P).unwrap();
        let ones = vec![Real::one(P); 3];
        let out = b.matvec(&ones).unwrap();
        for v in out {
            assert_eq!(v.to_f64(), -2.0);
        }
    }

    #[test]
    fn bbt_rows() {
        // Hand expansion: B = -(I + S), so B B^T = 2I + S + S^T.
        let b5 = adjacency_b(5, P).unwrap();
        let bbt5 = b5.mul(&b5.transpose()).unwrap();
        assert_eq!(row_f64(&bbt5), vec![2.0, 1.0, 0.0, 0.0, 1.0]);

        let b3 = adjacency_b(3, P).unwrap();
        let bbt3 = b3.mul(&b3.transpose()).unwrap();
        assert_eq!(row_f64(&bbt3), vec![2.0, 1.0, 1.0]);
    }

    #[test]
    fn laplacian_spectrum() {
        let l3 = minus_laplacian(3, P).unwrap();
        let mut spec: Vec<f64> = l3.spectrum_real().iter().map(Real::to_f64).collect();
        spec.sort_by(f64::total_cmp);
        assert!(spec[0].abs() < 1e-14);
        assert!((spec[1] - 3.0).abs() < 1e-14);
        assert!((spec[2] - 3.0).abs() < 1e-14);

        // Direct transform of the row [2, -1, 0, ..., 0, -1].
        for n in [4usize, 7, 12] {
            let l = minus_laplacian(n, P).unwrap();
            let spec = l.spectrum_real();
            for (m, mu) in spec.iter().enumerate() {
                let expect = 2.0 - 2.0 * (2.0 * std::f64::consts::PI * m as f64 / n as f64).cos();
                assert!((mu.to_f64() - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn adjacency_spectrum_vanishes_at_half_mode() {
        let b = adjacency_b(4, P).unwrap();
        let spec = b.spectrum();
        // mode 2: -(1 + e^{i pi}) = 0
        assert!(spec[2].abs().to_f64() < 1e-14);
    }

    #[test]
    fn sqrt_of_tricycle_laplacian() {
        let l3 = minus_laplacian(3, P).unwrap();
        let s = l3.sqrt_psd().unwrap();
        // Spectral synthesis by hand: eigenvalues (0, sqrt3, sqrt3),
        // row[0] = 2 sqrt(3) / 3.
        let sqrt3 = 3f64.sqrt();
        assert!((s.row()[0].to_f64() - 2.0 * sqrt3 / 3.0).abs() < 1e-14);
        assert!((s.row()[1].to_f64() + sqrt3 / 3.0).abs() < 1e-14);
        assert!((s.row()[2].to_f64() + sqrt3 / 3.0).abs() < 1e-14);

        // Square back: (2 sqrt3/3)^2 + 2 (sqrt3/3)^2 = 2 and the mixed
        // term gives -1.
        let sq = s.mul_sym(&s).unwrap();
        let diff = sq.sub(&l3).unwrap();
        assert!(diff.max_norm().to_f64() < 1e-12);
    }

    #[test]
    fn sqrt_of_identity() {
        let id = SymCirculant::scaled_identity(5, 1, P).unwrap();
        let s = id.sqrt_psd().unwrap();
        assert!((s.row()[0].to_f64() - 1.0).abs() < 1e-14);
        for j in 1..5 {
            assert!(s.row()[j].to_f64().abs() < 1e-14);
        }
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let mut row = vec![Real::zero(P); 4];
        row[0] = Real::from_i64(-1, P);
        let m = SymCirculant::from_row(row).unwrap();
        assert!(matches!(
            m.sqrt_psd(),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn subtraction_and_max_norm() {
        let l = minus_laplacian(6, P).unwrap();
        let z = l.sub(&l).unwrap();
        assert_eq!(z.max_norm().to_f64(), 0.0);
        assert_eq!(l.max_norm().to_f64(), 2.0);
    }

    #[test]
    fn size_mismatch_is_reported() {
        let a = minus_laplacian(4, P).unwrap();
        let b = minus_laplacian(5, P).unwrap();
        assert!(matches!(a.add(&b), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn bbt_identity_small_and_large() {
        assert!(check_bbt_identity(3).unwrap());
        assert!(check_bbt_identity(4).unwrap());
        assert!(check_bbt_identity(64).unwrap());
    }

    #[test]
    fn symmetric_row_validation() {
        let row = vec![
            Real::from_f64(1.0, P),
            Real::from_f64(2.0, P),
            Real::from_f64(3.0, P),
            Real::from_f64(2.0, P),
        ];
        assert!(SymCirculant::from_row(row).is_ok());
        let bad = vec![
            Real::from_f64(1.0, P),
            Real::from_f64(2.0, P),
            Real::from_f64(3.0, P),
            Real::from_f64(4.0, P),
        ];
        assert!(SymCirculant::from_row(bad).is_err());
    }
}
