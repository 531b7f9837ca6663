//! Linear operators of the factorization, in two realizations: dense
//! matrices for oracle checks, and diagonal / permutation descriptors for
//! in-place execution.
//!
//! Twiddles are stored exactly as exponents of a root of unity over one
//! shared denominator and evaluated with a single `exp` per entry.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::index::{IndexPermutation, RadixTuple};
use crate::Complex;

/// `ω_den^exp = exp(−2πi·exp/den)` with the exponent reduced modulo `den`.
pub fn root_of_unity(exp: usize, den: usize) -> Complex {
    let e = exp % den;
    // exact values on the real and imaginary axes
    if (4 * e).is_multiple_of(den) {
        return match 4 * e / den {
            0 => Complex::new(1.0, 0.0),
            1 => Complex::new(0.0, -1.0),
            2 => Complex::new(-1.0, 0.0),
            _ => Complex::new(0.0, 1.0),
        };
    }
    Complex::from_polar(1.0, -TAU * e as f64 / den as f64)
}

/// `ω_n = exp(−2πi/n)`.
pub fn omega(n: usize) -> Result<Complex> {
    if n == 0 {
        return Err(Error::domain("ω_0 is undefined"));
    }
    Ok(root_of_unity(1, n))
}

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diagonal(d: &TwiddleDiagonal) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in d.values().iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `self · rhs`. Zero entries of both operands are skipped, so products
    /// of permutation, diagonal and block-diagonal factors stay cheap.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                actual: rhs.rows,
            });
        }
        let is_zero = |z: &Complex| z.re == 0.0 && z.im == 0.0;
        // nonzeros of each rhs row, as (column, value)
        let rhs_rows: Vec<Vec<(usize, Complex)>> = rhs
            .data
            .chunks(rhs.cols.max(1))
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, z)| !is_zero(z))
                    .map(|(c, &z)| (c, z))
                    .collect()
            })
            .collect();
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (l, a) in self.data[i * self.cols..(i + 1) * self.cols].iter().enumerate() {
                if is_zero(a) {
                    continue;
                }
                for &(c, b) in &rhs_rows[l] {
                    out_row[c] += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[Complex]) -> Result<Vec<Complex>> {
        if self.cols != v.len() {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                actual: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Kronecker product: entry `(i·p + k, j·q + l)` is `self[i,j] · rhs[k,l]`
    /// where `rhs` is `p × q`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (p, q) = (rhs.rows, rhs.cols);
        Self::from_fn(self.rows * p, self.cols * q, |r, c| {
            self.get(r / p, c / q) * rhs.get(r % p, c % q)
        })
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Largest entrywise modulus of `self − other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `F_n = [ω_n^{kl}]`.
pub fn dft_matrix(n: usize) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::domain("DFT of length 0"));
    }
    Ok(DenseMatrix::from_fn(n, n, |k, l| root_of_unity(k * l % n, n)))
}

/// 0/1 matrix of a permutation: column `n` carries its one in row `forward(n)`.
pub fn dense_of_permutation(p: &IndexPermutation) -> DenseMatrix {
    let n = p.len();
    let mut m = DenseMatrix::zeros(n, n);
    for c in 0..n {
        m.set(p.apply(c), c, Complex::new(1.0, 0.0));
    }
    m
}

/// Diagonal of unit-modulus entries `ω_den^{e_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwiddleDiagonal {
    denominator: usize,
    exponents: Vec<usize>,
    values: Vec<Complex>,
}

impl TwiddleDiagonal {
    /// Entry `i` is `ω_denominator^{exponents[i]}`. Exponents are reduced.
    pub fn from_exponents(denominator: usize, exponents: Vec<usize>) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::domain("twiddle denominator is zero"));
        }
        let exponents: Vec<usize> = exponents.into_iter().map(|e| e % denominator).collect();
        let values = exponents
            .iter()
            .map(|&e| root_of_unity(e, denominator))
            .collect();
        Ok(Self {
            denominator,
            exponents,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            denominator: 1,
            exponents: vec![0; n],
            values: vec![Complex::new(1.0, 0.0); n],
        }
    }

    /// `I_copies ⊗ diag(self)`.
    pub fn tiled(&self, copies: usize) -> Self {
        Self {
            denominator: self.denominator,
            exponents: self.exponents.repeat(copies),
            values: self.values.repeat(copies),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex] {
        &self.values
    }

    pub fn denominator(&self) -> usize {
        self.denominator
    }

    /// Entry `i` as the exact pair `(numerator, denominator)` of `ω`'s exponent.
    pub fn exponent(&self, i: usize) -> (usize, usize) {
        (self.exponents[i], self.denominator)
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Largest `| |d_i| − 1 |`.
    pub fn max_modulus_deviation(&self) -> f64 {
        self.values
            .iter()
            .map(|z| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub(crate) fn negate_entry(&mut self, i: usize) {
        self.values[i] = -self.values[i];
    }
}

/// `W^n_m`: entry `i·m + j` is `ω_n^{ij}` for `i < n/m`, `j < m`.
pub fn twiddle_w(n: usize, m: usize) -> Result<TwiddleDiagonal> {
    if m == 0 || !n.is_multiple_of(m) {
        return Err(Error::domain(format!("{m} does not divide {n}")));
    }
    let k = n / m;
    let exps = (0..k).flat_map(|i| (0..m).map(move |j| i * j)).collect();
    TwiddleDiagonal::from_exponents(n, exps)
}

/// `V_{k,m,n}`: entry `(i·m + j)·n + ℓ` is `ω_{kmn}^{i(ℓ·m + j)}`.
pub fn twiddle_v(k: usize, m: usize, n: usize) -> Result<TwiddleDiagonal> {
    if k == 0 || m == 0 || n == 0 {
        return Err(Error::domain(format!("V_{{{k},{m},{n}}} has a zero size")));
    }
    let mut exps = Vec::with_capacity(k * m * n);
    for i in 0..k {
        for j in 0..m {
            for l in 0..n {
                exps.push(i * (l * m + j));
            }
        }
    }
    TwiddleDiagonal::from_exponents(k * m * n, exps)
}

/// DIT stage twiddle `Ŵ_k = I_{N/N_k} ⊗ W^{N_k}_{n_k}`.
pub fn stage_twiddle_dit(alpha: &RadixTuple, k: usize) -> Result<TwiddleDiagonal> {
    let block = alpha.prefix_product(k)?;
    Ok(twiddle_w(block, alpha.radix(k))?.tiled(alpha.size() / block))
}

/// DIF stage twiddle `W̃_k = I_{N/M_k} ⊗ W^{M_k}_{m_k}`, applied after the butterfly.
pub fn stage_twiddle_dif(beta: &RadixTuple, k: usize) -> Result<TwiddleDiagonal> {
    if k > beta.last_stage() {
        return Err(Error::domain(format!("stage {k} out of range")));
    }
    let block = beta.suffix_product(k);
    Ok(twiddle_w(block, beta.radix(k))?.tiled(beta.size() / block))
}

/// The DIF twiddle of stage `k` carried across the permutation
/// `B_{k+1} B_k⁻¹`: `I_{N/M_k} ⊗ V_{m_k, M_{k+2}, m_{k+1}}`, for `k < K`.
///
/// It satisfies `B_{k+1} B_k⁻¹ W̃_k = X B_{k+1} B_k⁻¹`.
pub fn rearranged_twiddle(beta: &RadixTuple, k: usize) -> Result<TwiddleDiagonal> {
    if k >= beta.last_stage() {
        return Err(Error::domain(format!(
            "rearranged twiddle needs k < K, got k = {k}"
        )));
    }
    let block = beta.suffix_product(k);
    let tile = twiddle_v(beta.radix(k), beta.suffix_product(k + 2), beta.radix(k + 1))?;
    Ok(tile.tiled(beta.size() / block))
}

/// DIF-W stage twiddle, applied before the butterfly of stage `k`: the
/// identity for `k = 0`, otherwise [`rearranged_twiddle`] of stage `k − 1`.
pub fn stage_twiddle_difw(beta: &RadixTuple, k: usize) -> Result<TwiddleDiagonal> {
    match k {
        0 => Ok(TwiddleDiagonal::identity(beta.size())),
        k if k <= beta.last_stage() => rearranged_twiddle(beta, k - 1),
        _ => Err(Error::domain(format!("stage {k} out of range"))),
    }
}

pub fn apply_diagonal_inplace(v: &mut [Complex], d: &TwiddleDiagonal) -> Result<()> {
    if v.len() != d.len() {
        return Err(Error::LengthMismatch {
            expected: d.len(),
            actual: v.len(),
        });
    }
    for (x, w) in v.iter_mut().zip(d.values()) {
        *x *= w;
    }
    Ok(())
}

/// `v ← S v` where `S e_n = e_{p(n)}`, i.e. the value at `n` moves to `p(n)`.
/// Follows each cycle from its precomputed leader; no allocation.
pub fn apply_permutation_inplace(v: &mut [Complex], p: &IndexPermutation) -> Result<()> {
    if v.len() != p.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            actual: v.len(),
        });
    }
    for &leader in p.cycle_leaders() {
        let mut carry = v[leader];
        let mut j = p.apply(leader);
        while j != leader {
            std::mem::swap(&mut carry, &mut v[j]);
            j = p.apply(j);
        }
        v[leader] = carry;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::stride_perm;

    const TOL: f64 = 1e-12;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn close(a: Complex, b: Complex) -> bool {
        (a - b).norm() < TOL
    }

    #[test]
    fn omega_examples() {
        assert!(close(omega(1).unwrap(), c(1.0, 0.0)));
        assert!(close(omega(2).unwrap(), c(-1.0, 0.0)));
        assert!(close(omega(4).unwrap(), c(0.0, -1.0)));
        assert!(omega(0).is_err());
    }

    #[test]
    fn dft_matrix_examples() {
        let f2 = dft_matrix(2).unwrap();
        assert_eq!(f2.get(1, 1), c(-1.0, 0.0));
        assert_eq!(f2.get(0, 1), c(1.0, 0.0));
        assert_eq!(dft_matrix(1).unwrap(), DenseMatrix::identity(1));
        let f4 = dft_matrix(4).unwrap();
        let row: Vec<_> = (0..4).map(|l| f4.get(1, l)).collect();
        assert_eq!(row, vec![c(1.0, 0.0), c(0.0, -1.0), c(-1.0, 0.0), c(0.0, 1.0)]);
        assert!(dft_matrix(0).is_err());
        let f12 = dft_matrix(12).unwrap();
        assert_eq!(f12.max_abs_diff(&f12.transpose()), 0.0);
    }

    #[test]
    fn twiddle_w_examples() {
        let w = twiddle_w(4, 2).unwrap();
        assert_eq!(w.values(), &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, -1.0)]);
        assert!(twiddle_w(7, 7).unwrap().is_identity());
        let w6 = twiddle_w(6, 3).unwrap();
        assert_eq!(w6.exponent(5), (2, 6));
        assert!(close(w6.values()[5], omega(6).unwrap().powu(2)));
        assert!(twiddle_w(6, 4).is_err());
    }

    #[test]
    fn twiddle_v_examples() {
        let v = twiddle_v(2, 2, 1).unwrap();
        assert_eq!(v, twiddle_w(4, 2).unwrap());
        assert!(twiddle_v(1, 3, 5).unwrap().is_identity());
        let v222 = twiddle_v(2, 2, 2).unwrap();
        // (i, j, l) = (1, 1, 1) sits at (1·2 + 1)·2 + 1 = 7
        assert_eq!(v222.exponent(7), (3, 8));
        assert!(close(v222.values()[7], omega(8).unwrap().powu(3)));
        assert!(twiddle_v(0, 1, 1).is_err());
    }

    #[test]
    fn stage_twiddle_examples() {
        let a = RadixTuple::new(vec![2, 2]).unwrap();
        assert!(stage_twiddle_dit(&a, 0).unwrap().is_identity());
        assert_eq!(stage_twiddle_dit(&a, 1).unwrap(), twiddle_w(4, 2).unwrap());
        assert!(stage_twiddle_dit(&a, 2).is_err());
        assert!(stage_twiddle_dif(&a, 1).unwrap().is_identity());
        assert_eq!(stage_twiddle_dif(&a, 0).unwrap(), twiddle_w(4, 2).unwrap());
        assert!(stage_twiddle_difw(&a, 0).unwrap().is_identity());
        assert_eq!(
            stage_twiddle_difw(&a, 1).unwrap().values(),
            twiddle_w(4, 2).unwrap().values()
        );
        assert!(stage_twiddle_difw(&a, 2).is_err());
    }

    #[test]
    fn dit_tiling() {
        let a = RadixTuple::new(vec![3, 2, 2]).unwrap();
        let d = stage_twiddle_dit(&a, 1).unwrap();
        let tile = twiddle_w(4, 2).unwrap();
        for b in 0..3 {
            for r in 0..4 {
                assert_eq!(d.values()[b * 4 + r], tile.values()[r]);
            }
        }
    }

    #[test]
    fn dif_twiddle_mirrors_dit() {
        let beta = RadixTuple::new(vec![4, 3, 2, 5]).unwrap();
        let alpha = beta.reversed();
        let kk = beta.last_stage();
        for k in 0..=kk {
            assert_eq!(
                stage_twiddle_dif(&beta, kk - k).unwrap(),
                stage_twiddle_dit(&alpha, k).unwrap()
            );
        }
    }

    #[test]
    fn permutation_matrix() {
        assert_eq!(
            dense_of_permutation(&IndexPermutation::identity(5)),
            DenseMatrix::identity(5)
        );
        let m = dense_of_permutation(&stride_perm(4, 2).unwrap());
        let one = c(1.0, 0.0);
        assert_eq!(m.get(0, 0), one);
        assert_eq!(m.get(2, 1), one);
        assert_eq!(m.get(1, 2), one);
        assert_eq!(m.get(3, 3), one);
        for i in 0..4 {
            let row: Complex = (0..4).map(|j| m.get(i, j)).sum();
            let col: Complex = (0..4).map(|j| m.get(j, i)).sum();
            assert_eq!(row, one);
            assert_eq!(col, one);
        }
    }

    #[test]
    fn inplace_application_matches_dense() {
        let p = stride_perm(12, 3).unwrap();
        let v: Vec<Complex> = (0..12).map(|i| c(i as f64, -(i as f64) * 0.5)).collect();
        let mut w = v.clone();
        apply_permutation_inplace(&mut w, &p).unwrap();
        assert_eq!(w, dense_of_permutation(&p).matvec(&v).unwrap());
        apply_permutation_inplace(&mut w, &p.inverse()).unwrap();
        assert_eq!(w, v);

        let mut u = v.clone();
        apply_diagonal_inplace(&mut u, &TwiddleDiagonal::identity(12)).unwrap();
        assert_eq!(u, v);
        assert!(apply_diagonal_inplace(&mut u, &TwiddleDiagonal::identity(3)).is_err());
        assert!(apply_permutation_inplace(&mut u, &IndexPermutation::identity(3)).is_err());
    }

    #[test]
    fn matmul_shape_mismatch() {
        let a = DenseMatrix::identity(3);
        let b = DenseMatrix::identity(4);
        assert!(a.matmul(&b).is_err());
        assert!(a.matvec(&[c(0.0, 0.0); 2]).is_err());
    }

    #[test]
    fn kron_layout() {
        let a = DenseMatrix::from_fn(2, 2, |r, c| Complex::new((r * 2 + c) as f64, 0.0));
        let i2 = DenseMatrix::identity(2);
        let k = i2.kron(&a);
        assert_eq!(k.get(2, 3), a.get(0, 1));
        assert_eq!(k.get(0, 2), c(0.0, 0.0));
        let k2 = a.kron(&i2);
        assert_eq!(k2.get(1, 3), a.get(0, 1));
    }
}
