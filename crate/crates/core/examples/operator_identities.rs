//! Builds the stride, twiddle and DFT operators as dense matrices and
//! checks the identities that the factorizations are assembled from.

use mrfft::index::stride_perm;
use mrfft::operators::{dense_of_permutation, dft_matrix, twiddle_w};
use mrfft::{DenseMatrix, Result};

fn main() -> Result<()> {
    let (m, k) = (3, 4);
    let n = m * k;
    let l_nm = dense_of_permutation(&stride_perm(n, m)?);
    let l_nk = dense_of_permutation(&stride_perm(n, k)?);
    let w = DenseMatrix::from_diagonal(&twiddle_w(n, m)?);
    let twiddle_k = twiddle_w(n, k)?;

    println!("W^{n}_{k} exponents (numerator over {}):", twiddle_k.denominator());
    for i in 0..twiddle_k.len() {
        let (num, den) = twiddle_k.exponent(i);
        print!("{num}/{den} ");
    }
    println!();

    // F_n = L^n_k (I_k ⊗ F_m) W^n_m (F_k ⊗ I_m)
    let split = l_nk
        .matmul(&DenseMatrix::identity(k).kron(&dft_matrix(m)?))?
        .matmul(&w)?
        .matmul(&dft_matrix(k)?.kron(&DenseMatrix::identity(m)))?;
    let err = split.max_abs_diff(&dft_matrix(n)?);
    println!("splitting rule for n = {n}: max |error| = {err:.2e}");

    // L^n_m (I_m ⊗ F_k) L^n_k = F_k ⊗ I_m
    let lhs = l_nm
        .matmul(&DenseMatrix::identity(m).kron(&dft_matrix(k)?))?
        .matmul(&l_nk)?;
    let rhs = dft_matrix(k)?.kron(&DenseMatrix::identity(m));
    println!("stride commutation: max |error| = {:.2e}", lhs.max_abs_diff(&rhs));

    let unitary = dft_matrix(n)?
        .matmul(&dft_matrix(n)?.conj().transpose())?
        .max_abs_diff(&DenseMatrix::identity(n).scale((n as f64).into()));
    println!("F F^H = n I: max |error| = {unitary:.2e}");
    Ok(())
}
