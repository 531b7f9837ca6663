//! Regular mixed-radix DFT factorization for in-place FFT accelerators.
//!
//! The crate factors the DFT matrix `F_N` into stages of the form
//! `P⁻¹ (I ⊗ F_r) T P`, where `P` is a block stride permutation, `T` a
//! twiddle diagonal and `F_r` a radix-`r` butterfly. Three plan kinds are
//! provided:
//!
//! * [`PlanKind::Dit`]: digit-reversed input, twiddles before the butterfly.
//! * [`PlanKind::Dif`]: digit-reversed output, twiddles after the butterfly.
//! * [`PlanKind::DifW`]: digit-reversed output, twiddles moved before the
//!   butterfly so DIT and DIF share one datapath.
//!
//! Every operator has a dense-matrix realization in [`operators`], which the
//! [`verify`] suite uses to check the factorization identities, and
//! [`accel`] maps each stage onto one-butterfly-per-clock bank accesses.
//!
//! ```
//! use mrfft::{exec, plan, Complex, PlanKind, RadixTuple};
//!
//! let radices = RadixTuple::new(vec![3, 4, 2]).unwrap();
//! let plan = plan::FftPlan::new(PlanKind::DifW, radices).unwrap();
//! let mut data: Vec<Complex> = (0..24).map(|i| Complex::new(i as f64, 0.0)).collect();
//! let reference = exec::dft_oracle(&data).unwrap();
//! exec::execute(&plan, &mut data).unwrap();
//! assert!(exec::relative_linf_error(&data, &reference) < 1e-12);
//! ```

pub mod accel;
mod error;
pub mod exec;
pub mod index;
pub mod operators;
pub mod plan;
pub mod vecfile;
pub mod verify;

pub use error::{Error, Result};
pub use index::{DigitVector, IndexPermutation, RadixTuple};
pub use operators::{DenseMatrix, TwiddleDiagonal};
pub use plan::{FftPlan, PlanKind};

/// Double-precision complex sample, the element type of every vector and matrix.
pub type Complex = num_complex::Complex64;
