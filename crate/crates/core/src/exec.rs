//! In-place execution of an [`FftPlan`].
//!
//! A stage `P⁻¹ (I ⊗ F_r) T P` is never permuted physically. Butterfly `b`
//! gathers its `r` operands from addresses `P⁻¹(b·r + w)`, twiddles and
//! transforms them in a scratch block, and scatters the results back to the
//! same addresses, which is the access pattern of a one-butterfly-per-clock
//! in-place accelerator. Only the digit reversal moves data, by cycle
//! following from leaders stored in the plan.
//!
//! Auxiliary storage per [`execute`] call is `2 · max_radix` samples.

use crate::error::{Error, Result};
use crate::operators::{apply_permutation_inplace, root_of_unity, DenseMatrix};
use crate::plan::{FftPlan, IoPermPosition, StagePlan, TwiddlePosition};
use crate::Complex;

const SIN_2PI_3: f64 = 0.866_025_403_784_438_6;

/// A radix-`r` DFT `F_r`, kept as a dense row-major matrix. Radices 2, 3
/// and 4 use specialized formulas.
#[derive(Debug, Clone, PartialEq)]
pub struct ButterflyKernel {
    radix: usize,
    matrix: Vec<Complex>,
}

impl ButterflyKernel {
    pub fn new(radix: usize) -> Result<Self> {
        if radix == 0 {
            return Err(Error::domain("butterfly radix must be at least 1"));
        }
        let matrix = (0..radix * radix)
            .map(|i| root_of_unity((i / radix) * (i % radix), radix))
            .collect();
        Ok(Self { radix, matrix })
    }

    pub fn radix(&self) -> usize {
        self.radix
    }

    pub fn matrix(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.radix, self.radix, |r, c| self.matrix[r * self.radix + c])
    }

    /// `out = F_r · input`; both slices have length `r`.
    #[inline]
    fn apply_into(&self, input: &[Complex], out: &mut [Complex]) {
        match self.radix {
            1 => out[0] = input[0],
            2 => {
                out[0] = input[0] + input[1];
                out[1] = input[0] - input[1];
            }
            3 => {
                let (a, b, c) = (input[0], input[1], input[2]);
                let s = b + c;
                let t = a - s * 0.5;
                let d = b - c;
                // −i·sin(2π/3)·(b − c)
                let u = Complex::new(d.im * SIN_2PI_3, -d.re * SIN_2PI_3);
                out[0] = a + s;
                out[1] = t + u;
                out[2] = t - u;
            }
            4 => {
                let (a, b, c, d) = (input[0], input[1], input[2], input[3]);
                let s0 = a + c;
                let s1 = a - c;
                let t0 = b + d;
                let t1 = b - d;
                let mi_t1 = Complex::new(t1.im, -t1.re);
                out[0] = s0 + t0;
                out[1] = s1 + mi_t1;
                out[2] = s0 - t0;
                out[3] = s1 - mi_t1;
            }
            r => {
                for (k, o) in out.iter_mut().enumerate() {
                    let row = &self.matrix[k * r..(k + 1) * r];
                    let mut acc = Complex::new(0.0, 0.0);
                    for (w, x) in row.iter().zip(input) {
                        acc += w * x;
                    }
                    *o = acc;
                }
            }
        }
    }
}

/// `F_r · block` for one butterfly.
pub fn butterfly_apply(kernel: &ButterflyKernel, block: &[Complex]) -> Result<Vec<Complex>> {
    if block.len() != kernel.radix {
        return Err(Error::LengthMismatch {
            expected: kernel.radix,
            actual: block.len(),
        });
    }
    let mut out = vec![Complex::new(0.0, 0.0); kernel.radix];
    kernel.apply_into(block, &mut out);
    Ok(out)
}

fn check_len(expected: usize, buf: &[Complex]) -> Result<()> {
    if buf.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: buf.len(),
        });
    }
    Ok(())
}

/// Replaces `buf` with `F_N · buf`.
pub fn execute(plan: &FftPlan, buf: &mut [Complex]) -> Result<()> {
    check_len(plan.len(), buf)?;
    let mut scratch = vec![Complex::new(0.0, 0.0); 2 * plan.max_radix()];
    if plan.io_perm_position() == IoPermPosition::InputSide {
        apply_permutation_inplace(buf, plan.io_perm())?;
    }
    for stage in plan.stages() {
        run_stage(stage, buf, &mut scratch);
    }
    if plan.io_perm_position() == IoPermPosition::OutputSide {
        apply_permutation_inplace(buf, plan.io_perm())?;
    }
    Ok(())
}

/// Applies a single stage factor in place.
pub fn execute_stage(stage: &StagePlan, buf: &mut [Complex]) -> Result<()> {
    check_len(stage.len(), buf)?;
    let mut scratch = vec![Complex::new(0.0, 0.0); 2 * stage.radix()];
    run_stage(stage, buf, &mut scratch);
    Ok(())
}

fn run_stage(stage: &StagePlan, buf: &mut [Complex], scratch: &mut [Complex]) {
    let r = stage.radix();
    let (block, out) = scratch[..2 * r].split_at_mut(r);
    let addr = stage.post_perm();
    let twiddle = stage.twiddle().values();
    let skip_twiddle = stage.twiddle().is_identity();
    for b in 0..stage.butterfly_count() {
        let base = b * r;
        for (w, x) in block.iter_mut().enumerate() {
            *x = buf[addr.apply(base + w)];
        }
        if !skip_twiddle && stage.twiddle_position() == TwiddlePosition::BeforeButterfly {
            for (x, t) in block.iter_mut().zip(&twiddle[base..base + r]) {
                *x *= t;
            }
        }
        stage.kernel().apply_into(block, out);
        if !skip_twiddle && stage.twiddle_position() == TwiddlePosition::AfterButterfly {
            for (x, t) in out.iter_mut().zip(&twiddle[base..base + r]) {
                *x *= t;
            }
        }
        for (w, y) in out.iter().enumerate() {
            buf[addr.apply(base + w)] = *y;
        }
    }
}

/// Direct `O(N²)` DFT, `y_k = Σ_l ω_N^{kl} x_l`, with Kahan-compensated sums.
pub fn dft_oracle(x: &[Complex]) -> Result<Vec<Complex>> {
    let n = x.len();
    if n == 0 {
        return Err(Error::domain("DFT of an empty vector"));
    }
    let roots: Vec<Complex> = (0..n).map(|e| root_of_unity(e, n)).collect();
    Ok((0..n)
        .map(|k| {
            let (mut sum, mut comp) = (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
            let mut e = 0usize;
            for xl in x {
                let term = roots[e] * xl - comp;
                let next = sum + term;
                comp = (next - sum) - term;
                sum = next;
                e += k;
                if e >= n {
                    e %= n;
                }
            }
            sum
        })
        .collect())
}

/// `max_i |got_i − want_i| / max_i |want_i|`; absolute error when `want` is zero.
pub fn relative_linf_error(got: &[Complex], want: &[Complex]) -> f64 {
    if got.len() != want.len() {
        return f64::INFINITY;
    }
    let diff = got
        .iter()
        .zip(want)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let scale = want.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::RadixTuple;
    use crate::operators::dft_matrix;
    use crate::plan::PlanKind;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn plan(kind: PlanKind, r: &[usize]) -> FftPlan {
        FftPlan::new(kind, RadixTuple::new(r.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn butterfly_examples() {
        let k2 = ButterflyKernel::new(2).unwrap();
        assert_eq!(
            butterfly_apply(&k2, &[c(3.0, 1.0), c(1.0, -1.0)]).unwrap(),
            vec![c(4.0, 0.0), c(2.0, 2.0)]
        );
        let k4 = ButterflyKernel::new(4).unwrap();
        assert_eq!(
            butterfly_apply(&k4, &[c(1.0, 0.0); 4]).unwrap(),
            vec![c(4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]
        );
        let k3 = ButterflyKernel::new(3).unwrap();
        assert_eq!(
            butterfly_apply(&k3, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap(),
            vec![c(1.0, 0.0); 3]
        );
        assert!(butterfly_apply(&k3, &[c(1.0, 0.0)]).is_err());
        assert!(ButterflyKernel::new(0).is_err());
    }

    #[test]
    fn specialized_kernels_match_dense() {
        for r in 1..=9 {
            let kernel = ButterflyKernel::new(r).unwrap();
            assert_eq!(kernel.matrix(), dft_matrix(r).unwrap());
            let x: Vec<Complex> = (0..r).map(|i| c(i as f64 + 0.5, 1.0 - i as f64 * 0.25)).collect();
            let want = dft_matrix(r).unwrap().matvec(&x).unwrap();
            let got = butterfly_apply(&kernel, &x).unwrap();
            assert!(relative_linf_error(&got, &want) < 1e-15, "radix {r}");
        }
    }

    #[test]
    fn impulse_and_constant() {
        for kind in PlanKind::ALL {
            let p = plan(kind, &[3, 4, 2]);
            let mut x = vec![c(0.0, 0.0); 24];
            x[0] = c(1.0, 0.0);
            execute(&p, &mut x).unwrap();
            assert!(x.iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-14));

            let p = plan(kind, &[2, 2]);
            let mut x = vec![c(1.0, 0.0); 4];
            execute(&p, &mut x).unwrap();
            assert!(relative_linf_error(&x, &[c(4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]) < 1e-15);
        }
    }

    #[test]
    fn length_mismatch() {
        let p = plan(PlanKind::Dit, &[2, 2]);
        let mut x = vec![c(0.0, 0.0); 5];
        assert!(matches!(execute(&p, &mut x), Err(Error::LengthMismatch { expected: 4, actual: 5 })));
        assert!(execute_stage(&p.stages()[0], &mut x).is_err());
    }

    #[test]
    fn trivial_stage_example() {
        // stage 0 of DIT (2,2): identity perms and twiddle, r = 2
        let p = plan(PlanKind::Dit, &[2, 2]);
        let mut x = vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        execute_stage(&p.stages()[0], &mut x).unwrap();
        assert_eq!(x, vec![c(1.0, 0.0); 4]);

        let p = plan(PlanKind::Dit, &[1]);
        let mut x = vec![c(2.5, -1.0)];
        execute_stage(&p.stages()[0], &mut x).unwrap();
        assert_eq!(x, vec![c(2.5, -1.0)]);
    }

    #[test]
    fn stages_match_their_dense_form() {
        for kind in PlanKind::ALL {
            let p = plan(kind, &[3, 2, 5]);
            let v: Vec<Complex> = (0..30).map(|i| c((i * 7 % 11) as f64, (i % 4) as f64 - 1.5)).collect();
            for s in p.stages() {
                let want = s.to_dense().unwrap().matvec(&v).unwrap();
                let mut got = v.clone();
                execute_stage(s, &mut got).unwrap();
                assert!(relative_linf_error(&got, &want) < 1e-14);
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let mut imp = vec![c(0.0, 0.0); 7];
        imp[0] = c(1.0, 0.0);
        assert_eq!(dft_oracle(&imp).unwrap(), vec![c(1.0, 0.0); 7]);
        assert_eq!(
            dft_oracle(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap(),
            vec![c(2.0, 0.0), c(0.0, 0.0)]
        );
        assert!(dft_oracle(&[]).is_err());
    }

    #[test]
    fn oracle_parseval() {
        let x: Vec<Complex> = (0..50).map(|i| c((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let y = dft_oracle(&x).unwrap();
        let ex: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        let ey: f64 = y.iter().map(|z| z.norm_sqr()).sum();
        assert!((ey - 50.0 * ex).abs() / (50.0 * ex) < 1e-9);
    }

    #[test]
    fn relative_error_edge_cases() {
        assert_eq!(relative_linf_error(&[c(0.0, 0.0)], &[c(0.0, 0.0)]), 0.0);
        assert_eq!(relative_linf_error(&[c(1.0, 0.0)], &[]), f64::INFINITY);
    }
}
