//! Dense-matrix and oracle checks of every operator identity the
//! factorization relies on, plus end-to-end executor checks.
//!
//! Each `check_*` function is independent and returns a [`CheckOutcome`];
//! [`run`] runs the full suite for a size bound and merges the results in
//! name order.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exec::{dft_oracle, execute, relative_linf_error};
use crate::index::{
    digit_reverse_perm, stage_perm_a, stage_perm_b, stride_perm, RadixTuple,
};
use crate::operators::{
    dense_of_permutation, dft_matrix, rearranged_twiddle, stage_twiddle_dif, stage_twiddle_difw,
    stage_twiddle_dit, twiddle_w, DenseMatrix,
};
use crate::plan::{assemble_dense, factorize, FactorPolicy, FftPlan, PlanKind};
use crate::Complex;

/// Entrywise tolerance for dense identities.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Relative L∞ tolerance for end-to-end transforms.
pub const TRANSFORM_TOL: f64 = 1e-9;
/// Relative L∞ tolerance between plan kinds on the same input.
pub const CROSS_KIND_TOL: f64 = 1e-10;

/// Size ceilings of the individual suites.
pub const IDENTITY_CAP: usize = 64;
pub const ASSEMBLY_CAP: usize = 256;
pub const ROTATION_CAP: usize = 1024;
pub const EXECUTOR_CAP: usize = 4096;

/// Radices the factorization suites draw tuples from.
pub const FACTORIZATION_RADICES: [usize; 5] = [2, 3, 4, 5, 8];
/// Radices the digit-reversal recursion suite draws from.
pub const RECURSION_RADICES: [usize; 4] = [2, 3, 4, 5];

/// Deliberate corruption of one plan kind, used to show the harness fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fault {
    pub kind: PlanKind,
    pub stage: usize,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub max_n: usize,
    pub kinds: Vec<PlanKind>,
    pub seed: u64,
    pub identity_tol: f64,
    pub transform_tol: f64,
    pub trials: usize,
    pub fault: Option<Fault>,
    pub parallel: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_n: IDENTITY_CAP,
            kinds: PlanKind::ALL.to_vec(),
            seed: 0x5EED,
            identity_tol: IDENTITY_TOL,
            transform_tol: TRANSFORM_TOL,
            trials: 3,
            fault: None,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub failure: Option<String>,
}

impl CheckOutcome {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            cases: 0,
            max_error: 0.0,
            tolerance,
            failure: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    /// Records one case; the first case over tolerance becomes the failure.
    fn record(&mut self, error: f64, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if error > self.max_error || error.is_nan() {
            self.max_error = if error.is_nan() { f64::INFINITY } else { error };
        }
        if self.failure.is_none() && (error.is_nan() || error > self.tolerance) {
            self.failure = Some(describe());
        }
    }

    /// Records an exact (integer) comparison.
    fn record_exact(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.record(if ok { 0.0 } else { 1.0 }, describe);
    }

    fn record_error(&mut self, err: crate::Error) {
        self.record(f64::INFINITY, || format!("construction failed: {err}"));
    }

    pub fn line(&self) -> String {
        format!(
            "{:<5} {:<34} cases={:<6} max_error={:.3e} tol={:.0e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.max_error,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(s, "{}", c.line());
            if let Some(f) = &c.failure {
                let _ = writeln!(s, "      counterexample: {f}");
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        let _ = writeln!(
            s,
            "{} checks, {} passed, {} failed",
            self.checks.len(),
            self.checks.len() - failed,
            failed
        );
        s
    }
}

fn divisors(n: usize) -> impl Iterator<Item = usize> {
    (1..=n).filter(move |k| n.is_multiple_of(*k))
}

fn dense_stride(n: usize, k: usize) -> DenseMatrix {
    dense_of_permutation(&stride_perm(n, k).expect("k divides n"))
}

fn eye(n: usize) -> DenseMatrix {
    DenseMatrix::identity(n)
}

fn dft(n: usize) -> DenseMatrix {
    dft_matrix(n).expect("n ≥ 1")
}

/// Every ordered tuple over `radices` whose product is at most `max`.
pub fn tuples_up_to(max: usize, radices: &[usize]) -> Vec<RadixTuple> {
    fn extend(prefix: &mut Vec<usize>, product: usize, max: usize, radices: &[usize], out: &mut Vec<Vec<usize>>) {
        for &r in radices {
            if product * r <= max {
                prefix.push(r);
                out.push(prefix.clone());
                extend(prefix, product * r, max, radices, out);
                prefix.pop();
            }
        }
    }
    let mut raw = Vec::new();
    extend(&mut Vec::new(), 1, max, radices, &mut raw);
    raw.into_iter()
        .map(|r| RadixTuple::new(r).expect("nonzero radices"))
        .collect()
}

/// Stride permutations are mutually inverse and transposed, and twiddle
/// diagonals conjugate into each other: `W^n_m = L^n_m W^n_k L^n_k`.
pub fn check_stride_twiddle_conjugation(max_n: usize, tol: f64) -> CheckOutcome {
    let mut out = CheckOutcome::new("stride_and_twiddle_conjugation", tol);
    for n in 1..=max_n {
        for k in divisors(n) {
            let m = n / k;
            let lk = dense_stride(n, k);
            let lm = dense_stride(n, m);
            out.record_exact(lk == lm.transpose(), || format!("L^{n}_{k} ≠ (L^{n}_{m})ᵀ"));
            let prod = lk.matmul(&lm).expect("square");
            out.record_exact(prod == eye(n), || format!("L^{n}_{k} L^{n}_{m} ≠ I"));
            let wm = DenseMatrix::from_diagonal(&twiddle_w(n, m).expect("m | n"));
            let wk = DenseMatrix::from_diagonal(&twiddle_w(n, k).expect("k | n"));
            let rhs = lm.matmul(&wk).and_then(|x| x.matmul(&lk)).expect("square");
            out.record(wm.max_abs_diff(&rhs), || {
                format!("W^{n}_{m} ≠ L^{n}_{m} W^{n}_{k} L^{n}_{k}")
            });
        }
    }
    out
}

/// `L^n_k (I_k ⊗ F_m) L^n_m = F_m ⊗ I_k`.
pub fn check_stride_commutation(max_n: usize, tol: f64) -> CheckOutcome {
    let mut out = CheckOutcome::new("stride_commutes_kronecker", tol);
    for n in 1..=max_n {
        for k in divisors(n) {
            let m = n / k;
            let lhs = dense_stride(n, k)
                .matmul(&eye(k).kron(&dft(m)))
                .and_then(|x| x.matmul(&dense_stride(n, m)))
                .expect("square");
            let rhs = dft(m).kron(&eye(k));
            out.record(lhs.max_abs_diff(&rhs), || format!("n={n} k={k}"));
        }
    }
    out
}

/// `F_n = L^n_k (I_k ⊗ F_m) W^n_m (F_k ⊗ I_m)`.
pub fn check_splitting_rule(max_n: usize, tol: f64) -> CheckOutcome {
    let mut out = CheckOutcome::new("splitting_rule", tol);
    for n in 1..=max_n {
        let f = dft(n);
        for k in divisors(n) {
            let m = n / k;
            let w = DenseMatrix::from_diagonal(&twiddle_w(n, m).expect("m | n"));
            let rhs = dense_stride(n, k)
                .matmul(&eye(k).kron(&dft(m)))
                .and_then(|x| x.matmul(&w))
                .and_then(|x| x.matmul(&dft(k).kron(&eye(m))))
                .expect("square");
            out.record(f.max_abs_diff(&rhs), || format!("n={n} k={k}"));
        }
    }
    out
}

/// `F_n = L^n_k (I_k ⊗ F_m) W^n_m L^n_m (I_m ⊗ F_k) L^n_k`.
pub fn check_splitting_rule_stride_form(max_n: usize, tol: f64) -> CheckOutcome {
    let mut out = CheckOutcome::new("splitting_rule_stride_form", tol);
    for n in 1..=max_n {
        let f = dft(n);
        for k in divisors(n) {
            let m = n / k;
            let w = DenseMatrix::from_diagonal(&twiddle_w(n, m).expect("m | n"));
            let rhs = dense_stride(n, k)
                .matmul(&eye(k).kron(&dft(m)))
                .and_then(|x| x.matmul(&w))
                .and_then(|x| x.matmul(&dense_stride(n, m)))
                .and_then(|x| x.matmul(&eye(m).kron(&dft(k))))
                .and_then(|x| x.matmul(&dense_stride(n, k)))
                .expect("square");
            out.record(f.max_abs_diff(&rhs), || format!("n={n} k={k}"));
        }
    }
    out
}

/// `S_{(M,α)} = (I_M ⊗ S_α) L^{NM}_N` and `S_{(α,M)} = L^{NM}_M (I_M ⊗ S_α)`,
/// compared as integer index maps.
pub fn check_digit_reversal_recursion(max_size: usize, radices: &[usize]) -> CheckOutcome {
    let mut out = CheckOutcome::new("digit_reversal_recursion", 0.0);
    for alpha in tuples_up_to(max_size, radices) {
        let n = alpha.size();
        let s_alpha = digit_reverse_perm(&alpha);
        for &m in radices {
            if n * m > max_size {
                continue;
            }
            let tiled = s_alpha.tiled(m);
            let outer = digit_reverse_perm(&alpha.prepend(m).expect("valid"));
            let via = tiled.compose(&stride_perm(n * m, n).expect("n | nm")).expect("same size");
            out.record_exact(outer == via, || {
                format!("S_(M,α) mismatch for M={m} α={:?}", alpha.as_slice())
            });
            let inner = digit_reverse_perm(&alpha.append(m).expect("valid"));
            let via = stride_perm(n * m, m).expect("m | nm").compose(&tiled).expect("same size");
            out.record_exact(inner == via, || {
                format!("S_(α,M) mismatch for M={m} α={:?}", alpha.as_slice())
            });
        }
    }
    out
}

/// Random radix tuple with product at most `max_size`.
fn random_tuple(rng: &mut ChaCha8Rng, max_size: usize) -> RadixTuple {
    let mut radices = Vec::new();
    let mut product = 1;
    let len = rng.gen_range(1..=6);
    for _ in 0..len {
        let r = rng.gen_range(1..=8);
        if product * r > max_size {
            break;
        }
        product *= r;
        radices.push(r);
    }
    if radices.is_empty() {
        radices.push(1);
    }
    RadixTuple::new(radices).expect("nonzero radices")
}

/// Numbering system `(n_K, …, n_{k+1}, n_0, n_1, …, n_k)`.
fn rotated_system(alpha: &RadixTuple, k: usize) -> RadixTuple {
    let kk = alpha.last_stage();
    let mut radices: Vec<usize> = ((k + 1)..=kk).rev().map(|j| alpha.radix(j)).collect();
    radices.extend((0..=k).map(|j| alpha.radix(j)));
    RadixTuple::new(radices).expect("permuted radices")
}

/// The DIT stage permutation `A_k` moves digit `p_k` of an index written in
/// the system `(n_K, …, n_k, n_0, …, n_{k−1})` to the least significant
/// position of the system `(n_K, …, n_{k+1}, n_0, …, n_k)`. Checked for every
/// index, every stage, and `tuples` random radix tuples.
pub fn check_stage_perm_digit_rotation(max_size: usize, tuples: usize, seed: u64) -> CheckOutcome {
    let mut out = CheckOutcome::new("stage_perm_digit_rotation", 0.0);
    if max_size == 0 {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..tuples {
        let alpha = random_tuple(&mut rng, max_size);
        let a0 = stage_perm_a(&alpha, 0).expect("stage 0 exists");
        out.record_exact(a0.is_identity(), || format!("A_0 not identity for {:?}", alpha.as_slice()));
        for k in 1..=alpha.last_stage() {
            let a = stage_perm_a(&alpha, k).expect("stage in range");
            let from = rotated_system(&alpha, k - 1);
            let to = rotated_system(&alpha, k);
            for n in 0..alpha.size() {
                let p = from.decode(n).expect("n < N");
                let expected = to.encode(&p.rotate_to_low(k).expect("k ≤ K")).expect("digits fit");
                let got = a.apply(n);
                out.record_exact(got == expected, || {
                    format!(
                        "α={:?} k={k} n={n}: A_k gives {got}, digit rotation gives {expected}",
                        alpha.as_slice()
                    )
                });
            }
        }
    }
    out
}

/// Dense stage factor rebuilt from the defining operators, used to locate
/// the stage at fault when a factorization fails.
fn defining_stage_dense(kind: PlanKind, radices: &RadixTuple, k: usize) -> Result<DenseMatrix> {
    let n = radices.size();
    let r = radices.radix(k);
    let (perm, twiddle) = match kind {
        PlanKind::Dit => (stage_perm_a(radices, k)?, stage_twiddle_dit(radices, k)?),
        PlanKind::Dif => (stage_perm_b(radices, k)?, stage_twiddle_dif(radices, k)?),
        PlanKind::DifW => (stage_perm_b(radices, k)?, stage_twiddle_difw(radices, k)?),
    };
    let p = dense_of_permutation(&perm);
    let bf = eye(n / r).kron(&dft_matrix(r)?);
    let t = DenseMatrix::from_diagonal(&twiddle);
    let middle = if kind == PlanKind::Dif { t.matmul(&bf)? } else { bf.matmul(&t)? };
    p.transpose().matmul(&middle)?.matmul(&p)
}

fn factorization_name(kind: PlanKind) -> &'static str {
    match kind {
        PlanKind::Dit => "factorization_dit",
        PlanKind::Dif => "factorization_dif",
        PlanKind::DifW => "factorization_difw",
    }
}

fn build_plan(kind: PlanKind, radices: &RadixTuple, fault: Option<Fault>) -> Result<FftPlan> {
    let mut plan = FftPlan::new(kind, radices.clone())?;
    if let Some(f) = fault.filter(|f| f.kind == kind && f.stage < plan.stages().len()) {
        plan.inject_twiddle_fault(f.stage)?;
    }
    Ok(plan)
}

/// The assembled plan product equals `F_N` for every tuple over `radices`
/// with `N ≤ max_n`.
pub fn check_factorization(
    kind: PlanKind,
    max_n: usize,
    radices: &[usize],
    tol: f64,
    fault: Option<Fault>,
) -> CheckOutcome {
    let mut out = CheckOutcome::new(factorization_name(kind), tol);
    let mut dft_by_size = std::collections::HashMap::new();
    for tuple in tuples_up_to(max_n, radices) {
        let plan = match build_plan(kind, &tuple, fault) {
            Ok(p) => p,
            Err(e) => {
                out.record_error(e);
                continue;
            }
        };
        let err = match assemble_dense(&plan) {
            Ok(m) => m.max_abs_diff(dft_by_size.entry(tuple.size()).or_insert_with(|| dft(tuple.size()))),
            Err(e) => {
                out.record_error(e);
                continue;
            }
        };
        out.record(err, || {
            let mut msg = format!("{kind} radices={:?} error={err:.3e}", tuple.as_slice());
            for (k, stage) in plan.stages().iter().enumerate() {
                let dev = match (stage.to_dense(), defining_stage_dense(kind, &tuple, k)) {
                    (Ok(a), Ok(b)) => a.max_abs_diff(&b),
                    _ => f64::INFINITY,
                };
                if dev > tol {
                    let _ = write!(msg, "; stage {k} deviates from its defining factor by {dev:.3e}");
                    break;
                }
            }
            msg
        });
    }
    out
}

/// `B_{k+1} B_k⁻¹ W̃_k = X_k B_{k+1} B_k⁻¹` where `X_k` is the rearranged
/// twiddle, for each `0 ≤ k < K`.
pub fn check_twiddle_rearrangement(max_n: usize, radices: &[usize], tol: f64) -> CheckOutcome {
    let mut out = CheckOutcome::new("difw_twiddle_rearrangement", tol);
    for beta in tuples_up_to(max_n, radices) {
        for k in 0..beta.last_stage() {
            let result = (|| -> Result<f64> {
                let b_next = dense_of_permutation(&stage_perm_b(&beta, k + 1)?);
                let b_inv = dense_of_permutation(&stage_perm_b(&beta, k)?.inverse());
                let w = DenseMatrix::from_diagonal(&stage_twiddle_dif(&beta, k)?);
                let x = DenseMatrix::from_diagonal(&rearranged_twiddle(&beta, k)?);
                let moved = b_next.matmul(&b_inv)?;
                let lhs = moved.matmul(&w)?;
                let rhs = x.matmul(&moved)?;
                Ok(lhs.max_abs_diff(&rhs))
            })();
            match result {
                Ok(err) => out.record(err, || format!("β={:?} k={k}", beta.as_slice())),
                Err(e) => out.record_error(e),
            }
        }
    }
    out
}

/// DIF stage `k` of `β` coincides with DIT stage `K − k` of `β⋆`.
pub fn check_dif_dit_duality(max_n: usize, radices: &[usize]) -> CheckOutcome {
    let mut out = CheckOutcome::new("dif_dit_duality", 0.0);
    for beta in tuples_up_to(max_n, radices) {
        let dif = FftPlan::new(PlanKind::Dif, beta.clone()).expect("plans");
        let dit = FftPlan::new(PlanKind::Dit, beta.reversed()).expect("plans");
        let kk = beta.last_stage();
        for k in 0..=kk {
            let a = &dif.stages()[k];
            let b = &dit.stages()[kk - k];
            let same = a.pre_perm() == b.pre_perm() && a.twiddle() == b.twiddle();
            out.record_exact(same, || format!("β={:?} stage {k}", beta.as_slice()));
        }
        out.record_exact(dif.io_perm() == &dit.io_perm().inverse(), || {
            format!("β={:?}: S_β ≠ S_β⋆⁻¹", beta.as_slice())
        });
    }
    out
}

/// `F_n · conj(F_n) = n · I`.
pub fn check_dft_unitarity(max_n: usize, tol: f64) -> CheckOutcome {
    let mut out = CheckOutcome::new("dft_unitarity", tol);
    for n in 1..=max_n {
        let f = dft(n);
        let prod = f.matmul(&f.conj()).expect("square");
        let want = eye(n).scale(Complex::new(n as f64, 0.0));
        out.record(prod.max_abs_diff(&want) / n as f64, || format!("n={n}"));
    }
    out
}

/// All stage twiddles of all plans have unit modulus.
pub fn check_twiddle_unit_modulus(max_n: usize, radices: &[usize], tol: f64) -> CheckOutcome {
    let mut out = CheckOutcome::new("twiddle_unit_modulus", tol);
    for tuple in tuples_up_to(max_n, radices) {
        for kind in PlanKind::ALL {
            let plan = FftPlan::new(kind, tuple.clone()).expect("plans");
            for s in plan.stages() {
                out.record(s.twiddle().max_modulus_deviation(), || {
                    format!("{kind} {:?} stage {}", tuple.as_slice(), s.stage())
                });
            }
        }
    }
    out
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex> {
    (0..n)
        .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// Greedy prime factorization, plus a second grouping of the same primes
/// into pairs when that gives a different tuple.
pub fn executor_cases(sizes: &[usize]) -> Vec<RadixTuple> {
    let mut cases = Vec::new();
    for &n in sizes {
        let greedy = match factorize(n, &FactorPolicy::GreedyAscPrimes) {
            Ok(t) => t,
            Err(_) => continue,
        };
        let paired: Vec<usize> = greedy
            .as_slice()
            .chunks(2)
            .map(|c| c.iter().product())
            .collect();
        let paired = RadixTuple::new(paired).expect("nonzero");
        let distinct = paired != greedy;
        cases.push(greedy);
        if distinct {
            cases.push(paired);
        }
    }
    cases
}

/// Sizes exercised by the default suite: every `N ≤ 64` and a spread of
/// larger composite and prime-power lengths.
pub fn default_executor_sizes(max_n: usize) -> Vec<usize> {
    const LARGE: [usize; 16] = [
        72, 96, 128, 210, 243, 256, 360, 500, 512, 625, 729, 1000, 1024, 2048, 3125, 4096,
    ];
    (1..=max_n.min(64))
        .chain(LARGE.into_iter().filter(|&n| n <= max_n.min(EXECUTOR_CAP)))
        .collect()
}

/// Executor output against the direct DFT, `trials` random inputs per case
/// and kind, relative L∞ error.
pub fn check_executor(
    cases: &[RadixTuple],
    kinds: &[PlanKind],
    trials: usize,
    seed: u64,
    tol: f64,
    fault: Option<Fault>,
) -> CheckOutcome {
    let mut out = CheckOutcome::new("executor_vs_oracle", tol);
    for (ci, tuple) in cases.iter().enumerate() {
        let plans: Vec<(PlanKind, Result<FftPlan>)> = kinds
            .iter()
            .map(|&k| (k, build_plan(k, tuple, fault)))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (ci as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        for trial in 0..trials {
            let x = random_vector(&mut rng, tuple.size());
            let want = dft_oracle(&x).expect("nonempty");
            for (kind, plan) in &plans {
                let plan = match plan {
                    Ok(p) => p,
                    Err(e) => {
                        out.record_error(e.clone());
                        continue;
                    }
                };
                let mut y = x.clone();
                if let Err(e) = execute(plan, &mut y) {
                    out.record_error(e);
                    continue;
                }
                let err = relative_linf_error(&y, &want);
                out.record(err, || {
                    format!("{kind} radices={:?} trial {trial}: error {err:.3e}", tuple.as_slice())
                });
            }
        }
    }
    out
}

/// The three plan kinds agree with each other on identical inputs.
pub fn check_cross_kind(cases: &[RadixTuple], trials: usize, seed: u64, tol: f64) -> CheckOutcome {
    let mut out = CheckOutcome::new("cross_kind_agreement", tol);
    for (ci, tuple) in cases.iter().enumerate() {
        let plans: Vec<FftPlan> = PlanKind::ALL
            .iter()
            .map(|&k| FftPlan::new(k, tuple.clone()).expect("plans"))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(ci as u64));
        for _ in 0..trials {
            let x = random_vector(&mut rng, tuple.size());
            let outputs: Vec<Vec<Complex>> = plans
                .iter()
                .map(|p| {
                    let mut y = x.clone();
                    execute(p, &mut y).expect("length matches");
                    y
                })
                .collect();
            for i in 0..outputs.len() {
                for j in i + 1..outputs.len() {
                    let err = relative_linf_error(&outputs[i], &outputs[j]);
                    out.record(err, || {
                        format!(
                            "{} vs {} on {:?}",
                            plans[i].kind(),
                            plans[j].kind(),
                            tuple.as_slice()
                        )
                    });
                }
            }
        }
    }
    out
}

type Job<'a> = Box<dyn FnOnce() -> CheckOutcome + Send + 'a>;

/// Runs every check with sizes bounded by `opts.max_n` (and each suite's
/// own ceiling).
pub fn run(opts: &VerifyOptions) -> VerifyReport {
    let id_n = opts.max_n.min(IDENTITY_CAP);
    let asm_n = opts.max_n.min(ASSEMBLY_CAP);
    let rot_n = opts.max_n.min(ROTATION_CAP);
    let cases = executor_cases(&default_executor_sizes(opts.max_n));
    let tol = opts.identity_tol;

    let mut jobs: Vec<Job<'_>> = vec![
        Box::new(move || check_stride_twiddle_conjugation(id_n, tol)),
        Box::new(move || check_stride_commutation(id_n, tol)),
        Box::new(move || check_splitting_rule(id_n, tol)),
        Box::new(move || check_splitting_rule_stride_form(id_n, tol)),
        Box::new(move || check_dft_unitarity(id_n, tol)),
        Box::new(move || check_digit_reversal_recursion(asm_n, &RECURSION_RADICES)),
        Box::new(move || check_stage_perm_digit_rotation(rot_n, 64, opts.seed)),
        Box::new(move || check_twiddle_rearrangement(asm_n, &FACTORIZATION_RADICES, tol)),
        Box::new(move || check_dif_dit_duality(asm_n, &FACTORIZATION_RADICES)),
        Box::new(move || check_twiddle_unit_modulus(asm_n, &FACTORIZATION_RADICES, tol)),
        Box::new(|| {
            check_executor(&cases, &opts.kinds, opts.trials, opts.seed, opts.transform_tol, opts.fault)
        }),
        Box::new(|| check_cross_kind(&cases, opts.trials, opts.seed, CROSS_KIND_TOL)),
    ];
    for &kind in &opts.kinds {
        jobs.push(Box::new(move || {
            check_factorization(kind, asm_n, &FACTORIZATION_RADICES, tol, opts.fault)
        }));
    }

    let mut checks: Vec<CheckOutcome> = if opts.parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = jobs.into_iter().map(|job| scope.spawn(job)).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("check thread panicked"))
                .collect()
        })
    } else {
        jobs.into_iter().map(|job| job()).collect()
    };
    checks.sort_by_key(|c| c.name);
    VerifyReport { checks }
}
