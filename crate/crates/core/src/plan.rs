//! Compiles a radix tuple into an ordered list of in-place stages.
//!
//! Stages are stored in application order: `stages()[0]` acts on the vector
//! first. For every kind that is the stage with index `k = 0`, because each
//! product is written with `k` growing right to left.
//!
//! | kind  | digit reversal | stage permutation | twiddle                          |
//! |-------|----------------|-------------------|----------------------------------|
//! | DIT   | input side     | `A_k`             | `Ŵ_k` before the butterfly       |
//! | DIF   | output side    | `B_k`             | `W̃_k` after the butterfly        |
//! | DIF-W | output side    | `B_k`             | moved `W̃_{k-1}` before butterfly |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::ButterflyKernel;
use crate::index::{digit_reverse_perm, stage_perm_a, stage_perm_b, IndexPermutation, RadixTuple};
use crate::operators::{
    dense_of_permutation, dft_matrix, stage_twiddle_dif, stage_twiddle_difw, stage_twiddle_dit,
    DenseMatrix, TwiddleDiagonal,
};

/// Largest `N` for which [`assemble_dense`] builds a matrix by default.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Version tag carried by [`PlanDocument`].
pub const PLAN_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanKind {
    /// Decimation in time.
    Dit,
    /// Decimation in frequency, twiddles after the butterfly.
    Dif,
    /// Decimation in frequency, twiddles before the butterfly.
    DifW,
}

impl PlanKind {
    pub const ALL: [PlanKind; 3] = [PlanKind::Dit, PlanKind::Dif, PlanKind::DifW];

    pub fn as_str(self) -> &'static str {
        match self {
            PlanKind::Dit => "dit",
            PlanKind::Dif => "dif",
            PlanKind::DifW => "difw",
        }
    }
}

impl fmt::Display for PlanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PlanKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dit" => Ok(PlanKind::Dit),
            "dif" => Ok(PlanKind::Dif),
            "difw" | "dif-w" | "dif_w" => Ok(PlanKind::DifW),
            other => Err(Error::config(format!("unknown plan kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwiddlePosition {
    BeforeButterfly,
    AfterButterfly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IoPermPosition {
    InputSide,
    OutputSide,
}

/// How [`factorize`] chooses radices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorPolicy {
    /// Prime factors, smallest assigned to the least significant digit.
    GreedyAscPrimes,
    /// Explicit radices in tuple order (`n_K` first).
    User(Vec<usize>),
}

/// Radix tuple for length `n` under `policy`.
pub fn factorize(n: usize, policy: &FactorPolicy) -> Result<RadixTuple> {
    if n == 0 {
        return Err(Error::domain("transform length must be at least 1"));
    }
    match policy {
        FactorPolicy::GreedyAscPrimes => {
            let mut primes = Vec::new();
            let mut rest = n;
            let mut p = 2;
            while p * p <= rest {
                while rest.is_multiple_of(p) {
                    primes.push(p);
                    rest /= p;
                }
                p += 1;
            }
            if rest > 1 {
                primes.push(rest);
            }
            if primes.is_empty() {
                primes.push(1);
            }
            primes.reverse();
            RadixTuple::new(primes)
        }
        FactorPolicy::User(radices) => {
            let tuple = RadixTuple::new(radices.clone())
                .map_err(|e| Error::config(format!("invalid radix list: {e}")))?;
            if tuple.size() != n {
                return Err(Error::config(format!(
                    "radices {radices:?} multiply to {}, not {n}",
                    tuple.size()
                )));
            }
            Ok(tuple)
        }
    }
}

/// One factor `P⁻¹ (I_{N/r} ⊗ F_r) T P` (or `P⁻¹ T (I ⊗ F_r) P`).
#[derive(Debug, Clone)]
pub struct StagePlan {
    stage: usize,
    radix: usize,
    pre_perm: IndexPermutation,
    post_perm: IndexPermutation,
    twiddle: TwiddleDiagonal,
    twiddle_position: TwiddlePosition,
    kernel: ButterflyKernel,
}

impl StagePlan {
    fn new(
        stage: usize,
        radix: usize,
        pre_perm: IndexPermutation,
        twiddle: TwiddleDiagonal,
        twiddle_position: TwiddlePosition,
    ) -> Self {
        let post_perm = pre_perm.inverse();
        Self {
            stage,
            radix,
            kernel: ButterflyKernel::new(radix).expect("radix is at least 1"),
            pre_perm,
            post_perm,
            twiddle,
            twiddle_position,
        }
    }

    /// Stage index `k` of the factorization.
    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn radix(&self) -> usize {
        self.radix
    }

    pub fn len(&self) -> usize {
        self.pre_perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pre_perm.is_empty()
    }

    pub fn butterfly_count(&self) -> usize {
        self.len() / self.radix
    }

    /// `A_k` or `B_k`.
    pub fn pre_perm(&self) -> &IndexPermutation {
        &self.pre_perm
    }

    /// `A_k⁻¹` or `B_k⁻¹`.
    pub fn post_perm(&self) -> &IndexPermutation {
        &self.post_perm
    }

    pub fn twiddle(&self) -> &TwiddleDiagonal {
        &self.twiddle
    }

    pub fn twiddle_position(&self) -> TwiddlePosition {
        self.twiddle_position
    }

    pub fn kernel(&self) -> &ButterflyKernel {
        &self.kernel
    }

    /// Dense `N × N` realization of this stage, built from the dense
    /// operators rather than the executor.
    pub fn to_dense(&self) -> Result<DenseMatrix> {
        let n = self.len();
        let pre = dense_of_permutation(&self.pre_perm);
        let post = dense_of_permutation(&self.post_perm);
        let butterflies = DenseMatrix::identity(n / self.radix).kron(&dft_matrix(self.radix)?);
        let twiddle = DenseMatrix::from_diagonal(&self.twiddle);
        let middle = match self.twiddle_position {
            TwiddlePosition::BeforeButterfly => butterflies.matmul(&twiddle)?,
            TwiddlePosition::AfterButterfly => twiddle.matmul(&butterflies)?,
        };
        post.matmul(&middle)?.matmul(&pre)
    }
}

/// A complete factorization of `F_N` for one kind and radix tuple.
#[derive(Debug, Clone)]
pub struct FftPlan {
    kind: PlanKind,
    radices: RadixTuple,
    stages: Vec<StagePlan>,
    io_perm: IndexPermutation,
    io_perm_position: IoPermPosition,
    max_radix: usize,
}

impl FftPlan {
    pub fn new(kind: PlanKind, radices: RadixTuple) -> Result<Self> {
        let last = radices.last_stage();
        let (stages, io_perm_position) = match kind {
            PlanKind::Dit => (
                (0..=last)
                    .map(|k| -> Result<StagePlan> {
                        Ok(StagePlan::new(
                            k,
                            radices.radix(k),
                            stage_perm_a(&radices, k)?,
                            stage_twiddle_dit(&radices, k)?,
                            TwiddlePosition::BeforeButterfly,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?,
                IoPermPosition::InputSide,
            ),
            PlanKind::Dif | PlanKind::DifW => (
                (0..=last)
                    .map(|k| -> Result<StagePlan> {
                        let (twiddle, position) = if kind == PlanKind::Dif {
                            (stage_twiddle_dif(&radices, k)?, TwiddlePosition::AfterButterfly)
                        } else {
                            (stage_twiddle_difw(&radices, k)?, TwiddlePosition::BeforeButterfly)
                        };
                        Ok(StagePlan::new(
                            k,
                            radices.radix(k),
                            stage_perm_b(&radices, k)?,
                            twiddle,
                            position,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?,
                IoPermPosition::OutputSide,
            ),
        };
        let max_radix = radices.as_slice().iter().copied().max().unwrap_or(1);
        Ok(Self {
            kind,
            io_perm: digit_reverse_perm(&radices),
            radices,
            stages,
            io_perm_position,
            max_radix,
        })
    }

    /// Plans length `n` after factorizing it with `policy`.
    pub fn for_length(n: usize, kind: PlanKind, policy: &FactorPolicy) -> Result<Self> {
        Self::new(kind, factorize(n, policy)?)
    }

    pub fn kind(&self) -> PlanKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.radices.size()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn radices(&self) -> &RadixTuple {
        &self.radices
    }

    /// Stages in application order.
    pub fn stages(&self) -> &[StagePlan] {
        &self.stages
    }

    /// `S_α` (DIT) or `S_β` (DIF, DIF-W).
    pub fn io_perm(&self) -> &IndexPermutation {
        &self.io_perm
    }

    pub fn io_perm_position(&self) -> IoPermPosition {
        self.io_perm_position
    }

    pub fn max_radix(&self) -> usize {
        self.max_radix
    }

    /// Negates the last twiddle entry of `stage`. Exists so the verification
    /// harness can prove it notices a corrupted plan.
    pub(crate) fn inject_twiddle_fault(&mut self, stage: usize) -> Result<()> {
        let st = self
            .stages
            .get_mut(stage)
            .ok_or_else(|| Error::domain(format!("no stage {stage} to corrupt")))?;
        let last = st.twiddle.len() - 1;
        st.twiddle.negate_entry(last);
        Ok(())
    }

    pub fn to_document(&self) -> PlanDocument {
        PlanDocument {
            schema: PLAN_SCHEMA,
            kind: self.kind,
            n: self.len(),
            radices: self.radices.as_slice().to_vec(),
            io_perm: PermDocument {
                position: self.io_perm_position,
                forward: self.io_perm.as_slice().to_vec(),
            },
            stages: self
                .stages
                .iter()
                .map(|s| StageDocument {
                    stage: s.stage,
                    radix: s.radix,
                    butterfly_count: s.butterfly_count(),
                    twiddle_position: s.twiddle_position,
                    twiddle_identity: s.twiddle.is_identity(),
                    pre_perm: s.pre_perm.as_slice().to_vec(),
                    post_perm: s.post_perm.as_slice().to_vec(),
                    twiddle: (0..s.twiddle.len())
                        .map(|i| {
                            let (num, den) = s.twiddle.exponent(i);
                            [num, den]
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("plan document serializes")
    }
}

/// Serialized plan. Twiddles are exact `[numerator, denominator]` pairs:
/// entry `i` of a stage diagonal is `exp(−2πi · numerator / denominator)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub schema: u32,
    pub kind: PlanKind,
    pub n: usize,
    pub radices: Vec<usize>,
    pub io_perm: PermDocument,
    pub stages: Vec<StageDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermDocument {
    pub position: IoPermPosition,
    pub forward: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageDocument {
    pub stage: usize,
    pub radix: usize,
    pub butterfly_count: usize,
    pub twiddle_position: TwiddlePosition,
    pub twiddle_identity: bool,
    pub pre_perm: Vec<usize>,
    pub post_perm: Vec<usize>,
    pub twiddle: Vec<[usize; 2]>,
}

impl PlanDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }

    /// Rebuilds the plan from `kind` and `radices` and checks that every
    /// recorded permutation and twiddle matches it.
    pub fn to_plan(&self) -> Result<FftPlan> {
        if self.schema != PLAN_SCHEMA {
            return Err(Error::config(format!("unsupported plan schema {}", self.schema)));
        }
        let plan = FftPlan::new(self.kind, RadixTuple::new(self.radices.clone())?)?;
        if plan.to_document() != *self {
            return Err(Error::config(
                "plan document disagrees with the plan rebuilt from its radices",
            ));
        }
        Ok(plan)
    }
}

pub fn plan_dit(alpha: &RadixTuple) -> FftPlan {
    FftPlan::new(PlanKind::Dit, alpha.clone()).expect("valid tuple plans")
}

pub fn plan_dif(beta: &RadixTuple) -> FftPlan {
    FftPlan::new(PlanKind::Dif, beta.clone()).expect("valid tuple plans")
}

pub fn plan_dif_w(beta: &RadixTuple) -> FftPlan {
    FftPlan::new(PlanKind::DifW, beta.clone()).expect("valid tuple plans")
}

/// Multiplies out the digit reversal and every stage factor, in plan order,
/// into one dense matrix.
pub fn assemble_dense(plan: &FftPlan) -> Result<DenseMatrix> {
    assemble_dense_capped(plan, DEFAULT_DENSE_CAP)
}

pub fn assemble_dense_capped(plan: &FftPlan, cap: usize) -> Result<DenseMatrix> {
    let n = plan.len();
    if n > cap {
        return Err(Error::Resource(format!(
            "dense assembly of N = {n} exceeds cap {cap}"
        )));
    }
    let io = dense_of_permutation(plan.io_perm());
    let mut acc = match plan.io_perm_position() {
        IoPermPosition::InputSide => io.clone(),
        IoPermPosition::OutputSide => DenseMatrix::identity(n),
    };
    for stage in plan.stages() {
        acc = stage.to_dense()?.matmul(&acc)?;
    }
    if plan.io_perm_position() == IoPermPosition::OutputSide {
        acc = io.matmul(&acc)?;
    }
    Ok(acc)
}
