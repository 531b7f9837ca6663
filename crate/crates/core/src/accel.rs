//! Access-pattern model of a memory-based radix-`R` FFT accelerator.
//!
//! The processing unit issues one radix-`R` butterfly per clock. Its `R`
//! operands are read from, and its results written back to, the addresses
//! `P⁻¹(b·R + w)` of stage permutation `P`. Memory is split into `R` banks
//! by a [`BankMapping`]; a butterfly whose wings land in the same bank is a
//! conflict. With `overlap` on, reads and writes share the issue clock.
//!
//! Cycle model: each issue costs one clock (two without overlap), each
//! conflicting issue adds one stall clock, and the pipeline depth `C_p`
//! is added once. Conflict-free and overlapped, this gives
//! `T(N) = N/R · log_R N + C_p`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::RadixTuple;
use crate::plan::FftPlan;

/// Memory technology. Only dual-port one-read-one-write RAM is modeled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MemoryKind {
    Ram1r1w,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AccelConfig {
    radix: usize,
    pipeline_depth: usize,
    memory: MemoryKind,
    overlap: bool,
}

impl AccelConfig {
    /// `radix` is both the butterfly size and the bank count.
    pub fn new(radix: usize, pipeline_depth: usize) -> Result<Self> {
        if radix < 2 {
            return Err(Error::config(format!("accelerator radix must be ≥ 2, got {radix}")));
        }
        Ok(Self {
            radix,
            pipeline_depth,
            memory: MemoryKind::Ram1r1w,
            overlap: true,
        })
    }

    pub fn with_overlap(mut self, overlap: bool) -> Self {
        self.overlap = overlap;
        self
    }

    pub fn radix(&self) -> usize {
        self.radix
    }

    pub fn pipeline_depth(&self) -> usize {
        self.pipeline_depth
    }

    pub fn memory(&self) -> MemoryKind {
        self.memory
    }

    pub fn overlap(&self) -> bool {
        self.overlap
    }
}

/// Assigns each word address to one of `R` banks.
pub trait BankMapping: Send + Sync {
    fn name(&self) -> &str;

    /// Bank of `address` in a memory of `n` words holding a transform
    /// factored as `radices`. Must be below the bank count.
    fn bank(&self, address: usize, n: usize, radices: &RadixTuple) -> usize;

    /// Bank-local row of `address`. Defaults to the interleaved layout.
    fn row(&self, address: usize, banks: usize) -> usize {
        address / banks
    }

    /// Rejects memory sizes the mapping is not defined for.
    fn check(&self, _n: usize) -> Result<()> {
        Ok(())
    }
}

/// `bank(a) = (sum of base-R digits of a) mod R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DigitSumMapping {
    banks: usize,
}

pub fn digit_sum_mapping(banks: usize) -> DigitSumMapping {
    DigitSumMapping { banks }
}

impl BankMapping for DigitSumMapping {
    fn name(&self) -> &str {
        "digit-sum"
    }

    fn bank(&self, address: usize, _n: usize, _radices: &RadixTuple) -> usize {
        let mut sum = 0;
        let mut a = address;
        while a > 0 {
            sum += a % self.banks;
            a /= self.banks;
        }
        sum % self.banks
    }

    fn check(&self, n: usize) -> Result<()> {
        if power_exponent(n, self.banks).is_none() {
            return Err(Error::config(format!(
                "digit-sum mapping needs N to be a power of {}, got {n}",
                self.banks
            )));
        }
        Ok(())
    }
}

/// `bank(a) = a mod R`, the plain interleaved layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModuloMapping {
    banks: usize,
}

pub fn modulo_mapping(banks: usize) -> ModuloMapping {
    ModuloMapping { banks }
}

impl BankMapping for ModuloMapping {
    fn name(&self) -> &str {
        "mod"
    }

    fn bank(&self, address: usize, _n: usize, _radices: &RadixTuple) -> usize {
        address % self.banks
    }
}

/// Wraps a user closure as a mapping.
pub struct FnMapping<F> {
    name: String,
    map: F,
}

impl<F> FnMapping<F>
where
    F: Fn(usize, usize, &RadixTuple) -> usize + Send + Sync,
{
    pub fn new(name: impl Into<String>, map: F) -> Self {
        Self {
            name: name.into(),
            map,
        }
    }
}

impl<F> BankMapping for FnMapping<F>
where
    F: Fn(usize, usize, &RadixTuple) -> usize + Send + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn bank(&self, address: usize, n: usize, radices: &RadixTuple) -> usize {
        (self.map)(address, n, radices)
    }
}

/// Looks up a built-in mapping by its CLI name.
pub fn mapping_by_name(name: &str, banks: usize) -> Result<Box<dyn BankMapping>> {
    match name {
        "digit-sum" | "digitsum" => Ok(Box::new(digit_sum_mapping(banks))),
        "mod" | "modulo" => Ok(Box::new(modulo_mapping(banks))),
        other => Err(Error::config(format!("unknown bank mapping `{other}`"))),
    }
}

/// `q` with `base^q = n`, if any.
fn power_exponent(n: usize, base: usize) -> Option<usize> {
    if n == 0 || base < 2 {
        return None;
    }
    let (mut rest, mut q) = (n, 0);
    while rest % base == 0 {
        rest /= base;
        q += 1;
    }
    (rest == 1).then_some(q)
}

/// Read and write addresses of butterfly `b` of stage `k`.
pub fn stage_addresses(
    plan: &FftPlan,
    cfg: &AccelConfig,
    k: usize,
    b: usize,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let stage = plan
        .stages()
        .get(k)
        .ok_or_else(|| Error::domain(format!("stage {k} out of range")))?;
    let r = cfg.radix;
    if stage.radix() != r {
        return Err(Error::config(format!(
            "stage {k} has radix {} but the accelerator radix is {r}",
            stage.radix()
        )));
    }
    if b >= stage.butterfly_count() {
        return Err(Error::domain(format!(
            "butterfly {b} out of range for {} butterflies",
            stage.butterfly_count()
        )));
    }
    let reads: Vec<usize> = (0..r).map(|w| stage.post_perm().apply(b * r + w)).collect();
    Ok((reads.clone(), reads))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Port {
    Read,
    Write,
}

/// A butterfly whose wings collide in a bank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conflict {
    pub stage: usize,
    pub butterfly: usize,
    pub port: Port,
    pub addresses: Vec<usize>,
    pub banks: Vec<usize>,
}

/// One issued butterfly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClockRecord {
    pub clock: usize,
    pub stage: usize,
    pub butterfly: usize,
    pub reads: Vec<usize>,
    pub writes: Vec<usize>,
    pub read_banks: Vec<usize>,
    pub write_banks: Vec<usize>,
    pub read_rows: Vec<usize>,
    pub write_rows: Vec<usize>,
    pub stall: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AccessTrace {
    pub records: Vec<ClockRecord>,
}

impl AccessTrace {
    /// Checks `R` reads and writes per issue, writes equal to reads, and
    /// that each stage's reads partition `0..n`.
    pub fn validate(&self, n: usize, radix: usize) -> Result<()> {
        let mut seen: Vec<Option<usize>> = vec![None; n];
        for rec in &self.records {
            if rec.reads.len() != radix || rec.writes.len() != radix {
                return Err(Error::domain(format!(
                    "clock {} issues {} reads and {} writes, expected {radix}",
                    rec.clock,
                    rec.reads.len(),
                    rec.writes.len()
                )));
            }
            if rec.reads != rec.writes {
                return Err(Error::domain(format!(
                    "clock {} writes to addresses it did not read",
                    rec.clock
                )));
            }
            for &a in &rec.reads {
                if a >= n {
                    return Err(Error::domain(format!("address {a} outside memory of {n} words")));
                }
                if seen[a] == Some(rec.stage) {
                    return Err(Error::domain(format!(
                        "address {a} accessed twice in stage {}",
                        rec.stage
                    )));
                }
                seen[a] = Some(rec.stage);
            }
        }
        let stages: std::collections::BTreeSet<usize> =
            self.records.iter().map(|r| r.stage).collect();
        for s in stages {
            let count: usize = self
                .records
                .iter()
                .filter(|r| r.stage == s)
                .map(|r| r.reads.len())
                .sum();
            if count != n {
                return Err(Error::domain(format!(
                    "stage {s} touches {count} of {n} addresses"
                )));
            }
        }
        Ok(())
    }

    /// One JSON object per issued butterfly.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for rec in &self.records {
            let mut line = serde_json::to_value(rec).expect("record serializes");
            line["schema"] = serde_json::json!(1);
            out.push_str(&serde_json::to_string(&line).expect("value serializes"));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimReport {
    pub n: usize,
    pub radix: usize,
    pub stages: usize,
    pub pipeline_depth: usize,
    pub overlap: bool,
    pub mapping: String,
    pub issues: usize,
    pub conflicts: usize,
    pub stall_cycles: usize,
    pub cycles: usize,
    pub predicted_cycles: usize,
    pub conflict_list: Vec<Conflict>,
}

impl SimReport {
    pub fn conflict_free(&self) -> bool {
        self.conflicts == 0
    }

    /// `key: value` summary, one line per field, then the conflicts.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "schema: 1");
        let _ = writeln!(s, "n: {}", self.n);
        let _ = writeln!(s, "radix: {}", self.radix);
        let _ = writeln!(s, "stages: {}", self.stages);
        let _ = writeln!(s, "pipeline_depth: {}", self.pipeline_depth);
        let _ = writeln!(s, "overlap: {}", self.overlap);
        let _ = writeln!(s, "mapping: {}", self.mapping);
        let _ = writeln!(s, "issues: {}", self.issues);
        let _ = writeln!(s, "conflicts: {}", self.conflicts);
        let _ = writeln!(s, "stall_cycles: {}", self.stall_cycles);
        let _ = writeln!(s, "cycles: {}", self.cycles);
        let _ = writeln!(s, "predicted_cycles: {}", self.predicted_cycles);
        for c in &self.conflict_list {
            let _ = writeln!(
                s,
                "conflict: stage={} butterfly={} port={:?} addresses={:?} banks={:?}",
                c.stage, c.butterfly, c.port, c.addresses, c.banks
            );
        }
        s
    }
}

/// `N/R · log_R N + C_p`, evaluated in floating point.
pub fn predicted_cycles(n: usize, radix: usize, pipeline_depth: usize) -> usize {
    let n_f = n as f64;
    let r_f = radix as f64;
    (n_f / r_f * (n_f.ln() / r_f.ln())).round() as usize + pipeline_depth
}

fn check_pure_radix(plan: &FftPlan, cfg: &AccelConfig, mapping: &dyn BankMapping) -> Result<()> {
    if let Some(bad) = plan.stages().iter().find(|s| s.radix() != cfg.radix) {
        return Err(Error::Unsupported(format!(
            "stage {} has radix {}; only pure radix-{} plans are scheduled",
            bad.stage(),
            bad.radix(),
            cfg.radix
        )));
    }
    mapping.check(plan.len())
}

fn has_collision(banks: &[usize]) -> bool {
    banks
        .iter()
        .enumerate()
        .any(|(i, b)| banks[..i].contains(b))
}

fn bank_checked(mapping: &dyn BankMapping, a: usize, plan: &FftPlan, radix: usize) -> Result<usize> {
    let bank = mapping.bank(a, plan.len(), plan.radices());
    if bank >= radix {
        return Err(Error::config(format!(
            "mapping `{}` sent address {a} to bank {bank}, but there are {radix} banks",
            mapping.name()
        )));
    }
    Ok(bank)
}

/// Issues every butterfly of every stage, in stage order, one per clock.
pub fn simulate(
    plan: &FftPlan,
    cfg: &AccelConfig,
    mapping: &dyn BankMapping,
) -> Result<(AccessTrace, SimReport)> {
    check_pure_radix(plan, cfg, mapping)?;
    let r = cfg.radix;
    let clocks_per_issue = if cfg.overlap { 1 } else { 2 };
    let mut trace = AccessTrace::default();
    let mut conflict_list = Vec::new();
    let mut clock = 0;
    let mut stall_cycles = 0;
    for (k, stage) in plan.stages().iter().enumerate() {
        for b in 0..stage.butterfly_count() {
            let (reads, writes) = stage_addresses(plan, cfg, k, b)?;
            let read_banks = reads
                .iter()
                .map(|&a| bank_checked(mapping, a, plan, r))
                .collect::<Result<Vec<_>>>()?;
            let write_banks = writes
                .iter()
                .map(|&a| bank_checked(mapping, a, plan, r))
                .collect::<Result<Vec<_>>>()?;
            let read_conflict = has_collision(&read_banks);
            let write_conflict = has_collision(&write_banks);
            if read_conflict {
                conflict_list.push(Conflict {
                    stage: k,
                    butterfly: b,
                    port: Port::Read,
                    addresses: reads.clone(),
                    banks: read_banks.clone(),
                });
            } else if write_conflict {
                conflict_list.push(Conflict {
                    stage: k,
                    butterfly: b,
                    port: Port::Write,
                    addresses: writes.clone(),
                    banks: write_banks.clone(),
                });
            }
            let stall = read_conflict || write_conflict;
            trace.records.push(ClockRecord {
                clock,
                stage: k,
                butterfly: b,
                read_rows: reads.iter().map(|&a| mapping.row(a, r)).collect(),
                write_rows: writes.iter().map(|&a| mapping.row(a, r)).collect(),
                reads,
                writes,
                read_banks,
                write_banks,
                stall,
            });
            clock += clocks_per_issue;
            if stall {
                clock += 1;
                stall_cycles += 1;
            }
        }
    }
    let issues = trace.records.len();
    let report = SimReport {
        n: plan.len(),
        radix: r,
        stages: plan.stages().len(),
        pipeline_depth: cfg.pipeline_depth,
        overlap: cfg.overlap,
        mapping: mapping.name().to_string(),
        issues,
        conflicts: conflict_list.len(),
        stall_cycles,
        cycles: clock + cfg.pipeline_depth,
        predicted_cycles: predicted_cycles(plan.len(), r, cfg.pipeline_depth),
        conflict_list,
    };
    Ok((trace, report))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictCheck {
    pub conflict_free: bool,
    pub counterexample: Option<Conflict>,
}

/// True iff every butterfly reads from and writes to `R` distinct banks.
pub fn check_conflict_free(
    plan: &FftPlan,
    cfg: &AccelConfig,
    mapping: &dyn BankMapping,
) -> Result<ConflictCheck> {
    check_pure_radix(plan, cfg, mapping)?;
    for (k, stage) in plan.stages().iter().enumerate() {
        for b in 0..stage.butterfly_count() {
            let (reads, writes) = stage_addresses(plan, cfg, k, b)?;
            for (port, addrs) in [(Port::Read, reads), (Port::Write, writes)] {
                let banks = addrs
                    .iter()
                    .map(|&a| bank_checked(mapping, a, plan, cfg.radix))
                    .collect::<Result<Vec<_>>>()?;
                if has_collision(&banks) {
                    return Ok(ConflictCheck {
                        conflict_free: false,
                        counterexample: Some(Conflict {
                            stage: k,
                            butterfly: b,
                            port,
                            addresses: addrs,
                            banks,
                        }),
                    });
                }
            }
        }
    }
    Ok(ConflictCheck {
        conflict_free: true,
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::PlanKind;

    fn plan(kind: PlanKind, r: &[usize]) -> FftPlan {
        FftPlan::new(kind, RadixTuple::new(r.to_vec()).unwrap()).unwrap()
    }

    fn sorted(mut v: Vec<usize>) -> Vec<usize> {
        v.sort_unstable();
        v
    }

    #[test]
    fn address_examples() {
        let p = plan(PlanKind::Dit, &[2, 2]);
        let cfg = AccelConfig::new(2, 0).unwrap();
        let (reads, writes) = stage_addresses(&p, &cfg, 0, 1).unwrap();
        assert_eq!(sorted(reads.clone()), vec![2, 3]);
        assert_eq!(reads, writes);
        let (reads, _) = stage_addresses(&p, &cfg, 1, 0).unwrap();
        assert_eq!(sorted(reads), vec![0, 2]);
        assert!(stage_addresses(&p, &cfg, 1, 2).is_err());
        assert!(stage_addresses(&p, &cfg, 2, 0).is_err());
        let cfg4 = AccelConfig::new(4, 0).unwrap();
        assert!(matches!(stage_addresses(&p, &cfg4, 0, 0), Err(Error::Config(_))));
    }

    #[test]
    fn config_rejects_radix_one() {
        assert!(AccelConfig::new(1, 0).is_err());
    }

    #[test]
    fn digit_sum_examples() {
        let t = RadixTuple::new(vec![4, 4]).unwrap();
        assert_eq!(digit_sum_mapping(4).bank(7, 16, &t), 0);
        assert_eq!(digit_sum_mapping(4).bank(0, 16, &t), 0);
        let t2 = RadixTuple::new(vec![2, 2, 2]).unwrap();
        assert_eq!(digit_sum_mapping(2).bank(6, 8, &t2), 0);
        assert!(digit_sum_mapping(4).check(32).is_err());
        assert!(digit_sum_mapping(4).check(64).is_ok());
    }

    #[test]
    fn sixteen_point_schedule() {
        let cfg = AccelConfig::new(4, 0).unwrap();
        for kind in [PlanKind::Dit, PlanKind::Dif, PlanKind::DifW] {
            let p = plan(kind, &[4, 4]);
            let (trace, report) = simulate(&p, &cfg, &digit_sum_mapping(4)).unwrap();
            trace.validate(16, 4).unwrap();
            assert_eq!(report.cycles, 8);
            assert_eq!(report.predicted_cycles, 8);
            assert!(report.conflict_free());
            assert!(check_conflict_free(&p, &cfg, &digit_sum_mapping(4)).unwrap().conflict_free);
        }
    }

    #[test]
    fn modulo_mapping_conflicts() {
        let cfg = AccelConfig::new(4, 0).unwrap();
        let p = plan(PlanKind::Dit, &[4, 4]);
        let check = check_conflict_free(&p, &cfg, &modulo_mapping(4)).unwrap();
        assert!(!check.conflict_free);
        let ce = check.counterexample.unwrap();
        assert_eq!(ce.stage, 1);
        assert_eq!(sorted(ce.addresses), vec![0, 4, 8, 12]);
        assert_eq!(ce.banks, vec![0, 0, 0, 0]);

        let (_, report) = simulate(&p, &cfg, &modulo_mapping(4)).unwrap();
        assert_eq!(report.conflicts, 4);
        assert_eq!(report.cycles, 8 + 4);
    }

    #[test]
    fn single_stage_and_overlap() {
        let p = plan(PlanKind::Dit, &[4]);
        let cfg = AccelConfig::new(4, 3).unwrap();
        let (trace, report) = simulate(&p, &cfg, &modulo_mapping(4)).unwrap();
        assert_eq!(trace.records.len(), 1);
        assert_eq!(report.cycles, 4);
        let (_, report) = simulate(&p, &cfg.with_overlap(false), &modulo_mapping(4)).unwrap();
        assert_eq!(report.cycles, 5);
    }

    #[test]
    fn mixed_radix_is_unsupported() {
        let p = plan(PlanKind::Dit, &[4, 2]);
        let cfg = AccelConfig::new(4, 0).unwrap();
        assert!(matches!(
            simulate(&p, &cfg, &modulo_mapping(4)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn out_of_range_bank_is_reported() {
        let p = plan(PlanKind::Dit, &[2, 2]);
        let cfg = AccelConfig::new(2, 0).unwrap();
        let bad = FnMapping::new("bad", |a, _, _: &RadixTuple| a);
        assert!(matches!(simulate(&p, &cfg, &bad), Err(Error::Config(_))));
    }

    #[test]
    fn trace_validation_catches_damage() {
        let p = plan(PlanKind::Dif, &[2, 2, 2]);
        let cfg = AccelConfig::new(2, 0).unwrap();
        let (mut trace, _) = simulate(&p, &cfg, &digit_sum_mapping(2)).unwrap();
        trace.validate(8, 2).unwrap();
        trace.records[0].writes[0] = 7;
        assert!(trace.validate(8, 2).is_err());
    }

    #[test]
    fn jsonl_has_one_line_per_issue() {
        let p = plan(PlanKind::Dit, &[2, 2]);
        let cfg = AccelConfig::new(2, 1).unwrap();
        let (trace, _) = simulate(&p, &cfg, &digit_sum_mapping(2)).unwrap();
        let text = trace.to_jsonl();
        assert_eq!(text.lines().count(), 4);
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first["schema"], 1);
        assert_eq!(first["stage"], 0);
    }
}
