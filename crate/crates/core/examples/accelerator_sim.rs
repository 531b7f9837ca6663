//! Banked accelerator model: cycle counts, bank conflicts and a trace.

use mrfft::accel::{
    check_conflict_free, digit_sum_mapping, modulo_mapping, predicted_cycles, simulate,
    AccelConfig, FnMapping,
};
use mrfft::plan::{FactorPolicy, FftPlan, PlanKind};
use mrfft::RadixTuple;

fn main() -> mrfft::Result<()> {
    let (n, r) = (64, 4);
    let plan = FftPlan::for_length(n, PlanKind::Dit, &FactorPolicy::User(vec![r; 3]))?;

    for cp in [0, 6] {
        let cfg = AccelConfig::new(r, cp)?;
        let (_, report) = simulate(&plan, &cfg, &digit_sum_mapping(r))?;
        println!(
            "C_p = {cp}: {} cycles, predicted {}, conflicts {}",
            report.cycles,
            predicted_cycles(n, r, cp),
            report.conflicts
        );
    }

    let cfg = AccelConfig::new(r, 0)?;
    let check = check_conflict_free(&plan, &cfg, &modulo_mapping(r))?;
    if let Some(c) = check.counterexample {
        println!(
            "mod mapping conflicts at stage {} butterfly {}: addresses {:?} -> banks {:?}",
            c.stage, c.butterfly, c.addresses, c.banks
        );
    }

    // any address-to-bank function can be plugged in
    let xor = FnMapping::new("xor-fold", |a: usize, _n: usize, _alpha: &RadixTuple| (a ^ (a >> 2) ^ (a >> 4)) % 4);
    let (_, report) = simulate(&plan, &cfg.with_overlap(false), &xor)?;
    println!(
        "xor-fold without overlap: {} cycles, {} conflicts",
        report.cycles, report.conflicts
    );

    let small = FftPlan::for_length(16, PlanKind::Dif, &FactorPolicy::User(vec![4, 4]))?;
    let (trace, _) = simulate(&small, &AccelConfig::new(4, 0)?, &digit_sum_mapping(4))?;
    print!("\nN = 16 trace:\n{}", trace.to_jsonl());
    Ok(())
}
