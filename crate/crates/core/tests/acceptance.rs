//! Acceptance gate. Runs every criterion at its pinned tolerance and prints
//! one PASS/FAIL line each; exits nonzero if any criterion fails.

use std::alloc::{GlobalAlloc, Layout, System};
use std::cell::Cell;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mrfft::accel::{check_conflict_free, digit_sum_mapping, modulo_mapping, simulate, AccelConfig};
use mrfft::exec::execute;
use mrfft::plan::{factorize, FactorPolicy, FftPlan, PlanKind};
use mrfft::verify::{self, CheckOutcome};
use mrfft::{Complex, RadixTuple};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct CountingAlloc;

thread_local! {
    static ALLOCATED: Cell<usize> = const { Cell::new(0) };
    static ALLOCATIONS: Cell<usize> = const { Cell::new(0) };
}

unsafe impl GlobalAlloc for CountingAlloc {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let _ = ALLOCATED.try_with(|c| c.set(c.get() + layout.size()));
        let _ = ALLOCATIONS.try_with(|c| c.set(c.get() + 1));
        System.alloc(layout)
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout)
    }
}

#[global_allocator]
static GLOBAL: CountingAlloc = CountingAlloc;

fn allocation_snapshot() -> (usize, usize) {
    (ALLOCATED.with(Cell::get), ALLOCATIONS.with(Cell::get))
}

struct Verdict {
    passed: bool,
    detail: String,
}

fn from_checks(checks: &[CheckOutcome], elapsed: Duration, budget: Option<Duration>) -> Verdict {
    let mut passed = checks.iter().all(CheckOutcome::passed);
    let mut detail: Vec<String> = checks
        .iter()
        .map(|c| {
            let mut s = format!("{} cases={} max_err={:.2e}", c.name, c.cases, c.max_error);
            if let Some(f) = &c.failure {
                s.push_str(&format!(" [{f}]"));
            }
            s
        })
        .collect();
    if let Some(b) = budget {
        if elapsed > b {
            passed = false;
        }
        detail.push(format!("elapsed {:.2}s (budget {}s)", elapsed.as_secs_f64(), b.as_secs()));
    }
    Verdict {
        passed,
        detail: detail.join("; "),
    }
}

/// Criterion 1: operator identities for every factor pair of every n ≤ 64.
fn operator_identities() -> Verdict {
    let start = Instant::now();
    let n = 64;
    let tol = 1e-12;
    let checks = [
        verify::check_stride_twiddle_conjugation(n, tol),
        verify::check_stride_commutation(n, tol),
        verify::check_splitting_rule(n, tol),
        verify::check_splitting_rule_stride_form(n, tol),
    ];
    from_checks(&checks, start.elapsed(), Some(Duration::from_secs(10)))
}

/// Criterion 2: digit-reversal recursion, exact, |α|·M ≤ 256 over {2,3,4,5}.
fn digit_reversal_recursion() -> Verdict {
    let start = Instant::now();
    let checks = [verify::check_digit_reversal_recursion(256, &[2, 3, 4, 5])];
    from_checks(&checks, start.elapsed(), None)
}

/// Criterion 3: all three factorizations and the twiddle rearrangement,
/// N ≤ 256 over {2,3,4,5,8}, within 1e-12.
fn factorizations() -> Verdict {
    let start = Instant::now();
    let radices = [2, 3, 4, 5, 8];
    let tol = 1e-12;
    let checks = [
        verify::check_factorization(PlanKind::Dit, 256, &radices, tol, None),
        verify::check_factorization(PlanKind::Dif, 256, &radices, tol, None),
        verify::check_factorization(PlanKind::DifW, 256, &radices, tol, None),
        verify::check_twiddle_rearrangement(256, &radices, tol),
    ];
    from_checks(&checks, start.elapsed(), None)
}

/// Criterion 4: stage permutations rotate digits, |α| ≤ 1024, all stages.
fn stage_perm_rotation() -> Verdict {
    let start = Instant::now();
    let checks = [verify::check_stage_perm_digit_rotation(1024, 300, 0xA11CE)];
    from_checks(&checks, start.elapsed(), None)
}

/// Criterion 5: executor against the direct DFT, 20 sizes, 10 inputs each.
fn executor_vs_oracle() -> Verdict {
    let start = Instant::now();
    let sizes = [
        2, 3, 5, 7, 12, 16, 30, 60, 64, 97, 128, 210, 243, 256, 360, 625, 1000, 1024, 2187, 4096,
    ];
    let cases: Vec<RadixTuple> = sizes
        .iter()
        .map(|&n| factorize(n, &FactorPolicy::GreedyAscPrimes).unwrap())
        .collect();
    let checks = [verify::check_executor(&cases, &PlanKind::ALL, 10, 0xFF7, 1e-9, None)];
    from_checks(&checks, start.elapsed(), Some(Duration::from_secs(60)))
}

/// Criterion 6: cycle count equals N/R·log_R N + C_p.
fn timing_model() -> Verdict {
    let mut passed = true;
    let mut detail = Vec::new();
    for (n, q) in [(16usize, 2usize), (64, 3), (256, 4)] {
        for cp in [0, 5] {
            let expected = n / 4 * q + cp;
            let plan = FftPlan::new(PlanKind::Dit, RadixTuple::new(vec![4; q]).unwrap()).unwrap();
            let cfg = AccelConfig::new(4, cp).unwrap();
            let ok = match simulate(&plan, &cfg, &digit_sum_mapping(4)) {
                Ok((_, report)) => {
                    detail.push(format!("N={n} C_p={cp}: {} cycles (want {expected})", report.cycles));
                    report.conflicts == 0 && report.cycles == expected && report.predicted_cycles == expected
                }
                Err(e) => {
                    detail.push(format!("N={n} C_p={cp}: {e}"));
                    false
                }
            };
            passed &= ok;
        }
    }
    Verdict {
        passed,
        detail: detail.join("; "),
    }
}

/// Criterion 7: digit-sum mapping conflict-free for N = R^q ≤ 4096,
/// R ∈ {2,4,8}; address-mod-R conflicts at N = 16, R = 4.
fn conflict_checking() -> Verdict {
    let mut passed = true;
    let mut plans_checked = 0;
    let mut detail = Vec::new();
    for r in [2usize, 4, 8] {
        let cfg = AccelConfig::new(r, 0).unwrap();
        let mut q = 1;
        while r.pow(q as u32) <= 4096 {
            for kind in [PlanKind::Dit, PlanKind::Dif] {
                let plan = FftPlan::new(kind, RadixTuple::new(vec![r; q]).unwrap()).unwrap();
                let check = check_conflict_free(&plan, &cfg, &digit_sum_mapping(r)).unwrap();
                plans_checked += 1;
                if !check.conflict_free {
                    passed = false;
                    detail.push(format!("{kind} N={}: {:?}", plan.len(), check.counterexample));
                }
            }
            q += 1;
        }
    }
    detail.push(format!("{plans_checked} digit-sum plans checked"));
    let plan = FftPlan::new(PlanKind::Dit, RadixTuple::new(vec![4, 4]).unwrap()).unwrap();
    let check = check_conflict_free(&plan, &AccelConfig::new(4, 0).unwrap(), &modulo_mapping(4)).unwrap();
    match check.counterexample {
        Some(c) if !check.conflict_free => detail.push(format!(
            "mod mapping counterexample: stage {} butterfly {} addresses {:?} banks {:?}",
            c.stage, c.butterfly, c.addresses, c.banks
        )),
        _ => {
            passed = false;
            detail.push("mod mapping reported conflict-free".into());
        }
    }
    Verdict {
        passed,
        detail: detail.join("; "),
    }
}

/// Criterion 8: execute's auxiliary allocation does not grow with N.
fn in_place_memory() -> Verdict {
    let mut passed = true;
    let mut detail = Vec::new();
    for kind in PlanKind::ALL {
        let mut usage = Vec::new();
        for q in [3usize, 6] {
            let plan = FftPlan::new(kind, RadixTuple::new(vec![4; q]).unwrap()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
            let mut data: Vec<Complex> = verify::random_vector(&mut rng, plan.len());
            let before = allocation_snapshot();
            execute(&plan, &mut data).unwrap();
            let after = allocation_snapshot();
            usage.push((plan.len(), after.0 - before.0, after.1 - before.1));
        }
        let (n_small, bytes_small, count_small) = usage[0];
        let (n_large, bytes_large, count_large) = usage[1];
        let bound = 2 * 4 * std::mem::size_of::<Complex>();
        passed &= bytes_small == bytes_large && count_small == count_large && bytes_large <= bound;
        detail.push(format!(
            "{kind}: N={n_small} {bytes_small}B/{count_small} allocs, N={n_large} {bytes_large}B/{count_large} allocs"
        ));
    }
    Verdict {
        passed,
        detail: detail.join("; "),
    }
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 operator identity suite (n <= 64, 1e-12)", operator_identities),
        ("2 digit-reversal recursion (exact, <= 256)", digit_reversal_recursion),
        ("3 DIT/DIF/DIF-W factorizations + rearrangement (N <= 256, 1e-12)", factorizations),
        ("4 stage permutation digit rotation (<= 1024)", stage_perm_rotation),
        ("5 executor vs oracle (20 sizes, 3 kinds, 10 inputs, 1e-9)", executor_vs_oracle),
        ("6 timing model N/R log_R N + C_p", timing_model),
        ("7 bank conflict checking", conflict_checking),
        ("8 in-place memory bound", in_place_memory),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let verdict = run();
        println!(
            "{} criterion {name} ({:.2}s): {}",
            if verdict.passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            verdict.detail
        );
        if !verdict.passed {
            failures += 1;
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
