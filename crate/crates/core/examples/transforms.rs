//! In-place transforms with every plan kind, compared to the direct DFT.

use mrfft::exec::{dft_oracle, execute, relative_linf_error};
use mrfft::plan::{FactorPolicy, FftPlan, PlanKind};
use mrfft::Complex;

fn main() -> mrfft::Result<()> {
    for n in [8, 12, 97, 360, 1024] {
        let x: Vec<Complex> = (0..n)
            .map(|i| {
                let t = i as f64 / n as f64;
                Complex::new((6.0 * std::f64::consts::TAU * t).cos(), 0.1 * t)
            })
            .collect();
        let want = dft_oracle(&x)?;
        for kind in PlanKind::ALL {
            let plan = FftPlan::for_length(n, kind, &FactorPolicy::GreedyAscPrimes)?;
            let mut y = x.clone();
            execute(&plan, &mut y)?;
            println!(
                "N = {n:>4} {kind:<4} radices {:<16} rel error {:.2e}",
                format!("{:?}", plan.radices().as_slice()),
                relative_linf_error(&y, &want)
            );
        }
    }

    // a user factorization of the same length
    let plan = FftPlan::for_length(64, PlanKind::Dit, &FactorPolicy::User(vec![8, 2, 4]))?;
    let mut y = vec![Complex::new(1.0, 0.0); 64];
    execute(&plan, &mut y)?;
    println!("constant input, radices (8, 2, 4): X[0] = {}, X[1] = {:.1e}", y[0], y[1].norm());
    Ok(())
}
