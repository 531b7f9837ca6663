//! Prints the stage structure of the three plan kinds for one length and
//! checks each against the dense DFT matrix.

use mrfft::plan::{assemble_dense, FactorPolicy, FftPlan, PlanKind};
use mrfft::operators::dft_matrix;

fn main() -> mrfft::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(24, |a| a.parse().expect("length"));
    let policy = FactorPolicy::GreedyAscPrimes;
    for kind in PlanKind::ALL {
        let plan = FftPlan::for_length(n, kind, &policy)?;
        println!(
            "{kind}: radices {:?}, io permutation on the {:?}",
            plan.radices().as_slice(),
            plan.io_perm_position()
        );
        for stage in plan.stages() {
            println!(
                "  stage {}: radix {}, {} butterflies, twiddle {:?}{}",
                stage.stage(),
                stage.radix(),
                stage.butterfly_count(),
                stage.twiddle_position(),
                if stage.twiddle().is_identity() { " (identity)" } else { "" }
            );
        }
        if n <= 512 {
            let err = assemble_dense(&plan)?.max_abs_diff(&dft_matrix(n)?);
            println!("  dense product vs F_{n}: {err:.2e}");
        }
    }
    let json = FftPlan::for_length(n.min(8), PlanKind::DifW, &policy)?.to_json();
    println!("\nplan document for N = {}:\n{json}", n.min(8));
    Ok(())
}
