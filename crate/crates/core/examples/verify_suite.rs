use mrfft::verify::{self, VerifyOptions};

/// Runs the identity and oracle suites up to a size bound given on the
/// command line (default 32) and exits non-zero if any check fails.
fn main() {
    let max_n = std::env::args().nth(1).map_or(32, |a| a.parse().expect("size bound"));
    let report = verify::run(&VerifyOptions {
        max_n,
        ..VerifyOptions::default()
    });
    print!("{}", report.to_text());
    if !report.all_passed() {
        std::process::exit(1);
    }
}
