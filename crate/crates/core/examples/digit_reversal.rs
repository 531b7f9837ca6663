//! Mixed-radix numbering and digit reversal.
//!
//! Run with `cargo run --example digit_reversal -- 3 4 2` to pick the
//! radix tuple (most significant first).

use mrfft::index::{digit_reverse_perm, stride_perm};
use mrfft::RadixTuple;

fn main() -> mrfft::Result<()> {
    let radices: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("radices are positive integers"))
        .collect();
    let alpha = RadixTuple::new(if radices.is_empty() { vec![3, 4, 2] } else { radices })?;
    let reversed = alpha.reversed();
    let perm = digit_reverse_perm(&alpha);

    println!("alpha = {:?}, N = {}", alpha.as_slice(), alpha.size());
    println!("{:>4}  {:<12} {:<12} {:>4}", "n", "digits", "reversed", "P n");
    for n in 0..alpha.size() {
        let digits = alpha.decode(n)?;
        let rev = digits.reversed();
        println!(
            "{n:>4}  {:<12} {:<12} {:>4}",
            format!("{:?}", digits.as_slice()),
            format!("{:?}", rev.as_slice()),
            perm.apply(n)
        );
        assert_eq!(perm.apply(reversed.encode(&rev)?), n);
    }

    let undo = digit_reverse_perm(&reversed);
    assert!(perm.compose(&undo)?.is_identity());
    println!("reversing with the mirrored tuple undoes the permutation");

    // two digits: digit reversal is a stride permutation
    let pair = RadixTuple::new(vec![4, 6])?;
    assert_eq!(digit_reverse_perm(&pair), stride_perm(24, 6)?);
    println!("(4, 6) digit reversal equals L^24_6");
    Ok(())
}
