//! Mixed-radix numbering systems and the index maps of every permutation
//! operator used by the factorization.
//!
//! A [`RadixTuple`] `(n_K, …, n_0)` generates the positional system
//!
//! ```text
//! n = p_0 + n_0 (p_1 + n_1 (p_2 + … + n_{K-1} p_K))
//! ```
//!
//! Storage order is the tuple order: index 0 of the backing vector holds
//! the most significant radix `n_K`, the last element holds `n_0`. Stage
//! accessors such as [`RadixTuple::radix`] take the stage number `k` and
//! translate it, so callers never index the vector directly.

use crate::error::{Error, Result};

/// Ordered radix tuple `(n_K, …, n_0)`, each radix at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RadixTuple {
    radices: Vec<usize>,
    size: usize,
}

impl RadixTuple {
    /// Builds a tuple from radices listed most significant first.
    pub fn new(radices: Vec<usize>) -> Result<Self> {
        if radices.is_empty() {
            return Err(Error::domain("radix tuple must contain at least one radix"));
        }
        if let Some(pos) = radices.iter().position(|&r| r == 0) {
            return Err(Error::domain(format!("radix at position {pos} is zero")));
        }
        let size = radices
            .iter()
            .try_fold(1usize, |acc, &r| acc.checked_mul(r))
            .ok_or_else(|| Error::domain("product of radices overflows the index range"))?;
        Ok(Self { radices, size })
    }

    /// Radices in tuple order, `n_K` first.
    pub fn as_slice(&self) -> &[usize] {
        &self.radices
    }

    /// Number of digits, `K + 1`.
    pub fn len(&self) -> usize {
        self.radices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of the last stage, `K`.
    pub fn last_stage(&self) -> usize {
        self.radices.len() - 1
    }

    /// `N = |α|`, the count of encoded numbers.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Radix `n_k` of digit position `k` (0 is least significant).
    pub fn radix(&self, k: usize) -> usize {
        self.radices[self.radices.len() - 1 - k]
    }

    fn check_stage(&self, k: usize) -> Result<()> {
        if k > self.last_stage() {
            Err(Error::domain(format!(
                "stage {k} out of range for a {}-digit tuple",
                self.len()
            )))
        } else {
            Ok(())
        }
    }

    /// `N_k = n_0 · n_1 ⋯ n_k`.
    pub fn prefix_product(&self, k: usize) -> Result<usize> {
        self.check_stage(k)?;
        Ok((0..=k).map(|j| self.radix(j)).product())
    }

    /// `M_k = m_k · m_{k+1} ⋯ m_K`; equals 1 for `k = K + 1` and beyond.
    pub fn suffix_product(&self, k: usize) -> usize {
        (k..self.len()).map(|j| self.radix(j)).product()
    }

    /// The reversed tuple `α⋆ = (n_0, …, n_K)`.
    pub fn reversed(&self) -> Self {
        let mut radices = self.radices.clone();
        radices.reverse();
        Self {
            radices,
            size: self.size,
        }
    }

    /// Tuple extended on the most significant side, `(M, α)`.
    pub fn prepend(&self, radix: usize) -> Result<Self> {
        let mut radices = Vec::with_capacity(self.len() + 1);
        radices.push(radix);
        radices.extend_from_slice(&self.radices);
        Self::new(radices)
    }

    /// Tuple extended on the least significant side, `(α, M)`.
    pub fn append(&self, radix: usize) -> Result<Self> {
        let mut radices = self.radices.clone();
        radices.push(radix);
        Self::new(radices)
    }

    /// Digits of `n` in this numbering system, `p = n_α`.
    pub fn decode(&self, n: usize) -> Result<DigitVector> {
        if n >= self.size {
            return Err(Error::domain(format!(
                "index {n} out of range for numbering system of size {}",
                self.size
            )));
        }
        let mut digits = vec![0; self.len()];
        let mut rest = n;
        for (slot, &r) in digits.iter_mut().zip(&self.radices).rev() {
            *slot = rest % r;
            rest /= r;
        }
        Ok(DigitVector { digits })
    }

    /// Value of a matched digit vector, `n = p^α`.
    pub fn encode(&self, p: &DigitVector) -> Result<usize> {
        if p.digits.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: p.digits.len(),
            });
        }
        let mut n = 0;
        for (pos, (&d, &r)) in p.digits.iter().zip(&self.radices).enumerate() {
            if d >= r {
                return Err(Error::domain(format!(
                    "digit {d} at position {pos} not below radix {r}"
                )));
            }
            n = n * r + d;
        }
        Ok(n)
    }
}

/// Digits `(p_K, …, p_0)` matched with some [`RadixTuple`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitVector {
    digits: Vec<usize>,
}

impl DigitVector {
    pub fn new(digits: Vec<usize>) -> Self {
        Self { digits }
    }

    /// Digits in tuple order, `p_K` first.
    pub fn as_slice(&self) -> &[usize] {
        &self.digits
    }

    /// `p⋆ = (p_0, …, p_K)`.
    pub fn reversed(&self) -> Self {
        let mut digits = self.digits.clone();
        digits.reverse();
        Self { digits }
    }

    /// Moves the digit at position `k` (counted from the least significant
    /// end) to the least significant position.
    pub fn rotate_to_low(&self, k: usize) -> Result<Self> {
        let len = self.digits.len();
        if k >= len {
            return Err(Error::domain(format!("digit position {k} out of range")));
        }
        let mut digits = self.digits.clone();
        let d = digits.remove(len - 1 - k);
        digits.push(d);
        Ok(Self { digits })
    }
}

/// A bijection on `0..N`, materialized as its image array.
///
/// Cycle leaders (smallest element of each non-trivial cycle) are computed
/// once at construction so in-place application needs no marker storage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexPermutation {
    forward: Vec<usize>,
    cycle_leaders: Vec<usize>,
}

impl IndexPermutation {
    /// Validates that `forward` is a bijection on `0..forward.len()`.
    pub fn from_vec(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut seen = vec![false; n];
        for (i, &f) in forward.iter().enumerate() {
            if f >= n {
                return Err(Error::domain(format!("image {f} of {i} outside 0..{n}")));
            }
            if std::mem::replace(&mut seen[f], true) {
                return Err(Error::domain(format!("image {f} hit twice; not a bijection")));
            }
        }
        Ok(Self::from_bijection(forward))
    }

    fn from_bijection(forward: Vec<usize>) -> Self {
        let mut visited = vec![false; forward.len()];
        let mut cycle_leaders = Vec::new();
        for start in 0..forward.len() {
            if visited[start] {
                continue;
            }
            visited[start] = true;
            let mut j = forward[start];
            if j == start {
                continue;
            }
            cycle_leaders.push(start);
            while j != start {
                visited[j] = true;
                j = forward[j];
            }
        }
        Self {
            forward,
            cycle_leaders,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            forward: (0..n).collect(),
            cycle_leaders: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    #[inline]
    pub fn apply(&self, n: usize) -> usize {
        self.forward[n]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.forward
    }

    pub fn cycle_leaders(&self) -> &[usize] {
        &self.cycle_leaders
    }

    pub fn is_identity(&self) -> bool {
        self.cycle_leaders.is_empty()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &f) in self.forward.iter().enumerate() {
            inv[f] = i;
        }
        Self {
            forward: inv,
            cycle_leaders: self.cycle_leaders.clone(),
        }
    }

    /// Permutation of the matrix product `self · other`: `n ↦ self(other(n))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(Self::from_bijection(
            other.forward.iter().map(|&j| self.forward[j]).collect(),
        ))
    }

    /// `I_copies ⊗ self`: the map repeated on consecutive blocks.
    pub fn tiled(&self, copies: usize) -> Self {
        let n = self.len();
        let forward = (0..copies)
            .flat_map(|b| self.forward.iter().map(move |&f| b * n + f))
            .collect();
        Self::from_bijection(forward)
    }
}

/// Digit reversal `P_α`: `n ↦ ((n_{α⋆})⋆)^α`.
pub fn digit_reverse_perm(alpha: &RadixTuple) -> IndexPermutation {
    let star = alpha.reversed();
    let forward = (0..alpha.size())
        .map(|n| {
            let p = star.decode(n).expect("n below |α|").reversed();
            alpha.encode(&p).expect("reversed digits match α")
        })
        .collect();
    IndexPermutation::from_bijection(forward)
}

/// Stride permutation `L^n_k`: `i·m + j ↦ j·k + i` with `m = n / k`.
pub fn stride_perm(n: usize, k: usize) -> Result<IndexPermutation> {
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::domain(format!("stride {k} does not divide {n}")));
    }
    let m = n / k;
    let mut forward = vec![0; n];
    for i in 0..k {
        for j in 0..m {
            forward[i * m + j] = j * k + i;
        }
    }
    Ok(IndexPermutation::from_bijection(forward))
}

/// DIT stage permutation `A_k = I_{N/N_k} ⊗ L^{N_k}_{n_k}`.
pub fn stage_perm_a(alpha: &RadixTuple, k: usize) -> Result<IndexPermutation> {
    let block = alpha.prefix_product(k)?;
    let inner = stride_perm(block, alpha.radix(k))?;
    Ok(inner.tiled(alpha.size() / block))
}

/// DIF stage permutation `B_k = I_{N/M_k} ⊗ L^{M_k}_{m_k}`.
pub fn stage_perm_b(beta: &RadixTuple, k: usize) -> Result<IndexPermutation> {
    beta.check_stage(k)?;
    let block = beta.suffix_product(k);
    let inner = stride_perm(block, beta.radix(k))?;
    Ok(inner.tiled(beta.size() / block))
}
