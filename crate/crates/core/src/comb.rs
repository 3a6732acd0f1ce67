//! Composition (type-class) enumeration and exact multiset counting.
//!
//! A length-`n` IID sequence's probability depends only on its symbol counts,
//! so anything summed over sequences can instead be summed over the
//! compositions of `n` into `k` parts, with exact multinomial multiplicities.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// Number of compositions of `n` into `k` nonnegative parts: C(n+k-1, k-1).
pub fn composition_count(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k.saturating_sub(1) {
        acc = acc * (n as u128 + i as u128 + 1) / (i as u128 + 1);
    }
    acc
}

/// All count vectors `c` with `c.len() == k` and `sum(c) == n`, in
/// lexicographic order. Errors if the class count exceeds `cap`.
pub fn compositions(n: usize, k: usize, cap: u128) -> Result<Vec<Vec<usize>>> {
    let need = composition_count(n, k);
    if need > cap {
        return Err(Error::SizeCapExceeded {
            need,
            cap,
            context: format!("compositions of {n} into {k} parts"),
        });
    }
    let mut out = Vec::with_capacity(need as usize);
    let mut current = vec![0usize; k];
    fill(n, 0, &mut current, &mut out);
    Ok(out)
}

fn fill(remaining: usize, position: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if position == current.len() - 1 {
        current[position] = remaining;
        out.push(current.clone());
        return;
    }
    for value in 0..=remaining {
        current[position] = value;
        fill(remaining - value, position + 1, current, out);
    }
}

/// Exact multinomial coefficient n! / prod(counts[i]!), with n = sum(counts).
pub fn multinomial(counts: &[usize]) -> BigUint {
    let mut result = BigUint::one();
    let mut seen = 0usize;
    for &c in counts {
        // Multiply in C(seen + c, c) incrementally.
        for i in 1..=c {
            seen += 1;
            result = result * BigUint::from(seen) / BigUint::from(i);
        }
    }
    result
}

/// log2 of a positive big integer, accurate to f64 precision at any size.
pub fn log2_biguint(value: &BigUint) -> f64 {
    let bits = value.bits();
    if bits <= 53 {
        return value.to_f64().expect("small biguint").log2();
    }
    let shift = bits - 53;
    let top = (value >> shift).to_f64().expect("53-bit mantissa");
    top.log2() + shift as f64
}
