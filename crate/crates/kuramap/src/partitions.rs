//! Enumeration of partitions of an odd integer into an odd number of odd
//! parts, with ordered-arrangement multiplicities.
//!
//! The series recursion sums Hadamard products over ordered tuples of odd
//! indices; enumerating multisets once and weighting each by its multinomial
//! coefficient avoids redundant products over permutations.

use crate::error::{Error, Result};

/// A multiset of `2k + 1` odd parts summing to `2j + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddPartition {
    /// Parts in non-increasing order; every part is odd and >= 1.
    pub parts: Vec<usize>,
    /// Number of distinct ordered arrangements of the multiset,
    /// `(2k+1)! / prod_v (count of part v)!`.
    pub multiplicity: u128,
}

/// All partitions of `2j + 1` into exactly `2k + 1` odd parts, in
/// lexicographically decreasing order of parts.
pub fn odd_partitions(j: usize, k: usize) -> Result<Vec<OddPartition>> {
    if k < 1 || k > j {
        return Err(Error::InvalidRange { j, k });
    }
    let total = 2 * j + 1;
    let count = 2 * k + 1;
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(count);
    descend(total, count, total, &mut stack, &mut out);
    Ok(out)
}

fn descend(
    remaining: usize,
    slots: usize,
    max_part: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<OddPartition>,
) {
    if slots == 0 {
        if remaining == 0 {
            out.push(OddPartition {
                parts: stack.clone(),
                multiplicity: multiset_arrangements(stack),
            });
        }
        return;
    }
    // each remaining slot takes at least 1; parity of `remaining` must match
    // the number of odd parts still to place
    if remaining < slots || remaining % 2 != slots % 2 {
        return;
    }
    let mut part = max_part.min(remaining - (slots - 1));
    if part % 2 == 0 {
        part -= 1;
    }
    while part >= 1 {
        stack.push(part);
        descend(remaining - part, slots - 1, part, stack, out);
        stack.pop();
        if part < 2 {
            break;
        }
        part -= 2;
    }
}

/// Multinomial coefficient counting ordered arrangements of a multiset.
fn multiset_arrangements(parts: &[usize]) -> u128 {
    let mut mult = 1u128;
    let mut remaining = parts.len() as u128;
    let mut idx = 0;
    while idx < parts.len() {
        let value = parts[idx];
        let mut run = 0u128;
        while idx < parts.len() && parts[idx] == value {
            run += 1;
            idx += 1;
        }
        mult *= binomial(remaining, run);
        remaining -= run;
    }
    mult
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts_of(j: usize, k: usize) -> Vec<(Vec<usize>, u128)> {
        odd_partitions(j, k)
            .unwrap()
            .into_iter()
            .map(|p| (p.parts, p.multiplicity))
            .collect()
    }

    #[test]
    fn known_small_partitions() {
        assert_eq!(parts_of(1, 1), vec![(vec![1, 1, 1], 1)]);
        assert_eq!(parts_of(2, 1), vec![(vec![3, 1, 1], 3)]);
        assert_eq!(parts_of(3, 2), vec![(vec![3, 1, 1, 1, 1], 5)]);
        assert_eq!(
            parts_of(3, 1),
            vec![(vec![5, 1, 1], 3), (vec![3, 3, 1], 3)]
        );
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(odd_partitions(3, 0), Err(Error::InvalidRange { .. })));
        assert!(matches!(odd_partitions(3, 4), Err(Error::InvalidRange { .. })));
    }

    /// Independent count of ordered tuples of odd positives with a given
    /// length and sum.
    fn ordered_tuple_count(sum: usize, len: usize) -> u128 {
        if len == 0 {
            return u128::from(sum == 0);
        }
        let mut count = 0;
        let mut v = 1;
        while v <= sum {
            count += ordered_tuple_count(sum - v, len - 1);
            v += 2;
        }
        count
    }

    #[test]
    fn multiplicities_sum_to_ordered_tuple_count() {
        for j in 1..=10 {
            for k in 1..=j {
                let total: u128 = odd_partitions(j, k)
                    .unwrap()
                    .iter()
                    .map(|p| p.multiplicity)
                    .sum();
                assert_eq!(
                    total,
                    ordered_tuple_count(2 * j + 1, 2 * k + 1),
                    "j={j} k={k}"
                );
            }
        }
    }

    #[test]
    fn parts_are_odd_sorted_and_sum_correctly() {
        for j in 1..=9 {
            for k in 1..=j {
                for p in odd_partitions(j, k).unwrap() {
                    assert_eq!(p.parts.len(), 2 * k + 1);
                    assert_eq!(p.parts.iter().sum::<usize>(), 2 * j + 1);
                    assert!(p.parts.iter().all(|v| v % 2 == 1));
                    assert!(p.parts.windows(2).all(|w| w[0] >= w[1]));
                    assert!(p.multiplicity >= 1);
                }
            }
        }
    }
}
