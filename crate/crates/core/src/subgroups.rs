//! Finite-index subgroups of the free group `F_r` and their conjugacy classes.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{Pow, Zero};

use crate::arith;
use crate::error::{guard, Error, Result};
use crate::mapcount::factorial;

pub const MAX_INDEX: u64 = 12;

fn check(rank: u64, index: u64) -> Result<u32> {
    if rank == 0 {
        return Err(Error::NonPositive(0));
    }
    if index == 0 {
        return Err(Error::NonPositive(0));
    }
    guard("subgroup index", index, MAX_INDEX)?;
    u32::try_from(rank).map_err(|_| Error::InvalidArgument(format!("rank {rank} is too large")))
}

/// `M(1), …, M(n)` by Hall's recursion.
fn hall_sequence(rank: u32, n: u64) -> Vec<BigUint> {
    let mut m: Vec<BigUint> = Vec::with_capacity(n as usize);
    for k in 1..=n {
        let lead: BigUint = BigUint::from(k) * Pow::pow(factorial(k), rank - 1);
        let correction: BigUint = (1..k)
            .map(|i| Pow::pow(factorial(k - i), rank - 1) * &m[(i - 1) as usize])
            .sum();
        m.push(lead - correction);
    }
    m
}

/// Number of subgroups of index `n` in the free group of rank `r`.
pub fn free_group_subgroups(rank: u64, index: u64) -> Result<BigUint> {
    let r = check(rank, index)?;
    Ok(hall_sequence(r, index).pop().expect("index ≥ 1"))
}

/// Number of conjugacy classes of index-`n` subgroups of `F_r`:
/// `(1/n) Σ_{d|n} φ_{(r−1)d+1}(n/d) M(d)`.
pub fn free_group_conjugacy_classes(rank: u64, index: u64) -> Result<BigUint> {
    let r = check(rank, index)?;
    let m = hall_sequence(r, index);
    let mut sum = BigUint::zero();
    for d in arith::divisors(index)? {
        let k = u32::try_from((r as u64 - 1) * d + 1)
            .map_err(|_| Error::InvalidArgument(format!("rank {rank} is too large")))?;
        sum += arith::jordan_phi(k, index / d)? * &m[(d - 1) as usize];
    }
    let (q, rem) = sum.div_rem(&BigUint::from(index));
    if !rem.is_zero() {
        return Err(Error::Internal(format!(
            "class sum {sum} for rank {rank}, index {index} is not divisible by {index}"
        )));
    }
    Ok(q)
}

pub const ORACLE_GUARD: u64 = 200_000;

/// Counts index-`n` subgroups and their classes by listing transitive actions
/// of `F_r` on `{0, …, n−1}`: subgroups are point stabilisers of such actions
/// (each counted `(n−1)!` times), classes are actions up to relabelling.
pub fn transitive_action_oracle(rank: u64, index: u64) -> Result<(BigUint, BigUint)> {
    let r = check(rank, index)?;
    let n = index as usize;
    let perms = all_permutations(n);
    let tuples = (perms.len() as u128).checked_pow(r).unwrap_or(u128::MAX);
    guard(
        "action search size",
        tuples * perms.len() as u128,
        ORACLE_GUARD,
    )?;

    let mut actions = 0u64;
    let mut classes = BTreeSet::new();
    let mut pick = vec![0usize; r as usize];
    loop {
        let gens: Vec<&Vec<usize>> = pick.iter().map(|&i| &perms[i]).collect();
        if transitive(n, &gens) {
            actions += 1;
            let canon = perms
                .iter()
                .map(|c| gens.iter().map(|g| conjugate(g, c)).collect::<Vec<_>>())
                .min()
                .expect("symmetric group is nonempty");
            classes.insert(canon);
        }
        let mut i = 0;
        loop {
            if i == pick.len() {
                let per_subgroup = factorial(index - 1);
                return Ok((
                    BigUint::from(actions) / per_subgroup,
                    BigUint::from(classes.len()),
                ));
            }
            pick[i] += 1;
            if pick[i] < perms.len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for k in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=k).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    q
                })
            })
            .collect();
    }
    out
}

fn transitive(n: usize, gens: &[&Vec<usize>]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g[x];
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn conjugate(g: &[usize], c: &[usize]) -> Vec<usize> {
    let mut out = vec![0; g.len()];
    for x in 0..g.len() {
        out[c[x]] = c[g[x]];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn examples() {
        for r in 1..5 {
            assert_eq!(free_group_subgroups(r, 1).unwrap(), n(1));
            assert_eq!(free_group_conjugacy_classes(r, 1).unwrap(), n(1));
        }
        let m: Vec<BigUint> = (1..=3)
            .map(|k| free_group_subgroups(2, k).unwrap())
            .collect();
        assert_eq!(m, [n(1), n(3), n(13)]);
        let c: Vec<BigUint> = (1..=3)
            .map(|k| free_group_conjugacy_classes(2, k).unwrap())
            .collect();
        assert_eq!(c, [n(1), n(3), n(7)]);
        assert_eq!(free_group_subgroups(2, 4).unwrap(), n(71));
        assert_eq!(free_group_conjugacy_classes(2, 4).unwrap(), n(26));
        // Z has one subgroup of each index.
        for k in 1..=MAX_INDEX {
            assert_eq!(free_group_subgroups(1, k).unwrap(), n(1));
            assert_eq!(free_group_conjugacy_classes(1, k).unwrap(), n(1));
        }
        assert!(free_group_subgroups(2, 13).is_err());
        assert!(free_group_subgroups(0, 2).is_err());
    }

    #[test]
    fn matches_action_enumeration() {
        for (r, max_n) in [(1, 5), (2, 4), (3, 3)] {
            for k in 1..=max_n {
                let (subs, classes) = transitive_action_oracle(r, k).unwrap();
                assert_eq!(subs, free_group_subgroups(r, k).unwrap(), "r={r} n={k}");
                assert_eq!(
                    classes,
                    free_group_conjugacy_classes(r, k).unwrap(),
                    "r={r} n={k}"
                );
            }
        }
    }

    #[test]
    fn integrality_and_bounds() {
        for r in 1..=4 {
            for k in 1..=8 {
                let m = free_group_subgroups(r, k).unwrap();
                let c = free_group_conjugacy_classes(r, k).unwrap();
                assert!(c <= m);
            }
        }
        for k in 1..=2 {
            assert_eq!(
                free_group_subgroups(2, k).unwrap(),
                free_group_conjugacy_classes(2, k).unwrap()
            );
        }
    }
}
