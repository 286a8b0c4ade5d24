//! Counting solutions of the restricted congruence
//! `x_1 + … + x_r ≡ 0 (mod M)` with `gcd(x_j, M) = M / m_j`.
//!
//! The count equals `E(m_1, …, m_r)` for every admissible `M`, which makes
//! this an independent combinatorial check on the closed form.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::error::{guard, Error, Result};
use crate::orbicyclic::PeriodTuple;

pub const MODULUS_GUARD: u64 = 10_000;

pub fn count_congruence_solutions(modulus: u64, t: &PeriodTuple) -> Result<BigUint> {
    count_congruence_solutions_with(modulus, t, MODULUS_GUARD)
}

pub fn count_congruence_solutions_with(
    modulus: u64,
    t: &PeriodTuple,
    modulus_limit: u64,
) -> Result<BigUint> {
    if modulus == 0 {
        return Err(Error::NonPositive(0));
    }
    for &m in t.values() {
        if !modulus.is_multiple_of(m) {
            return Err(Error::NotDivisible { modulus, period: m });
        }
    }
    guard("congruence modulus", modulus, modulus_limit)?;

    let Some((&last, rest)) = t.values().split_last() else {
        return Ok(BigUint::one());
    };
    let gcd_of = |x: u64| if x == 0 { modulus } else { x.gcd(&modulus) };

    // ways[x] = number of partial assignments whose running sum is x mod M.
    let mut ways = vec![0u128; modulus as usize];
    ways[0] = 1;
    for &m in rest {
        let d = modulus / m;
        let class: Vec<u64> = (0..modulus).filter(|&x| gcd_of(x) == d).collect();
        let mut next = vec![0u128; modulus as usize];
        for (sum, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for &x in &class {
                let slot = &mut next[((sum as u64 + x) % modulus) as usize];
                *slot = slot.checked_add(w).ok_or(Error::GuardExceeded {
                    what: "congruence solution count",
                    value: u128::MAX,
                    limit: u128::MAX,
                })?;
            }
        }
        ways = next;
    }

    // The last coordinate is forced to −(sum of the others).
    let last_gcd = modulus / last;
    let count: u128 = ways
        .iter()
        .enumerate()
        .filter(|&(sum, _)| gcd_of((modulus - sum as u64) % modulus) == last_gcd)
        .map(|(_, &w)| w)
        .sum();
    Ok(BigUint::from(count))
}
