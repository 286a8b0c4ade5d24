//! Cyclic orbifolds: signatures, the Riemann–Hurwitz relation, Harvey's
//! admissibility conditions and their enumerative counterpart, and the
//! enumeration of all quotients of a genus-`γ` surface by `Z_ℓ`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith;
use crate::error::{guard, Error, Result};
use crate::orbicyclic::{local_profile, PeriodTuple};

pub const MAX_GAMMA: u64 = 6;
pub const MAX_ORDER: u64 = 200;

/// `(g; m_1, …, m_r)`: quotient genus and branch orders, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbifoldSignature {
    genus: u64,
    periods: PeriodTuple,
}

impl OrbifoldSignature {
    pub fn new<I: IntoIterator<Item = u64>>(genus: u64, periods: I) -> Result<Self> {
        let periods = PeriodTuple::new(periods)?;
        if let Some(&bad) = periods.values().iter().find(|&&m| m < 2) {
            return Err(Error::InvalidArgument(format!(
                "branch orders must be at least 2, got {bad}"
            )));
        }
        Ok(OrbifoldSignature { genus, periods })
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn periods(&self) -> &PeriodTuple {
        &self.periods
    }

    pub fn branch_count(&self) -> usize {
        self.periods.len()
    }

    /// lcm of the branch orders (1 when there are none).
    pub fn lcm(&self) -> u64 {
        self.periods.lcm()
    }

    /// Multiplicity of each branch order: `b_i` = number of periods equal to `i`.
    pub fn branch_multiplicities(&self) -> BTreeMap<u64, u32> {
        let mut b = BTreeMap::new();
        for &m in self.periods.values() {
            *b.entry(m).or_insert(0) += 1;
        }
        b
    }

    /// Orbifold Euler characteristic `2 − 2g − Σ (1 − 1/m_j)`.
    pub fn euler_characteristic(&self) -> BigRational {
        let mut chi = BigRational::from_integer(BigInt::from(2) - BigInt::from(2 * self.genus));
        for &m in self.periods.values() {
            chi -= BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(m));
        }
        chi
    }
}

impl fmt::Display for OrbifoldSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.genus)?;
        for (i, m) in self.periods.values().iter().enumerate() {
            write!(f, "{}{m}", if i == 0 { " " } else { ", " })?;
        }
        f.write_str(")")
    }
}

/// Surface genus `γ` with `2 − 2γ = ℓ · χ(sig)`, if that is a nonnegative integer.
pub fn rh_gamma(sig: &OrbifoldSignature, ell: u64) -> Option<u64> {
    if ell == 0 {
        return None;
    }
    let lhs = sig.euler_characteristic() * BigRational::from_integer(BigInt::from(ell));
    if !lhs.is_integer() {
        return None;
    }
    let two_minus_two_gamma = lhs.to_integer();
    let rest: BigInt = BigInt::from(2) - two_minus_two_gamma;
    if rest < BigInt::zero() || (&rest % 2u32) != BigInt::zero() {
        return None;
    }
    (rest / 2u32).to_u64()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HarveyCondition {
    RiemannHurwitz,
    /// Dropping any single period keeps the lcm.
    H1,
    /// `m | ℓ`, and `m = ℓ` when `g = 0`.
    H2,
    /// `r ≠ 1`, and `r ≥ 3` when `g = 0`.
    H3,
    /// `r = 2` when `γ = 0`; `r ∈ {0, 3, 4}` when `γ = 1`.
    H3a,
    /// For even `m`, an even number of periods carry the full power of 2 in `m`.
    H4,
}

impl fmt::Display for HarveyCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HarveyCondition::RiemannHurwitz => "RH",
            HarveyCondition::H1 => "H1",
            HarveyCondition::H2 => "H2",
            HarveyCondition::H3 => "H3",
            HarveyCondition::H3a => "H3a",
            HarveyCondition::H4 => "H4",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarveyReport {
    pub violations: Vec<HarveyCondition>,
}

impl HarveyReport {
    pub fn admissible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Harvey's conditions for a `Z_ℓ` action on a genus-`γ` surface with quotient
/// signature `sig`.
///
/// For `γ = 0` the low-genus rule H3a takes the place of H3; for `γ = 1` it is
/// checked in addition to H3. The trivial group `ℓ = 1` has no branching
/// constraint beyond H2 and skips H3/H3a.
pub fn harvey_admissible(sig: &OrbifoldSignature, ell: u64, gamma: u64) -> HarveyReport {
    let mut violations = Vec::new();
    if rh_gamma(sig, ell) != Some(gamma) {
        violations.push(HarveyCondition::RiemannHurwitz);
    }
    let periods = sig.periods().values();
    let m = sig.lcm();
    let r = periods.len();

    let lcm_kept = (0..r).all(|skip| {
        let others: Vec<u64> = periods
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &v)| v)
            .collect();
        arith::lcm_all(&others) == Some(m)
    });
    if !lcm_kept {
        violations.push(HarveyCondition::H1);
    }

    if ell == 0 || !ell.is_multiple_of(m) || (sig.genus() == 0 && m != ell) {
        violations.push(HarveyCondition::H2);
    }

    if ell > 1 {
        let h3 = r != 1 && (sig.genus() != 0 || r >= 3);
        let h3a = match gamma {
            0 => r == 2,
            1 => matches!(r, 0 | 3 | 4),
            _ => true,
        };
        if gamma != 0 && !h3 {
            violations.push(HarveyCondition::H3);
        }
        if !h3a {
            violations.push(HarveyCondition::H3a);
        }
    }

    if m.is_multiple_of(2) {
        let top = 1u64 << m.trailing_zeros();
        let carriers = periods.iter().filter(|&&v| v % top == 0).count();
        if carriers % 2 == 1 {
            violations.push(HarveyCondition::H4);
        }
    }
    HarveyReport { violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EpiCondition {
    /// `m ∤ ℓ`.
    E1,
    /// `g = 0` and `ℓ > m`.
    E2,
    /// Some odd prime has its top power in exactly one period.
    E3,
    /// `m` even and the top power of 2 occurs an odd number of times.
    E4,
}

impl fmt::Display for EpiCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EpiCondition::E1 => "E1",
            EpiCondition::E2 => "E2",
            EpiCondition::E3 => "E3",
            EpiCondition::E4 => "E4",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpiReport {
    /// Conditions that hold (each one forces the epimorphism count to zero).
    pub violations: Vec<EpiCondition>,
}

impl EpiReport {
    pub fn nonvanishing(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the four conditions under which no order-preserving epimorphism
/// `π_1(sig) → Z_ℓ` exists.
pub fn epi_nonvanishing(sig: &OrbifoldSignature, ell: u64) -> EpiReport {
    let mut violations = Vec::new();
    let m = sig.lcm();
    if ell == 0 || !ell.is_multiple_of(m) {
        violations.push(EpiCondition::E1);
    }
    if sig.genus() == 0 && ell > m {
        violations.push(EpiCondition::E2);
    }
    let f = arith::factorize(m).expect("lcm is positive");
    let mut e3 = false;
    let mut e4 = false;
    for p in f.primes() {
        let s = local_profile(sig.periods(), p)
            .expect("p divides the lcm")
            .s;
        if p == 2 && s % 2 == 1 {
            e4 = true;
        } else if p != 2 && s == 1 {
            e3 = true;
        }
    }
    if e3 {
        violations.push(EpiCondition::E3);
    }
    if e4 {
        violations.push(EpiCondition::E4);
    }
    EpiReport { violations }
}

fn check_enumeration_bounds(gamma: u64, ell: u64) -> Result<()> {
    guard("surface genus", gamma, MAX_GAMMA)?;
    guard("group order", ell, MAX_ORDER)?;
    if ell == 0 {
        return Err(Error::NonPositive(0));
    }
    Ok(())
}

/// Every signature `(g; m_1, …, m_r)` with each `m_j ≥ 2` dividing `ℓ` that
/// satisfies Riemann–Hurwitz for `(γ, ℓ)`. No admissibility filter.
pub fn candidate_signatures(gamma: u64, ell: u64) -> Result<Vec<OrbifoldSignature>> {
    check_enumeration_bounds(gamma, ell)?;
    let mut periods_desc: Vec<u64> = arith::divisors(ell)?
        .into_iter()
        .filter(|&d| d >= 2)
        .collect();
    periods_desc.reverse();

    let mut out = Vec::new();
    // The weight target shrinks as g grows, so the genus bound comes for free.
    for g in 0.. {
        // Σ_j ℓ(1 − 1/m_j) must equal 2γ − 2 + ℓ(2 − 2g).
        let target = 2 * gamma as i128 - 2 + ell as i128 * (2 - 2 * g as i128);
        if target < 0 {
            break;
        }
        let mut chosen = Vec::new();
        collect_periods(
            ell,
            &periods_desc,
            0,
            target as u64,
            &mut chosen,
            &mut |ps| {
                out.push(OrbifoldSignature::new(g, ps.iter().copied()).expect("periods ≥ 2"));
            },
        );
    }
    out.sort();
    Ok(out)
}

// Nonincreasing period multisets whose weights ℓ − ℓ/m sum to `remaining`.
fn collect_periods(
    ell: u64,
    periods_desc: &[u64],
    start: usize,
    remaining: u64,
    chosen: &mut Vec<u64>,
    emit: &mut dyn FnMut(&[u64]),
) {
    if remaining == 0 {
        emit(chosen);
        return;
    }
    for (i, &m) in periods_desc.iter().enumerate().skip(start) {
        let w = ell - ell / m;
        if w > remaining {
            continue;
        }
        chosen.push(m);
        collect_periods(ell, periods_desc, i, remaining - w, chosen, emit);
        chosen.pop();
    }
}

/// All signatures in `Orb(S_γ / Z_ℓ)`, sorted.
pub fn enumerate_orbifolds(gamma: u64, ell: u64) -> Result<Vec<OrbifoldSignature>> {
    Ok(candidate_signatures(gamma, ell)?
        .into_iter()
        .filter(|sig| epi_nonvanishing(sig, ell).nonvanishing())
        .collect())
}

/// A quotient orbifold together with the order of the acting group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicQuotient {
    pub ell: u64,
    pub signature: OrbifoldSignature,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub gamma: u64,
    /// Distinct signatures over all group orders.
    pub total: u64,
    /// Distinct signatures per quotient genus.
    pub by_genus: BTreeMap<u64, u64>,
    /// Number of `(signature, ℓ)` pairs, the alternative counting.
    pub pair_count: u64,
    pub quotients: Vec<CyclicQuotient>,
}

/// `A(γ)` and `A_g(γ)`: the size of `⋃_ℓ Orb(S_γ / Z_ℓ)` and its split by
/// quotient genus. Only `γ ≥ 2`, where the union is finite (`ℓ ≤ 4γ + 2`).
pub fn census(gamma: u64) -> Result<Census> {
    if gamma < 2 {
        return Err(Error::InvalidArgument(format!(
            "the orbifold census is infinite for genus {gamma}; need γ ≥ 2"
        )));
    }
    guard("surface genus", gamma, MAX_GAMMA)?;
    let mut quotients = Vec::new();
    for ell in 1..=4 * gamma + 2 {
        for signature in enumerate_orbifolds(gamma, ell)? {
            quotients.push(CyclicQuotient { ell, signature });
        }
    }
    let distinct: BTreeSet<&OrbifoldSignature> = quotients.iter().map(|q| &q.signature).collect();
    let mut by_genus = BTreeMap::new();
    for sig in &distinct {
        *by_genus.entry(sig.genus()).or_insert(0) += 1;
    }
    Ok(Census {
        gamma,
        total: distinct.len() as u64,
        by_genus,
        pair_count: quotients.len() as u64,
        quotients,
    })
}
