//! The orbicyclic function `E(m_1, …, m_r)`.
//!
//! `E` is the average over one period of the product of von Sterneck values
//! `Φ(k, m_j)`. It is multiplicative, and at each prime `p | m` it depends only
//! on three numbers read off the tuple: the multiplicity `s` of the top power
//! of `p`, the excess exponent `v`, and the count `r_p` of entries divisible
//! by `p`. [`e_closed`] evaluates that product formula; [`e_bruteforce`] sums
//! the definition directly.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::arith::{self, Factorization};
use crate::error::{guard, Error, Result};

/// Default bound on the summation length of [`e_bruteforce`].
pub const BRUTEFORCE_GUARD: u64 = 1_000_000;
/// Bound on the number of triples [`nonvanishing_triples`] will materialize.
pub const TRIPLE_GUARD: u64 = 1_000_000;

/// Multiset of positive integers, stored in nonincreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodTuple {
    values: Vec<u64>,
    lcm: u64,
}

impl PeriodTuple {
    pub fn new<I: IntoIterator<Item = u64>>(values: I) -> Result<Self> {
        let mut values: Vec<u64> = values.into_iter().collect();
        if values.contains(&0) {
            return Err(Error::NonPositive(0));
        }
        values.sort_unstable_by(|a, b| b.cmp(a));
        let lcm = arith::lcm_all(&values)
            .ok_or_else(|| Error::InvalidArgument("lcm of the periods overflows u64".into()))?;
        Ok(PeriodTuple { values, lcm })
    }

    pub fn empty() -> Self {
        PeriodTuple {
            values: Vec::new(),
            lcm: 1,
        }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn lcm(&self) -> u64 {
        self.lcm
    }

    /// The tuple with every entry equal to 1 removed. `E` is unchanged.
    pub fn reduced(&self) -> PeriodTuple {
        PeriodTuple {
            values: self.values.iter().copied().filter(|&v| v > 1).collect(),
            lcm: self.lcm,
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.values.iter().all(|&v| v > 1)
    }

    /// Exponent of `p` in each entry, in the stored order.
    pub fn exponents_at(&self, p: u64) -> Vec<u32> {
        self.values
            .iter()
            .map(|&v| {
                let (mut v, mut e) = (v, 0);
                while v % p == 0 {
                    v /= p;
                    e += 1;
                }
                e
            })
            .collect()
    }
}

impl fmt::Display for PeriodTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Per-prime parameters of a tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalProfile {
    pub p: u64,
    /// Exponent of `p` in the lcm.
    pub a: u32,
    /// How many entries carry the full power `p^a`.
    pub s: u32,
    /// `Σ_{a_j ≥ 1} (a_j − 1) − a + 1`.
    pub v: u32,
    /// How many entries are divisible by `p`.
    pub r_p: u32,
}

impl LocalProfile {
    pub fn new(p: u64, a: u32, s: u32, v: u32, r_p: u32) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        if a == 0 || s == 0 || s > r_p {
            return Err(Error::InvalidArgument(format!(
                "invalid local profile: a={a} s={s} r_p={r_p} (need a ≥ 1, 1 ≤ s ≤ r_p)"
            )));
        }
        Ok(LocalProfile { p, a, s, v, r_p })
    }
}

/// Local profile of `t` at a prime `p` dividing its lcm.
pub fn local_profile(t: &PeriodTuple, p: u64) -> Result<LocalProfile> {
    if !arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if !t.lcm().is_multiple_of(p) {
        return Err(Error::InvalidArgument(format!(
            "{p} does not divide lcm {}",
            t.lcm()
        )));
    }
    let exps = t.exponents_at(p);
    let a = exps.iter().copied().max().unwrap_or(0);
    let s = exps.iter().filter(|&&e| e == a).count() as u32;
    let r_p = exps.iter().filter(|&&e| e > 0).count() as u32;
    let excess: u32 = exps.iter().filter(|&&e| e > 0).map(|&e| e - 1).sum();
    Ok(LocalProfile {
        p,
        a,
        s,
        v: excess + 1 - a,
        r_p,
    })
}

/// `h_s(x) = ((x − 1)^{s−1} + (−1)^s) / x`.
pub fn h_poly(s: u32, x: i64) -> Result<BigInt> {
    if s == 0 {
        return Err(Error::InvalidArgument("h_s needs s ≥ 1".into()));
    }
    if x == 0 {
        return Err(Error::InvalidArgument(
            "h_s(x) is undefined at x = 0".into(),
        ));
    }
    let sign: i32 = if s.is_multiple_of(2) { 1 } else { -1 };
    let num: BigInt = BigInt::from(x - 1).pow(s - 1) + sign;
    let (q, r) = num.div_rem(&BigInt::from(x));
    if !r.is_zero() {
        return Err(Error::Internal(format!("h_{s}({x}) is not an integer")));
    }
    Ok(q)
}

fn h_at_prime(s: u32, p: u64) -> BigUint {
    let h = h_poly(s, p as i64).expect("h_s at a prime is an exact nonnegative integer");
    h.to_biguint()
        .expect("h_s at a prime is an exact nonnegative integer")
}

/// `(p−1)^{r_p−s+1} · p^v · h_s(p)`, the local factor of `E` at `p`.
pub fn e_local(profile: &LocalProfile) -> BigUint {
    let p = BigUint::from(profile.p);
    let unit = Pow::pow(&p - 1u32, profile.r_p - profile.s + 1);
    unit * Pow::pow(p, profile.v) * h_at_prime(profile.s, profile.p)
}

/// `E(t)` through the multiplicative closed form.
pub fn e_closed(t: &PeriodTuple) -> BigUint {
    let f = arith::factorize(t.lcm()).expect("lcm is positive");
    let mut acc = BigUint::one();
    for p in f.primes() {
        let profile = local_profile(t, p).expect("p divides the lcm");
        acc *= e_local(&profile);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// `E(t)` by summing the defining average with `M = lcm(t)`.
pub fn e_bruteforce(t: &PeriodTuple) -> Result<BigUint> {
    e_bruteforce_with(t, None, BRUTEFORCE_GUARD)
}

/// `E(t)` by the defining average over an explicit period `modulus`
/// (any multiple of the lcm), refusing sums longer than `limit`.
pub fn e_bruteforce_with(t: &PeriodTuple, modulus: Option<u64>, limit: u64) -> Result<BigUint> {
    let modulus = modulus.unwrap_or(t.lcm());
    guard("summation length", modulus, limit)?;
    let mut cache: Vec<(u64, Factorization)> = Vec::new();
    for &m in t.values() {
        if !cache.iter().any(|(v, _)| *v == m) {
            cache.push((m, arith::factorize(m)?));
        }
    }
    let kernel = |k: u64, m: u64| {
        let f = &cache.iter().find(|(v, _)| *v == m).expect("cached").1;
        Ok(arith::von_sterneck_factored(k, f))
    };
    let avg = arith::periodic_average(kernel, t.values(), modulus)?;
    if !avg.is_integer() || avg.is_negative() {
        return Err(Error::Internal(format!("E{t} averaged to {avg}")));
    }
    Ok(avg.to_integer().to_biguint().expect("checked nonnegative"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VanishingCondition {
    /// An odd prime whose top power occurs in exactly one entry.
    UniqueTopPower,
    /// The top power of 2 occurs in an odd number of entries.
    OddTopMultiplicityAtTwo,
}

/// Why `E(t) = 0`: the first prime (ascending) whose local factor vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VanishingWitness {
    pub prime: u64,
    pub multiplicity: u32,
    pub condition: VanishingCondition,
}

impl fmt::Display for VanishingWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.condition {
            VanishingCondition::UniqueTopPower => write!(
                f,
                "the top power of the odd prime {} occurs only once",
                self.prime
            ),
            VanishingCondition::OddTopMultiplicityAtTwo => write!(
                f,
                "the top power of 2 occurs an odd number of times ({})",
                self.multiplicity
            ),
        }
    }
}

/// Structural zero test: `Some` exactly when `E(t) = 0`.
pub fn vanishing_witness(t: &PeriodTuple) -> Option<VanishingWitness> {
    let f = arith::factorize(t.lcm()).expect("lcm is positive");
    for (p, a) in f.factors().iter().copied() {
        let s = t.exponents_at(p).into_iter().filter(|&e| e == a).count() as u32;
        if p == 2 && s % 2 == 1 {
            return Some(VanishingWitness {
                prime: 2,
                multiplicity: s,
                condition: VanishingCondition::OddTopMultiplicityAtTwo,
            });
        }
        if p != 2 && s == 1 {
            return Some(VanishingWitness {
                prime: p,
                multiplicity: 1,
                condition: VanishingCondition::UniqueTopPower,
            });
        }
    }
    None
}

pub fn vanishes(t: &PeriodTuple) -> bool {
    vanishing_witness(t).is_some()
}

/// `E(m, …, m)` with `r` copies, evaluated multiplicatively in `m`.
pub fn f_r(m: u64, r: u32) -> Result<BigUint> {
    let f = arith::factorize(m)?;
    if r == 0 {
        return Ok(BigUint::one());
    }
    let mut acc = BigUint::one();
    for &(p, a) in f.factors() {
        let pb = BigUint::from(p);
        acc *= (&pb - 1u32) * Pow::pow(pb, (r - 1) * (a - 1)) * h_at_prime(r, p);
    }
    Ok(acc)
}

/// All ordered triples `(m_1, m_2, m_3)` with lcm `m` and `E ≠ 0`, sorted.
///
/// Built prime by prime: two entries carry `p^a`, the third `p^c` with
/// `0 ≤ c ≤ a`, and `c = a` is allowed only for odd `p`.
pub fn nonvanishing_triples(m: u64) -> Result<Vec<[u64; 3]>> {
    let f = arith::factorize(m)?;
    guard("triple count", nonvanishing_triple_count(m)?, TRIPLE_GUARD)?;
    let mut triples = vec![[1u64; 3]];
    for &(p, a) in f.factors() {
        let top = p.pow(a);
        let mut local: Vec<[u64; 3]> = Vec::new();
        for c in 0..a {
            let low = p.pow(c);
            local.push([low, top, top]);
            local.push([top, low, top]);
            local.push([top, top, low]);
        }
        if p != 2 {
            local.push([top, top, top]);
        }
        let mut next = Vec::with_capacity(triples.len() * local.len());
        for t in &triples {
            for l in &local {
                next.push([t[0] * l[0], t[1] * l[1], t[2] * l[2]]);
            }
        }
        triples = next;
    }
    triples.sort_unstable();
    Ok(triples)
}

/// Number of triples returned by [`nonvanishing_triples`]:
/// `∏_{p odd} (3a(p) + 1)`, times `3a(2)` when `m` is even.
pub fn nonvanishing_triple_count(m: u64) -> Result<u64> {
    let f = arith::factorize(m)?;
    Ok(f.factors()
        .iter()
        .map(|&(p, a)| {
            if p == 2 {
                3 * a as u64
            } else {
                3 * a as u64 + 1
            }
        })
        .product())
}

/// Exhaustive scan over all ordered divisor triples of `m`.
pub fn nonvanishing_triples_by_scan(m: u64) -> Result<Vec<[u64; 3]>> {
    let divs = arith::divisors(m)?;
    guard("divisor triples", (divs.len() as u64).pow(3), TRIPLE_GUARD)?;
    let mut out = Vec::new();
    for &x in &divs {
        for &y in &divs {
            for &z in &divs {
                let t = PeriodTuple::new([x, y, z])?;
                if t.lcm() == m && !e_closed(&t).is_zero() {
                    out.push([x, y, z]);
                }
            }
        }
    }
    Ok(out)
}

/// Structural test for `E(t) = φ(lcm t)`: at every prime the reduced local
/// tuple is a pair `(p^a, p^a)`, or `(3, 3, 3)`, or at `p = 2` the shape
/// `(2^a, 2^a, 2, …, 2)` with an even length when `a = 1`.
pub fn equals_phi_classification(t: &PeriodTuple) -> bool {
    let f = arith::factorize(t.lcm()).expect("lcm is positive");
    f.factors().iter().all(|&(p, a)| {
        let mut exps: Vec<u32> = t.exponents_at(p).into_iter().filter(|&e| e > 0).collect();
        exps.sort_unstable_by(|x, y| y.cmp(x));
        let r = exps.len();
        let pair = r == 2 && exps[1] == a;
        let triple_three = p == 3 && exps == [1, 1, 1];
        let dyadic = p == 2
            && r >= 3
            && exps[1] == a
            && exps[2..].iter().all(|&e| e == 1)
            && (a > 1 || r.is_multiple_of(2));
        pair || triple_three || dyadic
    })
}

/// Numeric side of [`equals_phi_classification`].
pub fn equals_phi(t: &PeriodTuple) -> bool {
    let phi = arith::euler_phi(t.lcm()).expect("lcm is positive");
    e_closed(t).to_u64() == Some(phi)
}
