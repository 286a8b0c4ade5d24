//! Elementary multiplicative number theory on machine integers.
//!
//! Everything here is a pure function. Inputs are `u64` (or `i64` where a
//! residue may be negative); values that can outgrow a machine word come back
//! as [`BigUint`] or [`BigRational`].

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};

/// Prime factorization of a positive integer, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorization from `(prime, exponent)` pairs, checking the
    /// ordering, primality and exponent invariants.
    pub fn from_pairs(pairs: Vec<(u64, u32)>) -> Result<Self> {
        for w in pairs.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidArgument(
                    "factorization primes must be strictly increasing".into(),
                ));
            }
        }
        for &(p, e) in &pairs {
            if !is_prime(p) {
                return Err(Error::InvalidArgument(format!("{p} is not prime")));
            }
            if e == 0 {
                return Err(Error::InvalidArgument(format!("prime {p} has exponent 0")));
            }
        }
        let f = Factorization { factors: pairs };
        f.value()?;
        Ok(f)
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Exponent of `p` (0 when `p` does not divide the number).
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// The represented integer.
    pub fn value(&self) -> Result<u64> {
        self.factors.iter().try_fold(1u64, |acc, &(p, e)| {
            p.checked_pow(e)
                .and_then(|pe| acc.checked_mul(pe))
                .ok_or_else(|| Error::InvalidArgument("factorization overflows u64".into()))
        })
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let base = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..base {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Brent's variant; `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        let mut power = 1u64;
        let mut lam = 0u64;
        while d == 1 {
            if power == lam {
                x = y;
                power <<= 1;
                lam = 0;
            }
            y = f(y);
            lam += 1;
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

const TRIAL_LIMIT: u64 = 1 << 12;

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Factors `n ≥ 1`. Trial division up to a small bound, then Pollard rho.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::NonPositive(0));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        let mut big = Vec::new();
        split_into(rest, &mut big);
        big.sort_unstable();
        for q in big {
            match factors.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => factors.push((q, 1)),
            }
        }
    }
    Ok(Factorization { factors })
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.divisors())
}

pub fn mobius(n: u64) -> Result<i8> {
    let f = factorize(n)?;
    if f.factors.iter().any(|&(_, e)| e > 1) {
        Ok(0)
    } else if f.factors.len() % 2 == 0 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

pub(crate) fn phi_of(f: &Factorization) -> u64 {
    f.factors
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(phi_of(&factorize(n)?))
}

/// Jordan's totient `φ_k(n) = n^k ∏_{p|n} (1 − p^{−k})`.
///
/// `φ_0` is the indicator of `n = 1`, `φ_1` is Euler's totient.
pub fn jordan_phi(k: u32, n: u64) -> Result<BigUint> {
    let f = factorize(n)?;
    if k == 0 {
        return Ok(if f.is_one() {
            BigUint::one()
        } else {
            BigUint::zero()
        });
    }
    let mut acc = BigUint::one();
    for &(p, e) in &f.factors {
        let pk: BigUint = Pow::pow(BigUint::from(p), k);
        acc *= Pow::pow(pk.clone(), e - 1) * (pk - 1u32);
    }
    Ok(acc)
}

/// Von Sterneck's function at a prime power (the case split on how much of
/// `p^a` divides `k`). `k` is taken modulo `p^a`.
fn sterneck_prime_power(k: u64, p: u64, a: u32) -> i128 {
    let pa = p.pow(a);
    let pa1 = pa / p;
    let k = k % pa;
    if k == 0 {
        ((p - 1) * pa1) as i128
    } else if k.is_multiple_of(pa1) {
        -(pa1 as i128)
    } else {
        0
    }
}

/// `Φ(k, n)` for a pre-factored `n`; `k` is a nonnegative residue.
pub fn von_sterneck_factored(k: u64, n: &Factorization) -> i128 {
    n.factors
        .iter()
        .map(|&(p, a)| sterneck_prime_power(k, p, a))
        .product()
}

/// Von Sterneck's function `Φ(k, n) = φ(n)/φ(n/(k,n)) · μ(n/(k,n))`.
///
/// `k` is reduced modulo `n` first; `k ≡ 0` behaves as `(k, n) = n`.
pub fn von_sterneck(k: i64, n: u64) -> Result<i128> {
    let f = factorize(n)?;
    let k = (k as i128).rem_euclid(n as i128) as u64;
    Ok(von_sterneck_factored(k, &f))
}

/// Ramanujan's sum `C_n(k) = Σ_{d | (k,n)} d · μ(n/d)`.
pub fn ramanujan_sum(n: u64, k: i64) -> Result<i128> {
    if n == 0 {
        return Err(Error::NonPositive(0));
    }
    let k = (k as i128).rem_euclid(n as i128) as u64;
    let g = if k == 0 { n } else { k.gcd(&n) };
    let mut sum = 0i128;
    for d in divisors(g)? {
        sum += d as i128 * mobius(n / d)? as i128;
    }
    Ok(sum)
}

/// `(1/M) Σ_{k=1}^{M} ∏_j f(k, m_j)` for a kernel `f(k, m)` periodic in `k`
/// modulo `m`. Every period must divide `modulus`.
pub fn periodic_average<F>(f: F, periods: &[u64], modulus: u64) -> Result<BigRational>
where
    F: Fn(u64, u64) -> Result<i128>,
{
    if modulus == 0 {
        return Err(Error::NonPositive(0));
    }
    for &m in periods {
        if m == 0 {
            return Err(Error::NonPositive(0));
        }
        if !modulus.is_multiple_of(m) {
            return Err(Error::NotDivisible { modulus, period: m });
        }
    }
    let mut total = BigInt::zero();
    for k in 1..=modulus {
        let mut term = BigInt::one();
        for &m in periods {
            let v = f(k, m)?;
            if v == 0 {
                term.set_zero();
                break;
            }
            term *= v;
        }
        total += term;
    }
    Ok(BigRational::new(total, BigInt::from(modulus)))
}

/// Least common multiple of a list (1 for the empty list); `None` on overflow.
pub fn lcm_all(values: &[u64]) -> Option<u64> {
    values.iter().try_fold(1u64, |acc, &v| {
        if v == 0 {
            return None;
        }
        (acc / acc.gcd(&v)).checked_mul(v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisor_sum_jordan(k: u32, n: u64) -> BigInt {
        let mut s = BigInt::zero();
        for d in 1..=n {
            if n.is_multiple_of(d) {
                s += BigInt::from(d).pow(k) * mobius(n / d).unwrap() as i32;
            }
        }
        s
    }

    // Φ(k, n) straight from the definition, no prime-power shortcut.
    fn sterneck_by_definition(k: u64, n: u64) -> i128 {
        let g = if k.is_multiple_of(n) { n } else { k.gcd(&n) };
        let q = n / g;
        (euler_phi(n).unwrap() / euler_phi(q).unwrap()) as i128 * mobius(q).unwrap() as i128
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().factors().is_empty());
        assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(10).unwrap().factors(), &[(2, 1), (5, 1)]);
        assert_eq!(factorize(0), Err(Error::NonPositive(0)));
    }

    #[test]
    fn factorize_large_semiprimes() {
        let n = 4_294_967_291u64 * 4_294_967_279u64;
        let f = factorize(n).unwrap();
        assert_eq!(f.factors(), &[(4_294_967_279, 1), (4_294_967_291, 1)]);
        let n = (1u64 << 61) - 1;
        assert_eq!(factorize(n).unwrap().factors(), &[(n, 1)]);
        let f = factorize(u64::MAX).unwrap();
        assert_eq!(f.value().unwrap(), u64::MAX);
        assert!(f.primes().all(is_prime));
    }

    #[test]
    fn from_pairs_rejects_bad_input() {
        assert!(Factorization::from_pairs(vec![(3, 1), (2, 1)]).is_err());
        assert!(Factorization::from_pairs(vec![(4, 1)]).is_err());
        assert!(Factorization::from_pairs(vec![(2, 0)]).is_err());
        assert!(Factorization::from_pairs(vec![(2, 64)]).is_err());
        assert_eq!(
            Factorization::from_pairs(vec![(2, 2), (3, 1)])
                .unwrap()
                .value(),
            Ok(12)
        );
    }

    #[test]
    fn mobius_and_phi_examples() {
        assert_eq!(mobius(1), Ok(1));
        assert_eq!(mobius(6), Ok(1));
        assert_eq!(mobius(12), Ok(0));
        assert_eq!(euler_phi(1), Ok(1));
        assert_eq!(euler_phi(10), Ok(4));
        assert_eq!(euler_phi(12), Ok(4));
        assert!(mobius(0).is_err());
        assert!(euler_phi(0).is_err());
    }

    #[test]
    fn phi_counts_units() {
        for n in 1..=300u64 {
            let count = (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64;
            assert_eq!(euler_phi(n).unwrap(), count, "n = {n}");
        }
    }

    #[test]
    fn jordan_examples() {
        assert_eq!(jordan_phi(0, 5).unwrap(), BigUint::zero());
        assert_eq!(jordan_phi(0, 1).unwrap(), BigUint::one());
        assert_eq!(jordan_phi(2, 2).unwrap(), BigUint::from(3u32));
        assert_eq!(jordan_phi(2, 6).unwrap(), BigUint::from(24u32));
        assert!(jordan_phi(1, 0).is_err());
    }

    #[test]
    fn jordan_matches_divisor_sum_and_phi_divides() {
        for n in 1..=500u64 {
            let phi = BigUint::from(euler_phi(n).unwrap());
            assert_eq!(jordan_phi(1, n).unwrap(), phi);
            for k in 0..=5 {
                let j = jordan_phi(k, n).unwrap();
                if n <= 120 {
                    assert_eq!(
                        BigInt::from(j.clone()),
                        divisor_sum_jordan(k, n),
                        "k={k} n={n}"
                    );
                }
                if k >= 1 {
                    assert!((&j % &phi).is_zero(), "φ({n}) ∤ φ_{k}({n})");
                }
            }
        }
    }

    #[test]
    fn sterneck_examples() {
        for k in [-7, 0, 1, 5, 1000] {
            assert_eq!(von_sterneck(k, 1), Ok(1));
        }
        assert_eq!(von_sterneck(3, 9), Ok(-3));
        assert_eq!(von_sterneck(2, 6), Ok(-1));
        assert_eq!(von_sterneck(0, 12), Ok(4));
        assert_eq!(von_sterneck(-12, 12), Ok(4));
        assert!(von_sterneck(1, 0).is_err());
    }

    #[test]
    fn ramanujan_examples() {
        assert_eq!(ramanujan_sum(1, 17), Ok(1));
        assert_eq!(ramanujan_sum(10, 0), Ok(4));
        assert_eq!(ramanujan_sum(6, 2), Ok(-1));
        assert!(ramanujan_sum(0, 2).is_err());
    }

    #[test]
    fn holder_identity() {
        for n in 1..=200u64 {
            for k in 0..n {
                let c = ramanujan_sum(n, k as i64).unwrap();
                assert_eq!(c, von_sterneck(k as i64, n).unwrap(), "n={n} k={k}");
                assert_eq!(c, sterneck_by_definition(k, n), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn sterneck_multiplicative_in_n_and_periodic_in_k() {
        for n1 in 1..=200u64 {
            for n2 in 1..=200 / n1 {
                if n1.gcd(&n2) != 1 {
                    continue;
                }
                for k in 0..(n1 * n2) as i64 {
                    assert_eq!(
                        von_sterneck(k, n1 * n2).unwrap(),
                        von_sterneck(k, n1).unwrap() * von_sterneck(k, n2).unwrap()
                    );
                }
            }
        }
        for n in 1..=60u64 {
            for k in -70..70i64 {
                assert_eq!(von_sterneck(k, n), von_sterneck(k + n as i64, n));
            }
        }
    }

    #[test]
    fn periodic_average_examples() {
        let sterneck = |k: u64, m: u64| von_sterneck(k as i64, m);
        let gcd = |k: u64, m: u64| Ok(k.gcd(&m) as i128);
        assert_eq!(
            periodic_average(sterneck, &[12, 12], 12).unwrap(),
            BigRational::from_integer(4.into())
        );
        assert_eq!(
            periodic_average(gcd, &[2], 2).unwrap(),
            BigRational::new(3.into(), 2.into())
        );
        assert_eq!(
            periodic_average(gcd, &[], 7).unwrap(),
            BigRational::from_integer(1.into())
        );
        assert_eq!(
            periodic_average(gcd, &[4], 6),
            Err(Error::NotDivisible {
                modulus: 6,
                period: 4
            })
        );
    }

    #[test]
    fn periodic_average_modulus_independent() {
        let sterneck = |k: u64, m: u64| von_sterneck(k as i64, m);
        let gcd = |k: u64, m: u64| Ok(k.gcd(&m) as i128);
        for periods in [
            vec![4u64, 6],
            vec![2, 3, 5],
            vec![9, 9, 3],
            vec![8, 8, 2, 2],
        ] {
            let l = lcm_all(&periods).unwrap();
            let prod: u64 = periods.iter().product();
            for f in [&sterneck as &dyn Fn(u64, u64) -> Result<i128>, &gcd] {
                let base = periodic_average(f, &periods, l).unwrap();
                assert_eq!(base, periodic_average(f, &periods, prod).unwrap());
                assert_eq!(base, periodic_average(f, &periods, 2 * l).unwrap());
            }
        }
    }

    #[test]
    fn divisors_listing() {
        assert_eq!(divisors(1).unwrap(), vec![1]);
        assert_eq!(divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(lcm_all(&[]), Some(1));
        assert_eq!(lcm_all(&[4, 6, 10]), Some(60));
        assert_eq!(lcm_all(&[u64::MAX, u64::MAX - 1]), None);
    }
}
