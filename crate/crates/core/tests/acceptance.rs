//! Acceptance criteria, one test each. Every test prints a PASS/FAIL line
//! before asserting; run with `--nocapture` to see them.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use orbicyclic_core::arith::{self, euler_phi, periodic_average, von_sterneck};
use orbicyclic_core::congruence::count_congruence_solutions;
use orbicyclic_core::epi::count_epi;
use orbicyclic_core::mapcount::{dart_pair_oracle, rooted_map_count, theta, RootedMapTable};
use orbicyclic_core::orbicyclic::{
    e_bruteforce_with, e_closed, equals_phi, equals_phi_classification, h_poly,
    nonvanishing_triple_count, nonvanishing_triples_by_scan, PeriodTuple,
};
use orbicyclic_core::orbifold::{
    candidate_signatures, census, enumerate_orbifolds, epi_nonvanishing, harvey_admissible,
    MAX_ORDER,
};
use orbicyclic_core::subgroups::{
    free_group_conjugacy_classes, free_group_subgroups, transitive_action_oracle,
};

fn report(criterion: u32, title: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("[PASS] criterion {criterion}: {title}");
    } else {
        println!("[FAIL] criterion {criterion}: {title}");
        for f in failures.iter().take(20) {
            println!("       {f}");
        }
        if failures.len() > 20 {
            println!("       ... {} more", failures.len() - 20);
        }
    }
    assert!(
        failures.is_empty(),
        "criterion {criterion} failed ({} problems)",
        failures.len()
    );
}

fn tuple(v: &[u64]) -> PeriodTuple {
    PeriodTuple::new(v.iter().copied()).unwrap()
}

/// Multisets of size `r` drawn from `items`.
fn multisets(items: &[u64], r: usize) -> Vec<Vec<u64>> {
    fn go(items: &[u64], start: usize, r: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, i, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, 0, r, &mut Vec::new(), &mut out);
    out
}

/// `(m, tuple)` for every multiset of divisors of `m ≤ max_m`, `r ≤ max_r`.
fn divisor_sweep(max_m: u64, max_r: usize) -> Vec<(u64, Vec<u64>)> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        let divs = arith::divisors(m).unwrap();
        for r in 0..=max_r {
            for t in multisets(&divs, r) {
                out.push((m, t));
            }
        }
    }
    out
}

#[test]
fn criterion_01_oracle_triangle() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for (m, v) in divisor_sweep(60, 4) {
        let t = tuple(&v);
        let closed = e_closed(&t);
        let brute = e_bruteforce_with(&t, Some(m), u64::MAX).unwrap();
        let congruence = count_congruence_solutions(m, &t).unwrap();
        if closed != brute || closed != congruence {
            failures.push(format!(
                "M={m} {t}: closed {closed}, average {brute}, congruence {congruence}"
            ));
        }
        checked += 1;
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        failures.push(format!("sweep took {elapsed:?}, budget 120 s"));
    }
    println!("       {checked} tuples in {elapsed:?}");
    report(
        1,
        "E closed form = defining average = congruence count (m ≤ 60, r ≤ 4)",
        &failures,
    );
}

#[test]
fn criterion_02_census_values() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (gamma, total, planar) in [(2u64, 10u64, 8u64), (3, 17, 12), (4, 25, 18)] {
        let c = census(gamma).unwrap();
        let a0 = c.by_genus.get(&0).copied().unwrap_or(0);
        println!("       A({gamma}) = {}, A_0({gamma}) = {a0}", c.total);
        if c.total != total || a0 != planar {
            failures.push(format!(
                "γ={gamma}: got A={} A_0={a0}, expected A={total} A_0={planar}",
                c.total
            ));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(10) {
        failures.push(format!("census took {elapsed:?}, budget 10 s"));
    }
    report(
        2,
        "A(2..4) = 10, 17, 25 and A_0(2..4) = 8, 12, 18",
        &failures,
    );
}

#[test]
fn criterion_03_harvey_equivalence() {
    let mut failures = Vec::new();
    let mut checked = 0;
    for gamma in 0..=4u64 {
        for ell in 2..=4 * gamma + 2 {
            for sig in candidate_signatures(gamma, ell).unwrap() {
                let harvey = harvey_admissible(&sig, ell, gamma).admissible();
                let epi = epi_nonvanishing(&sig, ell).nonvanishing();
                let count = !count_epi(&sig, ell).unwrap().is_zero();
                checked += 1;
                if harvey != epi || epi != count {
                    failures.push(format!(
                        "γ={gamma} ℓ={ell} {sig}: harvey {harvey}, E-conditions {epi}, count≠0 {count}"
                    ));
                }
            }
        }
    }
    println!("       {checked} candidate signatures");
    report(
        3,
        "Harvey conditions ⇔ E1–E4 ⇔ count_epi ≠ 0 (γ ≤ 4)",
        &failures,
    );
}

#[test]
fn criterion_04_corollary_suite() {
    let mut failures = Vec::new();

    // φ(m) | E over the criterion 1 sweep, m the lcm of the tuple.
    let mut divis = Vec::new();
    for (_, v) in divisor_sweep(60, 4) {
        let t = tuple(&v);
        let e = e_closed(&t);
        let phi = BigUint::from(euler_phi(t.lcm()).unwrap());
        if !e.is_zero() && !(&e % &phi).is_zero() {
            divis.push(format!("φ({}) ∤ E{t} = {e}", t.lcm()));
        }
    }
    println!(
        "       φ(m) | E: {}",
        if divis.is_empty() { "ok" } else { "FAIL" }
    );
    failures.extend(divis);

    // Structural E = φ(m) predicate against the numbers, lcm exactly m.
    let mut classified = Vec::new();
    let mut seen = 0u64;
    for m in 1..=200u64 {
        let divs = arith::divisors(m).unwrap();
        for r in 0..=4 {
            for v in multisets(&divs, r) {
                let t = tuple(&v);
                if t.lcm() != m {
                    continue;
                }
                seen += 1;
                if equals_phi_classification(&t) != equals_phi(&t) {
                    classified.push(format!(
                        "{t}: structural {}, numeric {}",
                        equals_phi_classification(&t),
                        equals_phi(&t)
                    ));
                }
            }
        }
    }
    println!(
        "       E = φ(m) classification over {seen} tuples: {}",
        if classified.is_empty() { "ok" } else { "FAIL" }
    );
    failures.extend(classified);

    // Triple counts: the product ∏(3a(p)+1), the exhaustive scan, and the library count.
    for m in [2u64, 6, 12, 30, 36] {
        let f = arith::factorize(m).unwrap();
        let product: u64 = f.factors().iter().map(|&(_, a)| 3 * a as u64 + 1).product();
        let scanned = nonvanishing_triples_by_scan(m).unwrap().len() as u64;
        let library = nonvanishing_triple_count(m).unwrap();
        println!("       m={m}: ∏(3a+1) = {product}, scan = {scanned}, library = {library}");
        if product != scanned {
            failures.push(format!(
                "m={m}: ∏(3a(p)+1) = {product} but the scan finds {scanned}"
            ));
        }
        if library != scanned {
            failures.push(format!(
                "m={m}: library count {library} but the scan finds {scanned}"
            ));
        }
    }
    report(
        4,
        "φ(m) | E, E = φ(m) classification, triple count ∏(3a(p)+1)",
        &failures,
    );
}

fn eq22(p: u64, a: u32, b: u32, c: u32) -> Option<BigUint> {
    let pb = || BigUint::from(p);
    if a == b && b > c && c > 0 {
        Some(Pow::pow(pb() - 1u32, 2u32) * Pow::pow(pb(), a + c - 2))
    } else if a == b && c == 0 {
        Some((pb() - 1u32) * Pow::pow(pb(), a - 1))
    } else if a == b && b == c && c > 0 {
        Some((pb() - 1u32) * (pb() - 2u32) * Pow::pow(pb(), 2 * a - 2))
    } else {
        None
    }
}

#[test]
fn criterion_05_prime_power_laws() {
    let mut failures = Vec::new();
    for p in [2u64, 3, 5] {
        // The three cases for triples, third exponent allowed to be 0.
        for a in 1..=3u32 {
            for c in 0..=a {
                let (b, c) = (a, c);
                let t = tuple(&[p.pow(a), p.pow(b), p.pow(c)]);
                let want = eq22(p, a, b, c).unwrap();
                if e_closed(&t) != want {
                    failures.push(format!(
                        "triple {t}: E = {}, case formula {want}",
                        e_closed(&t)
                    ));
                }
            }
        }
        // Parity and p-divisibility laws over exponent multisets in 1..=3.
        for r in 1..=5 {
            for exps in multisets(&[1, 2, 3], r) {
                let vals: Vec<u64> = exps.iter().map(|&e| p.pow(e as u32)).collect();
                let t = tuple(&vals);
                let e = e_closed(&t);
                let a = *exps.iter().max().unwrap();
                let s = exps.iter().filter(|&&x| x == a).count();
                if p == 2 {
                    let odd = (&e % 2u32) == BigUint::one();
                    let law = a == 1 && s == r && r % 2 == 0;
                    if odd != law {
                        failures.push(format!("{t}: E = {e} odd {odd}, parity law says {law}"));
                    }
                } else {
                    let coprime = !(&e % p).is_zero();
                    let law = a == 1 && r > 1;
                    if coprime != law {
                        failures.push(format!(
                            "{t}: E = {e}, p ∤ E is {coprime}, divisibility law says {law}"
                        ));
                    }
                }
            }
        }
    }
    report(
        5,
        "prime-power case formulas and parity / p-divisibility laws",
        &failures,
    );
}

#[test]
fn criterion_06_chromatic_identity() {
    let mut failures = Vec::new();
    for s in 1..=10u32 {
        for x in -10i64..=10 {
            let xb = BigInt::from(x);
            let rhs: BigInt = Pow::pow(&xb - 1, s) + if s % 2 == 0 { &xb - 1 } else { 1 - &xb };
            if x == 0 {
                // The left side has the factor x.
                if !rhs.is_zero() {
                    failures.push(format!("s={s} x=0: right side {rhs} ≠ 0"));
                }
                continue;
            }
            let lhs = &xb * (&xb - 1) * h_poly(s, x).unwrap();
            if lhs != rhs {
                failures.push(format!("s={s} x={x}: {lhs} ≠ {rhs}"));
            }
        }
    }
    let mut ones = Vec::new();
    for s in (1..=9u32).step_by(2) {
        for x in 3..=50i64 {
            if h_poly(s, x).unwrap().is_one() {
                ones.push((s, x));
            }
        }
    }
    if ones != [(3, 3)] {
        failures.push(format!("odd s, x−1 ≥ 2 solutions of h_s(x) = 1: {ones:?}"));
    }
    report(
        6,
        "x(x−1)h_s(x) = (x−1)^s + (−1)^s(x−1); h_3(3) = 1 unique",
        &failures,
    );
}

#[test]
fn criterion_07_map_counts() {
    let table = RootedMapTable::bundled();
    let mut failures = Vec::new();
    for (gamma, n) in [(0u64, 1u64), (0, 2), (0, 3), (1, 1), (1, 2)] {
        let th = theta(gamma, n, &table).unwrap().value;
        let oracle = dart_pair_oracle(gamma, n).unwrap().unrooted;
        println!("       Θ_{gamma}({n}) = {th}, oracle {oracle}");
        if th != oracle {
            failures.push(format!("Θ_{gamma}({n}) = {th}, oracle {oracle}"));
        }
    }
    for n in 1..=3u64 {
        let rooted =
            rooted_map_count(&table, 0, &BigRational::from_integer(BigInt::from(n))).unwrap();
        let oracle = dart_pair_oracle(0, n).unwrap().rooted;
        if rooted != oracle {
            failures.push(format!("N_0({n}) = {rooted}, oracle {oracle}"));
        }
    }
    for gamma in 0..=2 {
        for n in 1..=8 {
            if let Err(e) = theta(gamma, n, &table) {
                failures.push(format!("Θ_{gamma}({n}): {e}"));
            }
        }
    }
    report(
        7,
        "Θ and rooted counts match the dart-pair oracle; 2n | Burnside sum",
        &failures,
    );
}

#[test]
fn criterion_08_free_groups() {
    let mut failures = Vec::new();
    let m: Vec<BigUint> = (1..=3)
        .map(|n| free_group_subgroups(2, n).unwrap())
        .collect();
    let c: Vec<BigUint> = (1..=3)
        .map(|n| free_group_conjugacy_classes(2, n).unwrap())
        .collect();
    if m != [1u32, 3, 13].map(BigUint::from) || c != [1u32, 3, 7].map(BigUint::from) {
        failures.push(format!("M = {m:?}, N = {c:?}"));
    }
    for n in 2..=3 {
        let (subs, classes) = transitive_action_oracle(2, n).unwrap();
        if subs != m[n as usize - 1] || classes != c[n as usize - 1] {
            failures.push(format!(
                "n={n}: enumeration gives {subs} subgroups, {classes} classes"
            ));
        }
    }
    for r in 1..=4 {
        for n in 1..=8 {
            if let Err(e) = free_group_conjugacy_classes(r, n) {
                failures.push(format!("r={r} n={n}: {e}"));
            }
        }
    }
    report(
        8,
        "M_F2 = 1, 3, 13; N_F2 = 1, 3, 7; class sum integral",
        &failures,
    );
}

#[test]
fn criterion_09_wiman_euler_bounds() {
    let mut failures = Vec::new();
    for gamma in 0..=4u64 {
        for ell in 1..=MAX_ORDER {
            let list = enumerate_orbifolds(gamma, ell).unwrap();
            if list.is_empty() {
                continue;
            }
            if gamma >= 2 && ell > 4 * gamma + 2 {
                failures.push(format!("γ={gamma}: order {ell} > 4γ+2"));
            }
            if gamma >= 2 && euler_phi(ell).unwrap() > 2 * gamma {
                failures.push(format!("γ={gamma}: φ({ell}) > 2γ"));
            }
            for sig in list {
                if sig.branch_count() as u64 > 2 * gamma + 2 {
                    failures.push(format!("γ={gamma} ℓ={ell}: {sig} has r > 2γ+2"));
                }
                if sig.genus() > gamma {
                    failures.push(format!("γ={gamma} ℓ={ell}: {sig} has g > γ"));
                }
            }
        }
    }
    if !enumerate_orbifolds(2, 9).unwrap().is_empty() {
        failures.push("γ=2, ℓ=9 is not empty".into());
    }
    report(
        9,
        "ℓ ≤ 4γ+2, φ(ℓ) ≤ 2γ, r ≤ 2γ+2, g ≤ γ; (γ, ℓ) = (2, 9) empty",
        &failures,
    );
}

fn gcd_kernel(k: u64, n: u64) -> orbicyclic_core::Result<i128> {
    Ok(num_integer::gcd(k, n) as i128)
}

fn sterneck_kernel(k: u64, n: u64) -> orbicyclic_core::Result<i128> {
    von_sterneck(k as i64, n)
}

fn average(kernel: fn(u64, u64) -> orbicyclic_core::Result<i128>, periods: &[u64]) -> BigRational {
    let modulus = arith::lcm_all(periods).unwrap();
    periodic_average(kernel, periods, modulus).unwrap()
}

#[test]
fn criterion_10_semi_multiplicativity() {
    let mut failures = Vec::new();
    // Split primes between the two factors, so M' and M'' are coprime.
    let primes = [2u64, 3, 5, 7];
    let strategy = (
        1usize..=3,
        prop::collection::vec(any::<bool>(), primes.len()),
        prop::collection::vec(0u32..3, primes.len() * 3),
    );
    let mut runner = TestRunner::new(Config {
        cases: 200,
        failure_persistence: None,
        ..Config::default()
    });
    let mut instances = 0;
    let result = runner.run(&strategy, |(r, sides, exps)| {
        let mut first = vec![1u64; r];
        let mut second = vec![1u64; r];
        for j in 0..r {
            for (i, &p) in primes.iter().enumerate() {
                let target = if sides[i] { &mut first } else { &mut second };
                target[j] *= p.pow(exps[j * primes.len() + i]);
            }
        }
        let whole: Vec<u64> = first.iter().zip(&second).map(|(a, b)| a * b).collect();
        for kernel in [gcd_kernel as fn(u64, u64) -> _, sterneck_kernel] {
            let lhs = average(kernel, &whole);
            let rhs = average(kernel, &first) * average(kernel, &second);
            prop_assert_eq!(&lhs, &rhs, "{:?} = {:?} · {:?}", whole, first, second);
        }
        Ok(())
    });
    instances += 200;
    if let Err(e) = result {
        failures.push(e.to_string());
    }

    // E(m'm'', …) = E(m', m'', …) over the criterion 1 sweep.
    let mut splits = 0;
    for (_, v) in divisor_sweep(60, 4) {
        if v.is_empty() {
            continue;
        }
        let t = tuple(&v);
        let first = v[0];
        for d in arith::divisors(first).unwrap() {
            let other = first / d;
            if d == 1 || other == 1 || num_integer::gcd(d, other) != 1 {
                continue;
            }
            let mut split = v[1..].to_vec();
            split.extend([d, other]);
            splits += 1;
            let lhs = e_closed(&t);
            let rhs = e_closed(&tuple(&split));
            if lhs != rhs {
                failures.push(format!("E{t} = {lhs} but split gives {rhs}"));
            }
        }
    }
    println!("       {instances} random instances, {splits} coprime splits");
    report(
        10,
        "coprime splitting for gcd and von Sterneck averages; E splitting",
        &failures,
    );
}
