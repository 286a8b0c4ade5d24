//! Unrooted maps on orientable surfaces, counted by summing over the cyclic
//! quotient orbifolds of the surface, plus a brute-force dart-pair model for
//! small edge counts.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::io::Read;
use std::path::Path;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Deserialize;

use crate::arith;
use crate::epi::count_epi;
use crate::error::{guard, Error, Result};
use crate::orbifold::enumerate_orbifolds;

/// Environment variable naming an alternate rooted-map table.
pub const TABLE_ENV: &str = "ORBICYCLIC_TABLE";
pub const ORACLE_MAX_EDGES: u64 = 3;

const BUNDLED_TABLE: &str = include_str!("../data/rooted_maps.csv");

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `C(n, k)`, zero for `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `T! / (k_1! ⋯ k_s! (T − Σk)!)`, zero when `T < 0` or `T < Σk`.
pub fn multinomial(total: i64, parts: &[u64]) -> BigUint {
    if total < 0 {
        return BigUint::zero();
    }
    let mut left = total as u64;
    let mut acc = BigUint::one();
    for &k in parts {
        if k > left {
            return BigUint::zero();
        }
        acc *= binomial(left, k);
        left -= k;
    }
    acc
}

/// Rooted planar maps with `n` edges: `2·3^n·(2n)! / (n!·(n+2)!)`.
pub fn planar_rooted_maps(n: u64) -> BigUint {
    let pow3: BigUint = Pow::pow(BigUint::from(3u32), n);
    BigUint::from(2u32) * pow3 * factorial(2 * n) / (factorial(n) * factorial(n + 2))
}

#[derive(Debug, Deserialize)]
struct Row {
    genus: u32,
    edges: u64,
    count: String,
}

/// Rooted map counts `N_g(n)` keyed by `(genus, edges)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedMapTable {
    entries: BTreeMap<(u32, u64), BigUint>,
}

impl RootedMapTable {
    /// The table shipped with the crate (genus ≤ 3, up to 14 edges).
    pub fn bundled() -> Self {
        Self::from_reader(BUNDLED_TABLE.as_bytes()).expect("bundled table is valid")
    }

    /// The table named by `ORBICYCLIC_TABLE`, or the bundled one.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(TABLE_ENV) {
            Some(path) => Self::from_path(path),
            None => Ok(Self::bundled()),
        }
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref())
            .map_err(|e| Error::Table(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_reader(file)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Table(e.to_string()))?;
        if headers.iter().collect::<Vec<_>>() != ["genus", "edges", "count"] {
            return Err(Error::Table(format!(
                "expected header genus,edges,count, got {}",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut entries = BTreeMap::new();
        for (line, row) in rdr.deserialize::<Row>().enumerate() {
            let line = line + 2;
            let row = row.map_err(|e| Error::Table(format!("line {line}: {e}")))?;
            let count: BigUint = row
                .count
                .parse()
                .map_err(|_| Error::Table(format!("line {line}: bad count {:?}", row.count)))?;
            if row.genus > 0 && row.edges < 2 * row.genus as u64 {
                return Err(Error::Table(format!(
                    "line {line}: genus {} needs at least {} edges",
                    row.genus,
                    2 * row.genus
                )));
            }
            if row.genus == 0 && count != planar_rooted_maps(row.edges) {
                return Err(Error::Table(format!(
                    "line {line}: planar count for {} edges should be {}",
                    row.edges,
                    planar_rooted_maps(row.edges)
                )));
            }
            if entries.insert((row.genus, row.edges), count).is_some() {
                return Err(Error::Table(format!(
                    "line {line}: duplicate entry for genus {} and {} edges",
                    row.genus, row.edges
                )));
            }
        }
        Ok(RootedMapTable { entries })
    }

    pub fn get(&self, genus: u32, edges: u64) -> Option<&BigUint> {
        self.entries.get(&(genus, edges))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, u64, &BigUint)> {
        self.entries.iter().map(|(&(g, n), c)| (g, n, c))
    }

    /// `N_g(n)` for integer `n ≥ 0`.
    pub fn count(&self, genus: u32, edges: u64) -> Result<BigUint> {
        if genus == 0 {
            return Ok(planar_rooted_maps(edges));
        }
        if edges < 2 * genus as u64 {
            return Ok(BigUint::zero());
        }
        self.get(genus, edges)
            .cloned()
            .ok_or(Error::MissingData { genus, edges })
    }
}

/// `N_g(n)` with the convention that non-integer and negative `n` give 0.
pub fn rooted_map_count(table: &RootedMapTable, genus: u32, n: &BigRational) -> Result<BigUint> {
    if !n.is_integer() || n.is_negative() {
        return Ok(BigUint::zero());
    }
    let edges = n
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument(format!("edge count {n} is too large")))?;
    table.count(genus, edges)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaTerm {
    pub ell: u64,
    /// Contribution of `Z_ℓ` to the Burnside sum, before dividing by `2n`.
    pub contribution: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theta {
    pub gamma: u64,
    pub edges: u64,
    pub value: BigUint,
    pub terms: Vec<ThetaTerm>,
}

/// `Θ_γ(n)`: unrooted maps with `n` edges on the orientable surface of genus `γ`.
pub fn theta(gamma: u64, n: u64, table: &RootedMapTable) -> Result<Theta> {
    if n == 0 {
        return Err(Error::NonPositive(0));
    }
    let two_n = 2 * n;
    let mut terms = Vec::new();
    let mut total = BigUint::zero();
    for ell in arith::divisors(two_n)? {
        let q = two_n / ell;
        let mut contribution = BigUint::zero();
        for sig in enumerate_orbifolds(gamma, ell)? {
            let epi = count_epi(&sig, ell)?;
            if epi.is_zero() {
                continue;
            }
            let g = sig.genus();
            let genus = u32::try_from(g)
                .map_err(|_| Error::Internal(format!("quotient genus {g} out of range")))?;
            let b = sig.branch_multiplicities();
            let b2 = b.get(&2).copied().unwrap_or(0) as u64;
            let higher: Vec<u64> = b
                .iter()
                .filter(|&(&i, _)| i > 2)
                .map(|(_, &k)| k as u64)
                .collect();

            let mut inner = BigUint::zero();
            for s in 0..=b2.min(q) {
                if (q - s) % 2 == 1 {
                    continue;
                }
                // Quotient map: (q − s)/2 edges, and T of its vertices are free.
                let edges = (q - s) / 2;
                let vertices = edges as i64 + 2 - 2 * g as i64;
                let mut parts = vec![b2 - s];
                parts.extend_from_slice(&higher);
                let multi = multinomial(vertices, &parts);
                if multi.is_zero() {
                    continue;
                }
                inner += binomial(q, s) * multi * table.count(genus, edges)?;
            }
            contribution += epi * inner;
        }
        total += &contribution;
        terms.push(ThetaTerm { ell, contribution });
    }
    let (value, rem) = total.div_rem(&BigUint::from(two_n));
    if !rem.is_zero() {
        return Err(Error::Internal(format!(
            "Burnside sum {total} for genus {gamma}, {n} edges is not divisible by {two_n}"
        )));
    }
    Ok(Theta {
        gamma,
        edges: n,
        value,
        terms,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleCount {
    pub rooted: BigUint,
    pub unrooted: BigUint,
}

/// Enumerates all maps with `n` edges as permutation pairs `(σ, α)` on `2n`
/// darts with `α = (0 1)(2 3)…` fixed, and reports rooted and unrooted counts
/// per genus.
pub fn dart_pair_census(n: u64) -> Result<BTreeMap<u64, OracleCount>> {
    guard("oracle edge count", n, ORACLE_MAX_EDGES)?;
    if n == 0 {
        return Err(Error::NonPositive(0));
    }
    let darts = 2 * n as usize;
    let alpha: Vec<usize> = (0..darts).map(|d| d ^ 1).collect();
    let centralizer = involution_centralizer(n as usize);

    let mut labelled: BTreeMap<u64, u64> = BTreeMap::new();
    let mut classes: BTreeMap<u64, BTreeSet<Vec<usize>>> = BTreeMap::new();
    let mut sigma: Vec<usize> = (0..darts).collect();
    loop {
        if transitive(&sigma, &alpha) {
            let sa: Vec<usize> = (0..darts).map(|d| sigma[alpha[d]]).collect();
            let chi = cycles(&sigma) as i64 - n as i64 + cycles(&sa) as i64;
            let genus = ((2 - chi) / 2) as u64;
            *labelled.entry(genus).or_default() += 1;
            let canon = centralizer
                .iter()
                .map(|c| conjugate(&sigma, c))
                .min()
                .expect("centralizer is nonempty");
            classes.entry(genus).or_default().insert(canon);
        }
        if !next_permutation(&mut sigma) {
            break;
        }
    }

    // Each rooted map appears (2n−1)!/(2n−1)!! times once α is pinned.
    let double_fact: u64 = (1..darts as u64).step_by(2).product();
    let fact = factorial(darts as u64 - 1);
    let mut out = BTreeMap::new();
    for (genus, count) in labelled {
        let rooted = BigUint::from(count) * double_fact / &fact;
        let unrooted = BigUint::from(classes[&genus].len());
        out.insert(genus, OracleCount { rooted, unrooted });
    }
    Ok(out)
}

pub fn dart_pair_oracle(gamma: u64, n: u64) -> Result<OracleCount> {
    Ok(dart_pair_census(n)?.remove(&gamma).unwrap_or_default())
}

fn transitive(sigma: &[usize], alpha: &[usize]) -> bool {
    let mut seen = vec![false; sigma.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(d) = queue.pop_front() {
        for e in [sigma[d], alpha[d]] {
            if !seen[e] {
                seen[e] = true;
                reached += 1;
                queue.push_back(e);
            }
        }
    }
    reached == sigma.len()
}

fn cycles(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut count = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            d = perm[d];
        }
    }
    count
}

// c σ c⁻¹
fn conjugate(sigma: &[usize], c: &[usize]) -> Vec<usize> {
    let mut out = vec![0; sigma.len()];
    for d in 0..sigma.len() {
        out[c[d]] = c[sigma[d]];
    }
    out
}

// Permutations commuting with (0 1)(2 3)…: permute the edges, flip any subset.
fn involution_centralizer(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut edges: Vec<usize> = (0..n).collect();
    loop {
        for flips in 0..1usize << n {
            let mut c = vec![0; 2 * n];
            for (e, &target) in edges.iter().enumerate() {
                let flip = (flips >> e) & 1;
                c[2 * e] = 2 * target + flip;
                c[2 * e + 1] = 2 * target + (1 - flip);
            }
            out.push(c);
        }
        if !next_permutation(&mut edges) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
