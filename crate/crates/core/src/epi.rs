//! Order-preserving epimorphisms from orbifold groups onto `Z_ℓ`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{Pow, Zero};

use crate::arith;
use crate::error::{guard, Error, Result};
use crate::orbicyclic::e_closed;
use crate::orbifold::OrbifoldSignature;

/// `m^{2g} · φ_{2g}(ℓ/m) · E(m_1, …, m_r)`, and 0 when `m ∤ ℓ`.
pub fn count_epi(sig: &OrbifoldSignature, ell: u64) -> Result<BigUint> {
    if ell == 0 {
        return Err(Error::NonPositive(0));
    }
    let m = sig.lcm();
    if !ell.is_multiple_of(m) {
        return Ok(BigUint::zero());
    }
    let two_g = u32::try_from(2 * sig.genus())
        .map_err(|_| Error::InvalidArgument(format!("genus {} is too large", sig.genus())))?;
    let jordan = arith::jordan_phi(two_g, ell / m)?;
    if jordan.is_zero() {
        return Ok(jordan);
    }
    let scale: BigUint = Pow::pow(BigUint::from(m), two_g);
    Ok(scale * jordan * e_closed(sig.periods()))
}

pub const BRUTEFORCE_GUARD: u64 = 2_000_000;

/// Counts epimorphisms directly: assign images to `a_i, b_i` freely and to
/// each elliptic generator `x_j` an element of order exactly `m_j`, keep the
/// assignments with `Σ x_j = 0` that generate `Z_ℓ`.
pub fn count_epi_bruteforce(sig: &OrbifoldSignature, ell: u64) -> Result<BigUint> {
    if ell == 0 {
        return Err(Error::NonPositive(0));
    }
    let n_gens = 2 * sig.genus() + sig.branch_count() as u64;
    let work = (ell as u128)
        .checked_pow(n_gens as u32)
        .unwrap_or(u128::MAX);
    guard("epimorphism search size", work, BRUTEFORCE_GUARD)?;

    let hyperbolic: Vec<Vec<u64>> = (0..2 * sig.genus()).map(|_| (0..ell).collect()).collect();
    let mut choices = hyperbolic;
    for &m in sig.periods().values() {
        if !ell.is_multiple_of(m) {
            return Ok(BigUint::zero());
        }
        // Elements of order m in Z_ℓ: gcd(x, ℓ) = ℓ/m.
        choices.push((0..ell).filter(|&x| x.gcd(&ell) == ell / m).collect());
    }
    if choices.iter().any(|c| c.is_empty()) {
        return Ok(BigUint::zero());
    }
    let elliptic_from = 2 * sig.genus() as usize;

    let mut count = 0u64;
    let mut pick = vec![0usize; choices.len()];
    loop {
        let mut g = ell;
        let mut relation = 0;
        for (i, &k) in pick.iter().enumerate() {
            let x = choices[i][k];
            g = g.gcd(&x);
            if i >= elliptic_from {
                relation = (relation + x) % ell;
            }
        }
        if relation == 0 && g == 1 {
            count += 1;
        }
        // Odometer step.
        let mut i = 0;
        loop {
            if i == pick.len() {
                return Ok(BigUint::from(count));
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// `φ(ℓ)` divides every nonzero epimorphism count.
pub fn phi_divides(count: &BigUint, ell: u64) -> Result<bool> {
    let phi = BigUint::from(arith::euler_phi(ell)?);
    Ok(count.is_zero() || (count % &phi).is_zero())
}
