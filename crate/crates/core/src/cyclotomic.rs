//! Cyclotomic polynomials, arithmetic functions, and cyclotomic factor
//! detection.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::LaurentPoly;

/// Divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factorization by trial division, as `(p, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(d: u64) -> u64 {
    factorize(d)
        .into_iter()
        .fold(d, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mobius(d: u64) -> i8 {
    let f = factorize(d);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `Phi_d(1)`: 0 for `d = 1`, `q` when `d` is a power of the prime `q`,
/// and 1 otherwise.
pub fn cyclotomic_value_at_one(d: u64) -> u64 {
    if d == 1 {
        return 0;
    }
    match factorize(d).as_slice() {
        [(q, _)] => *q,
        _ => 1,
    }
}

fn cache() -> &'static RwLock<HashMap<u64, LaurentPoly>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, LaurentPoly>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The `d`-th cyclotomic polynomial, obtained from `t^d - 1` by exact
/// division by `Phi_k` for the proper divisors `k` of `d`.
pub fn cyclotomic_poly(d: u64) -> Result<LaurentPoly> {
    if d == 0 {
        return Err(Error::Domain(
            "cyclotomic polynomial index must be >= 1".into(),
        ));
    }
    if let Some(p) = cache().read().unwrap().get(&d) {
        return Ok(p.clone());
    }
    let mut p = LaurentPoly::cyclic(d as usize);
    for k in divisors(d) {
        if k < d {
            p = p.div_exact(&cyclotomic_poly(k)?)?;
        }
    }
    cache().write().unwrap().insert(d, p.clone());
    Ok(p)
}

/// `Delta = (prod Phi_d^{e_d}) * g` with no cyclotomic factor left in `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloFactorization {
    /// `(d, e_d)` in ascending `d`.
    pub factors: Vec<(u64, u32)>,
    /// Cyclotomic order: lcm of the listed `d`, or 1.
    pub gamma: u64,
    /// Non-cyclotomic cofactor `g`, carrying the original unit and content.
    pub non_cyclotomic_part: LaurentPoly,
    /// Multiplicity of `Phi_1 = t - 1`.
    pub q: u32,
}

impl CycloFactorization {
    /// Multiplicity of `Phi_d`, 0 if absent.
    pub fn multiplicity(&self, d: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(k, _)| k == d)
            .map_or(0, |&(_, e)| e)
    }

    /// The distinct-factor set `D`.
    pub fn divisor_set(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(d, _)| d)
    }

    /// Product of the distinct `Phi_d` with `d | r` that divide `Delta`.
    pub fn phi_for(&self, r: u64) -> LaurentPoly {
        self.factors
            .iter()
            .filter(|&&(d, _)| r.is_multiple_of(d))
            .fold(LaurentPoly::one(), |acc, &(d, _)| {
                &acc * &cyclotomic_poly(d).expect("d >= 1")
            })
    }

    /// `M = sum_{d in D} phi(d) (e_d - 1)`.
    pub fn excess_degree(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(d, e)| euler_phi(d) * (e as u64 - 1))
            .sum()
    }

    /// Multiply everything back together.
    pub fn reassemble(&self) -> LaurentPoly {
        self.factors
            .iter()
            .fold(self.non_cyclotomic_part.clone(), |acc, &(d, e)| {
                &acc * &cyclotomic_poly(d).expect("d >= 1").pow(e)
            })
    }
}

/// Largest `d` with `phi(d) <= n`; uses `phi(d) >= sqrt(d/2)`.
fn candidate_bound(n: usize) -> u64 {
    (2 * n * n).max(2) as u64
}

/// Detect every cyclotomic factor of `delta` with its multiplicity.
pub fn cyclo_factorize(delta: &LaurentPoly) -> Result<CycloFactorization> {
    if delta.is_zero() {
        return Err(Error::Degenerate("cyclotomic factorization of zero".into()));
    }
    let n = delta.span();
    let mut g = delta.clone();
    let mut factors = Vec::new();
    for d in 1..=candidate_bound(n) {
        let phi = euler_phi(d);
        if phi as usize > g.span() {
            continue;
        }
        let c = cyclotomic_poly(d)?;
        let mut e = 0;
        while let Ok(q) = g.div_exact(&c) {
            g = q;
            e += 1;
        }
        if e > 0 {
            factors.push((d, e));
        }
    }
    let gamma = factors.iter().fold(1u64, |l, &(d, _)| l.lcm(&d));
    let q = factors
        .iter()
        .find(|&&(d, _)| d == 1)
        .map_or(0, |&(_, e)| e);
    Ok(CycloFactorization {
        factors,
        gamma,
        non_cyclotomic_part: g,
        q,
    })
}

/// Value of an integer polynomial at 1, as a `BigInt`.
pub(crate) fn value_at_one(f: &LaurentPoly) -> BigInt {
    f.coeffs().iter().fold(BigInt::zero(), |a, c| a + c)
}

/// Sum of `phi(d)` over `d | r` (optionally `d > 1`) with `Phi_d | f`.
pub(crate) fn roots_of_unity_count(f: &LaurentPoly, r: u64, skip_one: bool) -> u64 {
    divisors(r)
        .into_iter()
        .filter(|&d| !(skip_one && d == 1))
        .filter(|&d| euler_phi(d) as usize <= f.span())
        .filter(|&d| f.divisible_by(&cyclotomic_poly(d).expect("d >= 1")))
        .map(euler_phi)
        .sum()
}
