//! Resultants over `Z` by the subresultant algorithm, with the two
//! specializations used throughout: `Res(f, t^r - 1)` and `Res(f, nu_r)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{substitute_blocks, PresentationMatrix};
use crate::poly::LaurentPoly;

fn ipow(b: &BigInt, e: usize) -> BigInt {
    num_traits::pow::Pow::pow(b, e)
}

/// Dense ordinary polynomial, ascending, no trailing zeros.
type Dense = Vec<BigInt>;

fn deg(p: &Dense) -> usize {
    p.len() - 1
}

fn content(p: &Dense) -> BigInt {
    use num_integer::Integer;
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn trim(mut p: Dense) -> Dense {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// `lc(b)^(deg a - deg b + 1) a mod b`, with `deg a >= deg b`.
fn prem(a: &Dense, b: &Dense) -> Dense {
    let db = deg(b);
    let lb = b[db].clone();
    let mut r = a.clone();
    let mut e = deg(a) - db + 1;
    while r.len() > db {
        let d = r.len() - 1;
        let top = r[d].clone();
        for c in r[..d].iter_mut() {
            *c *= &lb;
        }
        let k = d - db;
        for (j, bc) in b[..db].iter().enumerate() {
            r[k + j] -= &top * bc;
        }
        r.pop();
        r = trim(r);
        e -= 1;
    }
    if e > 0 {
        let f = ipow(&lb, e);
        for c in r.iter_mut() {
            *c *= &f;
        }
    }
    r
}

/// `Res(a, b)` of the unit-shifted ordinary polynomials.
///
/// The zero polynomial gives 0.  Constants follow `Res(a, c) = c^deg a`.
pub fn resultant(a: &LaurentPoly, b: &LaurentPoly) -> Result<BigInt> {
    if a.is_zero() || b.is_zero() {
        return Ok(BigInt::zero());
    }
    let mut a: Dense = a.coeffs().to_vec();
    let mut b: Dense = b.coeffs().to_vec();
    let (da, db) = (deg(&a), deg(&b));
    if db == 0 {
        return Ok(ipow(&b[0], da));
    }
    if da == 0 {
        return Ok(ipow(&a[0], db));
    }
    let mut s = BigInt::one();
    if da < db {
        std::mem::swap(&mut a, &mut b);
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
    }
    let ca = content(&a);
    let cb = content(&b);
    let t = ipow(&ca, deg(&b)) * ipow(&cb, deg(&a));
    a.iter_mut().for_each(|c| *c /= &ca);
    b.iter_mut().for_each(|c| *c /= &cb);
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (deg(&a), deg(&b));
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = prem(&a, &b);
        a = b;
        if r.is_empty() {
            return Ok(BigInt::zero());
        }
        let div = &g * ipow(&h, delta);
        b = Vec::with_capacity(r.len());
        for c in r {
            if !(&c % &div).is_zero() {
                return Err(Error::Consistency(
                    "subresultant division was not exact".into(),
                ));
            }
            b.push(c / &div);
        }
        g = a[deg(&a)].clone();
        // h <- g^delta / h^(delta - 1)
        if delta > 0 {
            h = ipow(&g, delta) / ipow(&h, delta - 1);
        }
        if deg(&b) == 0 {
            let da = deg(&a);
            let hh = ipow(&b[0], da) / ipow(&h, da - 1);
            return Ok(s * t * hh);
        }
    }
}

/// `Res(f, t^r - 1)`.
pub fn res_cyclic(f: &LaurentPoly, r: usize) -> Result<BigInt> {
    if r == 0 {
        return Err(Error::Domain("r must be >= 1".into()));
    }
    resultant(f, &LaurentPoly::cyclic(r))
}

/// `Res(f, nu_r)`; 1 for `r = 1`.
pub fn res_nu(f: &LaurentPoly, r: usize) -> Result<BigInt> {
    if r == 0 {
        return Err(Error::Domain("r must be >= 1".into()));
    }
    resultant(f, &LaurentPoly::nu(r))
}

/// `Res(f, t^r - 1)` by an independent route:
/// `(-1)^(r deg f) det f(C_r)`.
pub fn res_cyclic_via_det(f: &LaurentPoly, r: usize) -> Result<BigInt> {
    let f = f.to_ordinary();
    let m = substitute_blocks(&PresentationMatrix::cyclic(f.clone()), r)?;
    let d = m.determinant();
    Ok(if (r * f.span()) % 2 == 1 { -d } else { d })
}
