//! Integer Laurent polynomials and rational-coefficient polynomials.
//!
//! [`LaurentPoly`] is the ring element type for everything in this crate:
//! Alexander-type polynomials, cyclotomic factors, and the cyclic
//! polynomials `t^r - 1` and `1 + t + ... + t^(r-1)`.  [`RatPoly`] is an
//! ordinary polynomial over the rationals, used where exact division by
//! non-unit leading coefficients is needed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An element of `Z[t, t^-1]`, stored densely.
///
/// `coeffs[i]` is the coefficient of `t^(min_exp + i)`.  The first and last
/// coefficients are nonzero unless the polynomial is zero, in which case
/// `coeffs` is empty and `min_exp` is 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: Vec<BigInt>,
    min_exp: i64,
}

impl LaurentPoly {
    pub fn new(coeffs: Vec<BigInt>, min_exp: i64) -> Self {
        let mut p = LaurentPoly { coeffs, min_exp };
        p.normalize();
        p
    }

    /// Ordinary polynomial from ascending integer coefficients.
    pub fn from_coeffs<T: Into<BigInt> + Clone>(coeffs: &[T]) -> Self {
        Self::new(coeffs.iter().cloned().map(Into::into).collect(), 0)
    }

    pub fn from_laurent<T: Into<BigInt> + Clone>(coeffs: &[T], min_exp: i64) -> Self {
        Self::new(coeffs.iter().cloned().map(Into::into).collect(), min_exp)
    }

    pub fn zero() -> Self {
        LaurentPoly {
            coeffs: Vec::new(),
            min_exp: 0,
        }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()], 0)
    }

    /// `c * t^e`.
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        Self::new(vec![c.into()], e)
    }

    /// `t^r - 1`.
    pub fn cyclic(r: usize) -> Self {
        let mut c = vec![BigInt::zero(); r + 1];
        c[0] = BigInt::from(-1);
        c[r] += BigInt::one();
        Self::new(c, 0)
    }

    /// `nu_r = 1 + t + ... + t^(r-1)`; `nu_1 = 1`.
    pub fn nu(r: usize) -> Self {
        assert!(r >= 1, "nu_r needs r >= 1");
        Self::new(vec![BigInt::one(); r], 0)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == self.coeffs.len() {
            self.coeffs.clear();
            self.min_exp = 0;
            return;
        }
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.min_exp += lead_zeros as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    /// Highest exponent; `None` for zero.
    pub fn max_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.min_exp + self.coeffs.len() as i64 - 1)
    }

    /// Width of the exponent support, i.e. the degree of the unit-shifted
    /// ordinary polynomial.  Zero has span 0.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficient of `t^e`.
    pub fn coeff(&self, e: i64) -> BigInt {
        let i = e - self.min_exp;
        if i < 0 || i as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Coefficient of the highest power of `t`.
    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Coefficient of the lowest power of `t`.
    pub fn trailing(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly {
            coeffs: self.coeffs.clone(),
            min_exp: self.min_exp + k,
        }
    }

    /// The unit multiple `t^k f` with lowest exponent 0.
    pub fn to_ordinary(&self) -> Self {
        self.shift(-self.min_exp)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect(), self.min_exp)
    }

    /// Exact division of every coefficient by `c`; panics if not exact.
    fn div_scalar(&self, c: &BigInt) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|a| {
                    debug_assert!((a % c).is_zero());
                    a / c
                })
                .collect(),
            self.min_exp,
        )
    }

    /// Gcd of all coefficients; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `self / content`, sign kept.  Zero maps to zero.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.div_scalar(&self.content())
    }

    /// Canonical representative of the class `{±t^k f}`: lowest exponent 0
    /// and positive leading coefficient.
    pub fn unit_normalized(&self) -> Self {
        let p = self.to_ordinary();
        if p.leading().is_negative() {
            -p
        } else {
            p
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a * BigInt::from(self.min_exp + i as i64))
            .collect();
        Self::new(c, self.min_exp - 1)
    }

    /// Exact quotient `f / g`.
    pub fn div_exact(&self, g: &LaurentPoly) -> Result<LaurentPoly> {
        if g.is_zero() {
            return Err(Error::Degenerate("division by the zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        // Both supports start at a nonzero coefficient, so Laurent divisibility
        // is ordinary divisibility of the shifted polynomials.
        let (q, rem) = divrem_int(&self.coeffs, &g.coeffs);
        match q {
            Some(q) if rem.iter().all(Zero::is_zero) => Ok(Self::new(q, self.min_exp - g.min_exp)),
            _ => Err(Error::NotDivisible(format!("{self} by {g}"))),
        }
    }

    /// True iff `g` divides `self` in `Z[t, t^-1]`.
    pub fn divisible_by(&self, g: &LaurentPoly) -> bool {
        self.div_exact(g).is_ok()
    }

    /// Value at a nonzero integer, as an exact rational.
    pub fn evaluate_int(&self, x: &BigInt) -> Result<BigRational> {
        if x.is_zero() {
            if self.min_exp < 0 {
                return Err(Error::Domain(format!(
                    "cannot evaluate {self} at 0 (negative exponent)"
                )));
            }
            return Ok(BigRational::from_integer(self.coeff(0)));
        }
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        let xr = BigRational::from_integer(x.clone());
        let shift = num_traits::pow::Pow::pow(&xr, self.min_exp as i32);
        Ok(BigRational::from_integer(acc) * shift)
    }

    /// Value at `x`, required to be an integer (true whenever `min_exp >= 0`).
    pub fn eval_at_integer(&self, x: i64) -> BigInt {
        let v = self
            .evaluate_int(&BigInt::from(x))
            .expect("evaluation at a valid point");
        assert!(v.is_integer(), "non-integral value of {self} at {x}");
        v.to_integer()
    }

    /// True iff the coefficient sequence is palindromic.
    pub fn is_reciprocal(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::Degenerate(
                "reciprocity of the zero polynomial".into(),
            ));
        }
        let n = self.coeffs.len();
        Ok((0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i]))
    }

    /// Primitive gcd in `Z[t, t^-1]`, normalized by [`Self::unit_normalized`].
    pub fn gcd_primitive(&self, g: &LaurentPoly) -> Result<LaurentPoly> {
        if self.is_zero() && g.is_zero() {
            return Err(Error::Degenerate("gcd of two zero polynomials".into()));
        }
        if self.is_zero() {
            return Ok(g.primitive_part().unit_normalized());
        }
        if g.is_zero() {
            return Ok(self.primitive_part().unit_normalized());
        }
        let mut a = self.to_ordinary().primitive_part();
        let mut b = g.to_ordinary().primitive_part();
        if a.span() < b.span() {
            std::mem::swap(&mut a, &mut b);
        }
        // Primitive remainder sequence.
        while !b.is_zero() {
            let r = pseudo_rem(&a, &b);
            a = b;
            b = r.primitive_part();
        }
        Ok(a.primitive_part().unit_normalized())
    }

    /// Squarefree decomposition of the unit-shifted polynomial over `Q`:
    /// returns `(s_k, k)` with `f = c * prod s_k^k`, each `s_k` primitive
    /// with positive leading coefficient.
    pub fn squarefree_decomposition(&self) -> Vec<(LaurentPoly, u32)> {
        let f = RatPoly::from_laurent(&self.to_ordinary());
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        // Yun's algorithm, with exact rational arithmetic throughout.
        let mut out = Vec::new();
        let d = f.derivative();
        let a0 = f.gcd(&d);
        let mut b = f.div_rem(&a0).0;
        let mut c = d.div_rem(&a0).0;
        let mut k = 1;
        while b.degree().unwrap_or(0) > 0 {
            let dd = c.sub(&b.derivative());
            let a = b.gcd(&dd);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.to_primitive_integer(), k));
            }
            b = b.div_rem(&a).0;
            c = dd.div_rem(&a).0;
            k += 1;
        }
        out
    }

    /// Evaluate at a complex point given as `(re, im)` in floating point.
    pub fn eval_complex(&self, re: f64, im: f64) -> (f64, f64) {
        let (mut ar, mut ai) = (0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            let cf = bigint_to_f64(c);
            let nr = ar * re - ai * im + cf;
            let ni = ar * im + ai * re;
            ar = nr;
            ai = ni;
        }
        if self.min_exp != 0 {
            let m = (re * re + im * im).sqrt().powi(self.min_exp as i32);
            let th = im.atan2(re) * self.min_exp as f64;
            let (sr, si) = (m * th.cos(), m * th.sin());
            (ar * sr - ai * si, ar * si + ai * sr)
        } else {
            (ar, ai)
        }
    }
}

pub(crate) fn bigint_to_f64(c: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(c).unwrap_or(if c.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// Ascending-coefficient division over `Z`; `None` if some quotient step
/// is not integral.
fn divrem_int(num: &[BigInt], den: &[BigInt]) -> (Option<Vec<BigInt>>, Vec<BigInt>) {
    let mut rem = num.to_vec();
    if num.len() < den.len() {
        return (Some(vec![]), rem);
    }
    let lead = den.last().unwrap();
    let mut q = vec![BigInt::zero(); num.len() - den.len() + 1];
    for i in (0..q.len()).rev() {
        let top = &rem[i + den.len() - 1];
        if top.is_zero() {
            continue;
        }
        let (qi, r) = top.div_rem(lead);
        if !r.is_zero() {
            return (None, rem);
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &qi * d;
        }
        q[i] = qi;
    }
    (Some(q), rem)
}

/// Pseudo-remainder of ordinary polynomials: `lc(b)^(deg a - deg b + 1) a mod b`.
pub(crate) fn pseudo_rem(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let a = a.to_ordinary();
    let b = b.to_ordinary();
    let (da, db) = (a.span(), b.span());
    if a.is_zero() || da < db {
        return a;
    }
    let lb = b.leading();
    let scale = !lb.is_one();
    let mut r: Vec<BigInt> = a.coeffs.clone();
    let mut e = da - db + 1;
    while let Some(deg) = r.iter().rposition(|c| !c.is_zero()) {
        if deg < db {
            break;
        }
        let top = r[deg].clone();
        if scale {
            for c in r[..deg].iter_mut() {
                *c *= &lb;
            }
        }
        let k = deg - db;
        for (j, bc) in b.coeffs.iter().enumerate().take(db) {
            r[k + j] -= &top * bc;
        }
        r[deg] = BigInt::zero();
        e -= 1;
    }
    let rem = LaurentPoly::new(r, 0);
    if e > 0 && scale {
        rem.scale(&num_traits::pow::Pow::pow(&lb, e))
    } else {
        rem
    }
}

impl fmt::Display for LaurentPoly {
    /// Descending powers, e.g. `t^2-3t+1`, `t-1+t^-1`; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let e = self.min_exp + i as i64;
            let mag = c.abs();
            if c.is_negative() {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            if e == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match e {
                1 => write!(f, "t")?,
                _ => write!(f, "t^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.min_exp.min(rhs.min_exp);
        let hi = self.max_exp().unwrap().max(rhs.max_exp().unwrap());
        let mut c = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[(self.min_exp - lo) as usize + i] += a;
        }
        for (i, a) in rhs.coeffs.iter().enumerate() {
            c[(rhs.min_exp - lo) as usize + i] += a;
        }
        LaurentPoly::new(c, lo)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            min_exp: self.min_exp,
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        LaurentPoly::new(c, self.min_exp + rhs.min_exp)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// A polynomial over `Q` in ascending order, leading coefficient nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        RatPoly {
            coeffs: vec![BigRational::one()],
        }
    }

    /// The ordinary polynomial with the same coefficient list; the Laurent
    /// shift is discarded.
    pub fn from_laurent(p: &LaurentPoly) -> Self {
        Self::new(
            p.coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// `t - a`.
    pub fn linear_root(a: BigRational) -> Self {
        Self::new(vec![-a, BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, rhs: &RatPoly) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = BigRational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + rhs.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &RatPoly) -> Self {
        self.add(&rhs.scale(&-BigRational::one()))
    }

    pub fn mul(&self, rhs: &RatPoly) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "RatPoly division by zero");
        let mut rem = self.coeffs.clone();
        let dl = d.coeffs.len();
        if rem.len() < dl {
            return (Self::zero(), self.clone());
        }
        let lead = d.leading();
        let mut q = vec![BigRational::zero(); rem.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let top = &rem[i + dl - 1];
            if top.is_zero() {
                continue;
            }
            let qi = top / &lead;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &qi * dc;
            }
            q[i] = qi;
        }
        (Self::new(q), Self::new(rem))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Monic lcm.
    pub fn lcm(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(other);
        self.mul(other).div_rem(&g).0.monic()
    }

    pub fn derivative(&self) -> RatPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> RatPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Clear denominators and divide out the content; leading coefficient
    /// made positive.
    pub fn to_primitive_integer(&self) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        LaurentPoly::new(ints, 0).primitive_part().unit_normalized()
    }

    /// The polynomial itself if every coefficient is an integer.
    pub fn to_integer_poly(&self) -> Option<LaurentPoly> {
        self.coeffs
            .iter()
            .all(|c| c.is_integer())
            .then(|| LaurentPoly::new(self.coeffs.iter().map(|c| c.to_integer()).collect(), 0))
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}
